//! Resonant Casimir–Polder potential of an excited atom.
//!
//! ```text
//! U(z_A) = −μ₀ Σ_k ω_k² [ Re G_xx(ω_k) |d∥_k|² + Re G_zz(ω_k) |d⊥_k|² ]
//! ```
//!
//! Evaluation methods are interchangeable strategies, see [`registry`].

mod auto;
mod closed_form;
mod numeric;
pub mod registry;

use std::fmt;

use serde::Serialize;

pub use auto::{potential_auto, CROSS_CHECK_TOLERANCE, NONRETARDED_THRESHOLD, RETARDED_THRESHOLD};
pub use closed_form::{potential_nonretarded, potential_perfect_lens, potential_retarded};
pub use numeric::potential_numeric;
pub use registry::{MethodRegistry, PotentialRequest, PotentialStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialMethod {
    NumericQuadrature,
    NonretardedLimit,
    RetardedLimit,
    PerfectLensClosedForm,
    Auto,
}

impl PotentialMethod {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialMethod::NumericQuadrature => "numeric",
            PotentialMethod::NonretardedLimit => "nonretarded",
            PotentialMethod::RetardedLimit => "retarded",
            PotentialMethod::PerfectLensClosedForm => "closed-form",
            PotentialMethod::Auto => "auto",
        }
    }
}

impl fmt::Display for PotentialMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Warning {
    /// ε is within 10⁻⁶ of 1 but not equal: the potential crosses over
    /// between the z⁻³ and z⁻¹ laws and neither limit dominates.
    NearUnitPermittivity,
    /// Auto dispatch rejected the nonretarded limit at this point.
    CrossCheckFailed { deviation: f64 },
    /// The ideal-lens formula was applied to a slab whose material is not
    /// close to ε = μ = −1.
    IdealizedLens,
    /// The retarded limit keeps only the parallel dipole.
    PerpendicularDipoleOmitted,
}

/// Potential at one distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSample {
    pub z: f64,
    pub value: f64,
    /// Resolved method; never `Auto`.
    pub method: PotentialMethod,
    pub error_estimate: f64,
    pub per_transition: Vec<f64>,
    pub warnings: Vec<Warning>,
    /// Relative deviation of a closed form from the numeric value, when
    /// auto dispatch checked it.
    pub cross_check: Option<f64>,
}

impl PotentialSample {
    fn from_contributions(
        z: f64,
        method: PotentialMethod,
        per_transition: Vec<f64>,
        error_estimate: f64,
    ) -> Self {
        Self {
            z,
            value: per_transition.iter().sum(),
            method,
            error_estimate,
            per_transition,
            warnings: Vec::new(),
            cross_check: None,
        }
    }
}
