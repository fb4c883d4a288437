//! Named potential evaluation strategies.
//!
//! Every method sits behind [`PotentialStrategy`]; the CLI resolves
//! `--method <name>` through a [`MethodRegistry`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::types::{Atom, Geometry, MaterialResponse};
use crate::units::UnitSystem;

use super::{
    potential_auto, potential_nonretarded, potential_numeric, potential_perfect_lens,
    potential_retarded, PotentialMethod, PotentialSample, Warning,
};

/// Everything a strategy needs to evaluate the potential at one distance.
#[derive(Debug, Clone, Copy)]
pub struct PotentialRequest<'a> {
    pub atom: &'a Atom,
    pub geometry: &'a Geometry,
    pub z: f64,
    pub spec: &'a QuadratureSpec,
    pub units: &'a UnitSystem,
}

pub trait PotentialStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn method(&self) -> PotentialMethod;

    fn description(&self) -> &'static str;

    fn evaluate(&self, request: &PotentialRequest<'_>) -> Result<PotentialSample>;
}

fn half_space_material(request: &PotentialRequest<'_>, method: &str) -> Result<MaterialResponse> {
    match request.geometry {
        Geometry::HalfSpace { material } => Ok(*material),
        other => Err(Error::DomainError(format!(
            "{method} limit applies to a half space, not {}",
            other.name()
        ))),
    }
}

pub struct NumericQuadrature;

impl PotentialStrategy for NumericQuadrature {
    fn name(&self) -> &'static str {
        "numeric"
    }

    fn method(&self) -> PotentialMethod {
        PotentialMethod::NumericQuadrature
    }

    fn description(&self) -> &'static str {
        "adaptive Gauss-Kronrod quadrature of the scattering Green tensor"
    }

    fn evaluate(&self, r: &PotentialRequest<'_>) -> Result<PotentialSample> {
        potential_numeric(r.atom, r.geometry, r.z, r.spec, r.units)
    }
}

pub struct NonretardedLimit;

impl PotentialStrategy for NonretardedLimit {
    fn name(&self) -> &'static str {
        "nonretarded"
    }

    fn method(&self) -> PotentialMethod {
        PotentialMethod::NonretardedLimit
    }

    fn description(&self) -> &'static str {
        "half-space short-distance limit (z^-3 electric, z^-1 purely magnetic)"
    }

    fn evaluate(&self, r: &PotentialRequest<'_>) -> Result<PotentialSample> {
        let material = half_space_material(r, self.name())?;
        potential_nonretarded(r.atom, &material, r.z, r.units)
    }
}

pub struct RetardedLimit;

impl PotentialStrategy for RetardedLimit {
    fn name(&self) -> &'static str {
        "retarded"
    }

    fn method(&self) -> PotentialMethod {
        PotentialMethod::RetardedLimit
    }

    fn description(&self) -> &'static str {
        "half-space long-distance oscillating limit"
    }

    fn evaluate(&self, r: &PotentialRequest<'_>) -> Result<PotentialSample> {
        let material = half_space_material(r, self.name())?;
        potential_retarded(r.atom, &material, r.z, r.units)
    }
}

/// Ideal-lens closed form. Also accepts a slab with mirror, using its
/// thickness and flagging materials far from ε = μ = −1.
pub struct PerfectLensClosedForm;

/// Distance of ε and μ from −1 beyond which a slab is flagged as idealized.
const LENS_MATERIAL_TOLERANCE: f64 = 5e-2;

impl PotentialStrategy for PerfectLensClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn method(&self) -> PotentialMethod {
        PotentialMethod::PerfectLensClosedForm
    }

    fn description(&self) -> &'static str {
        "lossless perfect-lens closed form, valid beyond the focal plane"
    }

    fn evaluate(&self, r: &PotentialRequest<'_>) -> Result<PotentialSample> {
        match r.geometry {
            Geometry::PerfectLens { thickness } => {
                potential_perfect_lens(r.atom, *thickness, r.z, r.units)
            }
            Geometry::SlabWithMirror {
                material,
                thickness,
            } => {
                let mut sample = potential_perfect_lens(r.atom, *thickness, r.z, r.units)?;
                if !is_near_lens_material(material) {
                    sample.warnings.push(Warning::IdealizedLens);
                }
                Ok(sample)
            }
            Geometry::HalfSpace { .. } => Err(Error::DomainError(
                "perfect-lens closed form needs a slab thickness".into(),
            )),
        }
    }
}

pub fn is_near_lens_material(material: &MaterialResponse) -> bool {
    (material.epsilon() + 1.0).norm() <= LENS_MATERIAL_TOLERANCE
        && (material.mu() + 1.0).norm() <= LENS_MATERIAL_TOLERANCE
}

pub struct Auto;

impl PotentialStrategy for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn method(&self) -> PotentialMethod {
        PotentialMethod::Auto
    }

    fn description(&self) -> &'static str {
        "per-point dispatch among the other methods by geometry and distance"
    }

    fn evaluate(&self, r: &PotentialRequest<'_>) -> Result<PotentialSample> {
        potential_auto(r.atom, r.geometry, r.z, r.spec, r.units)
    }
}

#[derive(Clone, Default)]
pub struct MethodRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn PotentialStrategy>>,
}

impl MethodRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut registry = Self::new();
        registry.register(Arc::new(Auto));
        registry.register(Arc::new(NumericQuadrature));
        registry.register(Arc::new(NonretardedLimit));
        registry.register(Arc::new(RetardedLimit));
        registry.register(Arc::new(PerfectLensClosedForm));
        registry
    }

    /// Registers a strategy, replacing any previous one of the same name.
    pub fn register(
        &mut self,
        strategy: Arc<dyn PotentialStrategy>,
    ) -> Option<Arc<dyn PotentialStrategy>> {
        self.strategies.insert(strategy.name(), strategy)
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn PotentialStrategy>> {
        self.strategies.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }

    pub fn strategies(&self) -> impl Iterator<Item = &Arc<dyn PotentialStrategy>> {
        self.strategies.values()
    }
}

impl std::fmt::Debug for MethodRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
