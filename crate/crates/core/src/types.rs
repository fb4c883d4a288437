//! Domain model: materials, atomic transitions and planar geometries.
//!
//! Every type here is an immutable value object validated at construction.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative permittivity and permeability of a medium at one transition
/// frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialResponse {
    epsilon: Complex64,
    mu: Complex64,
}

impl MaterialResponse {
    pub const VACUUM: MaterialResponse = MaterialResponse {
        epsilon: Complex64::new(1.0, 0.0),
        mu: Complex64::new(1.0, 0.0),
    };

    /// Validates passivity (Im ε ≥ 0, Im μ ≥ 0) and finiteness.
    ///
    /// Lossless media (zero imaginary parts) are admitted; the dispersion
    /// module fixes their branch by the `+i0` limit.
    pub fn new(epsilon: Complex64, mu: Complex64) -> Result<Self> {
        if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
            return Err(Error::NonFinite("epsilon"));
        }
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return Err(Error::NonFinite("mu"));
        }
        if epsilon.im < 0.0 {
            return Err(Error::PassivityViolation {
                quantity: "epsilon",
                value: epsilon.im,
            });
        }
        if mu.im < 0.0 {
            return Err(Error::PassivityViolation {
                quantity: "mu",
                value: mu.im,
            });
        }
        Ok(Self { epsilon, mu })
    }

    pub fn from_parts(eps_re: f64, eps_im: f64, mu_re: f64, mu_im: f64) -> Result<Self> {
        Self::new(Complex64::new(eps_re, eps_im), Complex64::new(mu_re, mu_im))
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn is_vacuum(&self) -> bool {
        *self == Self::VACUUM
    }

    /// True when ε = 1 exactly, i.e. the medium responds only magnetically.
    pub fn is_purely_magnetic(&self) -> bool {
        self.epsilon == Complex64::new(1.0, 0.0)
    }
}

/// Validated form of [`MaterialResponse::new`].
pub fn validate_material(epsilon: Complex64, mu: Complex64) -> Result<MaterialResponse> {
    MaterialResponse::new(epsilon, mu)
}

/// One downward transition `n → k` of the excited atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    omega: f64,
    d_par_sq: f64,
    d_perp_sq: f64,
}

impl Transition {
    /// `omega` is the angular transition frequency, `d_par_sq` and
    /// `d_perp_sq` the squared dipole matrix element components parallel
    /// and perpendicular to the surface.
    pub fn new(omega: f64, d_par_sq: f64, d_perp_sq: f64) -> Result<Self> {
        if !omega.is_finite() || !d_par_sq.is_finite() || !d_perp_sq.is_finite() {
            return Err(Error::NonFinite("transition"));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: format!("must be positive, got {omega}"),
            });
        }
        if d_par_sq < 0.0 || d_perp_sq < 0.0 {
            return Err(Error::InvalidParameter {
                name: "dipole",
                reason: "squared dipole components must be non-negative".into(),
            });
        }
        if d_par_sq + d_perp_sq <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "dipole",
                reason: "transition has zero dipole moment".into(),
            });
        }
        Ok(Self {
            omega,
            d_par_sq,
            d_perp_sq,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn d_par_sq(&self) -> f64 {
        self.d_par_sq
    }

    pub fn d_perp_sq(&self) -> f64 {
        self.d_perp_sq
    }
}

/// An excited atom, represented by its downward transitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    transitions: Vec<Transition>,
}

impl Atom {
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidParameter {
                name: "transitions",
                reason: "atom needs at least one downward transition".into(),
            });
        }
        Ok(Self { transitions })
    }

    /// Convenience constructor for a two-level atom.
    pub fn two_level(omega: f64, d_par_sq: f64, d_perp_sq: f64) -> Result<Self> {
        Ok(Self {
            transitions: vec![Transition::new(omega, d_par_sq, d_perp_sq)?],
        })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn omega_max(&self) -> f64 {
        self.transitions
            .iter()
            .map(Transition::omega)
            .fold(f64::MIN, f64::max)
    }

    pub fn omega_min(&self) -> f64 {
        self.transitions
            .iter()
            .map(Transition::omega)
            .fold(f64::MAX, f64::min)
    }
}

/// Planar structure occupying `z ≤ 0`; the atom sits at `z_A > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    HalfSpace {
        material: MaterialResponse,
    },
    /// Slab of the given thickness with a perfect conductor behind it.
    SlabWithMirror {
        material: MaterialResponse,
        thickness: f64,
    },
    /// Lossless ε = μ = −1 slab with a perfect conductor behind it.
    PerfectLens {
        thickness: f64,
    },
}

impl Geometry {
    pub fn half_space(material: MaterialResponse) -> Self {
        Geometry::HalfSpace { material }
    }

    pub fn slab_with_mirror(material: MaterialResponse, thickness: f64) -> Result<Self> {
        check_thickness(thickness)?;
        Ok(Geometry::SlabWithMirror {
            material,
            thickness,
        })
    }

    pub fn perfect_lens(thickness: f64) -> Result<Self> {
        check_thickness(thickness)?;
        Ok(Geometry::PerfectLens { thickness })
    }

    pub fn material(&self) -> Option<MaterialResponse> {
        match self {
            Geometry::HalfSpace { material } | Geometry::SlabWithMirror { material, .. } => {
                Some(*material)
            }
            Geometry::PerfectLens { .. } => None,
        }
    }

    pub fn thickness(&self) -> Option<f64> {
        match self {
            Geometry::HalfSpace { .. } => None,
            Geometry::SlabWithMirror { thickness, .. } | Geometry::PerfectLens { thickness } => {
                Some(*thickness)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::HalfSpace { .. } => "halfspace",
            Geometry::SlabWithMirror { .. } => "slab-mirror",
            Geometry::PerfectLens { .. } => "perfect-lens",
        }
    }
}

fn check_thickness(thickness: f64) -> Result<()> {
    if !thickness.is_finite() {
        return Err(Error::NonFinite("thickness"));
    }
    if thickness <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "thickness",
            reason: format!("must be positive, got {thickness}"),
        });
    }
    Ok(())
}
