//! Unit conventions.
//!
//! Every formula is written against two constants, the vacuum speed of light
//! `c` and the vacuum permeability `μ₀`. In normalized mode lengths are
//! measured in `c/ω_ref`, frequencies in `ω_ref`, squared dipoles in
//! `d_ref²` and potentials in `U₀ = μ₀ ω_ref³ d_ref² / (8π c)`; this is
//! equivalent to `c = 1` and an effective `μ₀ = 8π`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// Reference scales of the normalized unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedScales {
    /// Reference angular frequency in rad/s.
    pub omega_ref: f64,
    /// Reference squared dipole moment in C²m².
    pub d_ref_sq: f64,
}

impl NormalizedScales {
    pub fn new(omega_ref: f64, d_ref_sq: f64) -> Result<Self> {
        if !(omega_ref.is_finite() && omega_ref > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_ref",
                reason: format!("must be positive and finite, got {omega_ref}"),
            });
        }
        if !(d_ref_sq.is_finite() && d_ref_sq > 0.0) {
            return Err(Error::InvalidParameter {
                name: "d_ref_sq",
                reason: format!("must be positive and finite, got {d_ref_sq}"),
            });
        }
        Ok(Self {
            omega_ref,
            d_ref_sq,
        })
    }

    /// Reference length `c/ω_ref` in metres.
    pub fn length_scale(&self) -> f64 {
        SPEED_OF_LIGHT / self.omega_ref
    }

    /// `U₀` in joules.
    pub fn potential_scale(&self) -> f64 {
        VACUUM_PERMEABILITY * self.omega_ref.powi(3) * self.d_ref_sq / (8.0 * PI * SPEED_OF_LIGHT)
    }

    pub fn length_to_si(&self, z: f64) -> f64 {
        z * self.length_scale()
    }

    pub fn length_to_normalized(&self, z_si: f64) -> f64 {
        z_si / self.length_scale()
    }

    pub fn frequency_to_si(&self, omega: f64) -> f64 {
        omega * self.omega_ref
    }

    pub fn frequency_to_normalized(&self, omega_si: f64) -> f64 {
        omega_si / self.omega_ref
    }

    pub fn dipole_sq_to_si(&self, d_sq: f64) -> f64 {
        d_sq * self.d_ref_sq
    }

    pub fn dipole_sq_to_normalized(&self, d_sq_si: f64) -> f64 {
        d_sq_si / self.d_ref_sq
    }

    pub fn potential_to_si(&self, u: f64) -> f64 {
        u * self.potential_scale()
    }

    pub fn potential_to_normalized(&self, u_si: f64) -> f64 {
        u_si / self.potential_scale()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum UnitSystem {
    Si,
    Normalized(NormalizedScales),
}

impl UnitSystem {
    /// Normalized units with unit reference scales; the CLI default.
    pub fn normalized() -> Self {
        UnitSystem::Normalized(NormalizedScales {
            omega_ref: 1.0,
            d_ref_sq: 1.0,
        })
    }

    pub fn speed_of_light(&self) -> f64 {
        match self {
            UnitSystem::Si => SPEED_OF_LIGHT,
            UnitSystem::Normalized(_) => 1.0,
        }
    }

    pub fn vacuum_permeability(&self) -> f64 {
        match self {
            UnitSystem::Si => VACUUM_PERMEABILITY,
            UnitSystem::Normalized(_) => 8.0 * PI,
        }
    }

    /// `1/ε₀ = μ₀ c²` in this system.
    pub fn inverse_permittivity(&self) -> f64 {
        let c = self.speed_of_light();
        self.vacuum_permeability() * c * c
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::normalized()
    }
}
