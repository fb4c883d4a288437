//! Closed-form limits of the resonant potential.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dispersion::sqrt_upper;
use crate::error::{Error, Result};
use crate::types::{Atom, MaterialResponse};
use crate::units::UnitSystem;

use super::{PotentialMethod, PotentialSample, Warning};

const NEAR_UNIT_PERMITTIVITY: f64 = 1e-6;

fn check_distance(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "z",
            reason: format!("distance must be positive, got {z}"),
        })
    }
}

/// `(|x|² − 1)/|x + 1|²`, the real part of `(x − 1)/(x + 1)`.
fn image_factor(x: Complex64) -> f64 {
    (x.norm_sqr() - 1.0) / (x + 1.0).norm_sqr()
}

/// Short-distance limit `z_A ω/c ≪ 1` of a half space.
///
/// Electric media give the z⁻³ law
/// `U = −Σ (|d∥|² + 2|d⊥|²)/(32π ε₀ z³) · (|ε|² − 1)/|ε + 1|²`;
/// when ε = 1 exactly the z⁻¹ magnetic law
/// `U = −Σ μ₀ω²|d∥|²/(16π z) · (|μ|² − 1)/|μ + 1|²` is used instead.
pub fn potential_nonretarded(
    atom: &Atom,
    material: &MaterialResponse,
    z: f64,
    units: &UnitSystem,
) -> Result<PotentialSample> {
    check_distance(z)?;
    let c = units.speed_of_light();
    let mu0 = units.vacuum_permeability();
    let contributions: Vec<f64> = if material.is_purely_magnetic() {
        let factor = image_factor(material.mu());
        atom.transitions()
            .iter()
            .map(|t| -mu0 * t.omega() * t.omega() * t.d_par_sq() * factor / (16.0 * PI * z))
            .collect()
    } else {
        let factor = image_factor(material.epsilon());
        let inv_eps0 = units.inverse_permittivity();
        atom.transitions()
            .iter()
            .map(|t| {
                -(t.d_par_sq() + 2.0 * t.d_perp_sq()) * inv_eps0 * factor / (32.0 * PI * z.powi(3))
            })
            .collect()
    };
    let retardation = z * atom.omega_max() / c;
    let error = contributions.iter().map(|u| u.abs()).sum::<f64>() * retardation;
    let mut sample = PotentialSample::from_contributions(
        z,
        PotentialMethod::NonretardedLimit,
        contributions,
        error,
    );
    let eps = material.epsilon();
    if !material.is_purely_magnetic() && (eps - 1.0).norm() < NEAR_UNIT_PERMITTIVITY {
        sample.warnings.push(Warning::NearUnitPermittivity);
    }
    Ok(sample)
}

/// Long-distance limit `z_A ω/c ≫ 1` of a half space:
/// `U = Σ μ₀ω²|d∥|²/(8π z) · Re{e^{2izω/c} (√ε − √μ)/(√ε + √μ)}`.
///
/// Only the parallel dipole enters at this order.
pub fn potential_retarded(
    atom: &Atom,
    material: &MaterialResponse,
    z: f64,
    units: &UnitSystem,
) -> Result<PotentialSample> {
    check_distance(z)?;
    let se = sqrt_upper(material.epsilon());
    let sm = sqrt_upper(material.mu());
    let denominator = se + sm;
    if denominator.norm() < 1e-12 {
        return Err(Error::DegenerateDenominator { polarization: "s" });
    }
    let reflection = (se - sm) / denominator;
    let c = units.speed_of_light();
    let mu0 = units.vacuum_permeability();
    let mut error = 0.0;
    let contributions = atom
        .transitions()
        .iter()
        .map(|t| {
            let x = 2.0 * z * t.omega() / c;
            let amplitude = mu0 * t.omega() * t.omega() / (8.0 * PI * z);
            error += amplitude * (t.d_par_sq() + t.d_perp_sq()) * 2.0 / x;
            amplitude * t.d_par_sq() * (Complex64::from_polar(1.0, x) * reflection).re
        })
        .collect();
    let mut sample = PotentialSample::from_contributions(
        z,
        PotentialMethod::RetardedLimit,
        contributions,
        error,
    );
    if atom.transitions().iter().any(|t| t.d_perp_sq() > 0.0) {
        sample.warnings.push(Warning::PerpendicularDipoleOmitted);
    }
    Ok(sample)
}

/// Ideal lossless lens of thickness `d` backed by a mirror, `z_A > d`:
///
/// ```text
/// U = −Σ μ₀ω³/(4πc z̃³) { [cos z̃ + z̃ sin z̃ − z̃² cos z̃] |d∥|²
///                       + 2 [cos z̃ + z̃ sin z̃] |d⊥|² },   z̃ = 2ω(z_A − d)/c
/// ```
pub fn potential_perfect_lens(
    atom: &Atom,
    d: f64,
    z: f64,
    units: &UnitSystem,
) -> Result<PotentialSample> {
    check_distance(z)?;
    if !(z > d && z.is_finite()) {
        return Err(Error::DomainError(format!(
            "perfect-lens potential diverges at the focal plane and is undefined for z_A ≤ d \
             (z_A = {z}, d = {d})"
        )));
    }
    let c = units.speed_of_light();
    let mu0 = units.vacuum_permeability();
    let contributions = atom
        .transitions()
        .iter()
        .map(|t| {
            let zt = 2.0 * t.omega() * (z - d) / c;
            let (sin, cos) = zt.sin_cos();
            let near = cos + zt * sin;
            let par = near - zt * zt * cos;
            let prefactor = mu0 * t.omega().powi(3) / (4.0 * PI * c * zt.powi(3));
            -prefactor * (par * t.d_par_sq() + 2.0 * near * t.d_perp_sq())
        })
        .collect();
    Ok(PotentialSample::from_contributions(
        z,
        PotentialMethod::PerfectLensClosedForm,
        contributions,
        0.0,
    ))
}
