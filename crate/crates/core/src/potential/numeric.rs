use crate::error::Result;
use crate::green::{green_xx, green_zz};
use crate::quadrature::QuadratureSpec;
use crate::types::{Atom, Geometry};
use crate::units::UnitSystem;

use super::{PotentialMethod, PotentialSample};

/// Potential from the numerically integrated Green tensor.
///
/// Components with a vanishing dipole weight are not integrated. The error
/// estimate propagates the quadrature errors linearly.
pub fn potential_numeric(
    atom: &Atom,
    geometry: &Geometry,
    z: f64,
    spec: &QuadratureSpec,
    units: &UnitSystem,
) -> Result<PotentialSample> {
    let mu0 = units.vacuum_permeability();
    let c = units.speed_of_light();
    let mut contributions = Vec::with_capacity(atom.transitions().len());
    let mut error = 0.0;
    for t in atom.transitions() {
        let k = t.omega() / c;
        let weight = mu0 * t.omega() * t.omega();
        let mut u = 0.0;
        if t.d_par_sq() > 0.0 {
            let g = green_xx(z, k, geometry, spec)?;
            u -= weight * g.value.re * t.d_par_sq();
            error += weight * g.error_estimate * t.d_par_sq();
        }
        if t.d_perp_sq() > 0.0 {
            let g = green_zz(z, k, geometry, spec)?;
            u -= weight * g.value.re * t.d_perp_sq();
            error += weight * g.error_estimate * t.d_perp_sq();
        }
        contributions.push(u);
    }
    Ok(PotentialSample::from_contributions(
        z,
        PotentialMethod::NumericQuadrature,
        contributions,
        error,
    ))
}
