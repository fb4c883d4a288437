use crate::error::Result;
use crate::quadrature::QuadratureSpec;
use crate::types::{Atom, Geometry};
use crate::units::UnitSystem;

use super::{
    potential_nonretarded, potential_numeric, potential_perfect_lens, potential_retarded,
    PotentialSample, Warning,
};

/// Half spaces with `z ω_max/c` below this use the nonretarded limit.
pub const NONRETARDED_THRESHOLD: f64 = 1e-2;
/// Half spaces with `z ω_min/c` above this use the retarded limit.
pub const RETARDED_THRESHOLD: f64 = 1e3;
/// Largest relative deviation from quadrature at which the nonretarded
/// limit is still accepted.
pub const CROSS_CHECK_TOLERANCE: f64 = 5e-2;

/// Picks one method per point from the geometry and `z ω/c`.
///
/// - perfect lens: closed form;
/// - half space, `z ω_max/c < 10⁻²`: nonretarded limit, cross-checked
///   against quadrature at the same point and replaced by it when the two
///   differ by more than [`CROSS_CHECK_TOLERANCE`];
/// - half space, `z ω_min/c > 10³`: retarded limit;
/// - otherwise quadrature.
///
/// Slabs always use quadrature; the retarded half-space limit ignores the
/// mirror.
pub fn potential_auto(
    atom: &Atom,
    geometry: &Geometry,
    z: f64,
    spec: &QuadratureSpec,
    units: &UnitSystem,
) -> Result<PotentialSample> {
    let c = units.speed_of_light();
    match geometry {
        Geometry::PerfectLens { thickness } => potential_perfect_lens(atom, *thickness, z, units),
        Geometry::HalfSpace { material } if z * atom.omega_max() / c < NONRETARDED_THRESHOLD => {
            let limit = potential_nonretarded(atom, material, z, units)?;
            let numeric = potential_numeric(atom, geometry, z, spec, units)?;
            let deviation = relative_deviation(limit.value, numeric.value);
            if deviation <= CROSS_CHECK_TOLERANCE {
                Ok(PotentialSample {
                    cross_check: Some(deviation),
                    ..limit
                })
            } else {
                let mut sample = numeric;
                sample.cross_check = Some(deviation);
                sample
                    .warnings
                    .push(Warning::CrossCheckFailed { deviation });
                Ok(sample)
            }
        }
        Geometry::HalfSpace { material } if z * atom.omega_min() / c > RETARDED_THRESHOLD => {
            potential_retarded(atom, material, z, units)
        }
        _ => potential_numeric(atom, geometry, z, spec, units),
    }
}

fn relative_deviation(approx: f64, reference: f64) -> f64 {
    if approx == reference {
        0.0
    } else {
        (approx - reference).abs() / reference.abs()
    }
}
