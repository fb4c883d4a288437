use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::potential::registry::is_near_lens_material;
use crate::potential::{
    potential_nonretarded, potential_numeric, potential_perfect_lens, potential_retarded,
    MethodRegistry, PotentialRequest, PotentialSample,
};
use crate::types::Geometry;
use crate::units::UnitSystem;

use super::config::{ConfigError, Origin, SweepConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointStatus {
    Ok,
    NotConverged,
    Failed(String),
}

impl PointStatus {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::NotConverged { .. } => PointStatus::NotConverged,
            e => PointStatus::Failed(e.to_string()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PointStatus::Ok => "ok".into(),
            PointStatus::NotConverged => "not-converged".into(),
            PointStatus::Failed(reason) => format!("failed: {reason}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        *self == PointStatus::Ok
    }
}

/// One row of a sweep; `u_norm` and `u_err` are NaN when the point failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub z_norm: f64,
    pub u_norm: f64,
    pub u_err: f64,
    /// Resolved method, or the requested one when the point failed.
    pub method: String,
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.status.is_ok()).count()
    }

    pub fn dataset(&self) -> Dataset {
        Dataset {
            columns: ["z_norm", "U_norm", "U_err", "method", "status"]
                .map(String::from)
                .to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Real(r.z_norm),
                        Cell::Real(r.u_norm),
                        Cell::Real(r.u_err),
                        Cell::Text(r.method.clone()),
                        Cell::Text(r.status.label()),
                    ]
                })
                .collect(),
            failures: self.failures(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Real(f64),
    Text(String),
}

/// Column-ordered table, the common shape of sweep and comparison output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Rows with at least one failed evaluation.
    pub failures: usize,
}

fn evaluate_all<T, F>(config: &SweepConfig, f: F) -> Result<Vec<T>, ConfigError>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    let z = config.distances();
    match config.workers {
        None => Ok(z.par_iter().map(|&z| f(z)).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError::Field {
                    field: "workers",
                    origin: Origin::Flag,
                    reason: e.to_string(),
                })?;
            Ok(pool.install(|| z.par_iter().map(|&z| f(z)).collect()))
        }
    }
}

/// Evaluates the configured method at every distance.
///
/// Points run in parallel and come back in ascending `z` order. A failed
/// point is recorded in its row; the sweep itself fails only on a broken
/// configuration.
pub fn run_sweep(config: &SweepConfig) -> Result<Sweep, ConfigError> {
    let geometry = geometry_of(config)?;
    let atom = config.atom();
    let spec = config.quadrature_spec();
    let units = UnitSystem::normalized();
    let strategy = MethodRegistry::with_builtins()
        .get(&config.method)
        .ok_or_else(|| ConfigError::Field {
            field: "method",
            origin: Origin::Default,
            reason: format!("unknown method `{}`", config.method),
        })?;
    let rows = evaluate_all(config, |z| {
        let request = PotentialRequest {
            atom: &atom,
            geometry: &geometry,
            z,
            spec: &spec,
            units: &units,
        };
        match strategy.evaluate(&request) {
            Ok(s) => SweepRow {
                z_norm: z,
                u_norm: s.value,
                u_err: s.error_estimate,
                method: s.method.name().into(),
                status: PointStatus::Ok,
            },
            Err(e) => SweepRow {
                z_norm: z,
                u_norm: f64::NAN,
                u_err: f64::NAN,
                method: config.method.clone(),
                status: PointStatus::from_error(&e),
            },
        }
    })?;
    Ok(Sweep {
        config: config.clone(),
        rows,
    })
}

fn geometry_of(config: &SweepConfig) -> Result<Geometry, ConfigError> {
    config.geometry_model().map_err(|e| ConfigError::Field {
        field: "geometry",
        origin: Origin::Default,
        reason: e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClosedForm {
    Nonretarded,
    Retarded,
    Lens,
}

impl ClosedForm {
    fn name(self) -> &'static str {
        match self {
            ClosedForm::Nonretarded => "nonretarded",
            ClosedForm::Retarded => "retarded",
            ClosedForm::Lens => "closed_form",
        }
    }
}

fn applicable_closed_forms(geometry: &Geometry) -> Vec<ClosedForm> {
    match geometry {
        Geometry::HalfSpace { .. } => vec![ClosedForm::Nonretarded, ClosedForm::Retarded],
        Geometry::PerfectLens { .. } => vec![ClosedForm::Lens],
        Geometry::SlabWithMirror { material, .. } if is_near_lens_material(material) => {
            vec![ClosedForm::Lens]
        }
        Geometry::SlabWithMirror { .. } => Vec::new(),
    }
}

/// Relative deviation of the numeric value from a closed form,
/// `|numeric − closed| / |closed|`; zero when both agree exactly.
pub fn deviation(numeric: f64, closed: f64) -> f64 {
    if numeric == closed {
        0.0
    } else {
        (numeric - closed).abs() / closed.abs()
    }
}

/// Numeric quadrature next to every closed form that applies to the
/// geometry, with relative deviation columns.
///
/// Columns: `z_norm, numeric, numeric_err`, then `<form>, dev_<form>` per
/// closed form, then `auto_method` and `status`.
pub fn compare_methods(config: &SweepConfig) -> Result<Dataset, ConfigError> {
    if config.method != "auto" {
        return Err(ConfigError::Field {
            field: "method",
            origin: Origin::Flag,
            reason: format!("compare needs method = auto, got `{}`", config.method),
        });
    }
    let geometry = geometry_of(config)?;
    let atom = config.atom();
    let spec = config.quadrature_spec();
    let units = UnitSystem::normalized();
    let forms = applicable_closed_forms(&geometry);
    let auto = MethodRegistry::with_builtins()
        .get("auto")
        .expect("auto is built in");

    let mut columns: Vec<String> = ["z_norm", "numeric", "numeric_err"]
        .map(String::from)
        .to_vec();
    for f in &forms {
        columns.push(f.name().into());
        columns.push(format!("dev_{}", f.name()));
    }
    columns.push("auto_method".into());
    columns.push("status".into());

    let rows = evaluate_all(config, |z| {
        let mut problems = Vec::new();
        let mut record = |label: &str, r: Result<PotentialSample, Error>| match r {
            Ok(s) => Some(s),
            Err(e) => {
                problems.push(format!("{label}: {}", PointStatus::from_error(&e).label()));
                None
            }
        };
        let numeric = record(
            "numeric",
            potential_numeric(&atom, &geometry, z, &spec, &units),
        );
        let numeric_value = numeric.as_ref().map_or(f64::NAN, |s| s.value);
        let mut row = vec![
            Cell::Real(z),
            Cell::Real(numeric_value),
            Cell::Real(numeric.as_ref().map_or(f64::NAN, |s| s.error_estimate)),
        ];
        for f in &forms {
            let sample = match f {
                ClosedForm::Nonretarded => geometry
                    .material()
                    .map(|m| potential_nonretarded(&atom, &m, z, &units)),
                ClosedForm::Retarded => geometry
                    .material()
                    .map(|m| potential_retarded(&atom, &m, z, &units)),
                ClosedForm::Lens => geometry
                    .thickness()
                    .map(|d| potential_perfect_lens(&atom, d, z, &units)),
            }
            .and_then(|r| record(f.name(), r));
            let value = sample.map_or(f64::NAN, |s| s.value);
            row.push(Cell::Real(value));
            row.push(Cell::Real(deviation(numeric_value, value)));
        }
        let request = PotentialRequest {
            atom: &atom,
            geometry: &geometry,
            z,
            spec: &spec,
            units: &units,
        };
        let auto_method = record("auto", auto.evaluate(&request))
            .map_or_else(|| "failed".to_string(), |s| s.method.name().to_string());
        row.push(Cell::Text(auto_method));
        let ok = problems.is_empty();
        row.push(Cell::Text(if ok {
            "ok".into()
        } else {
            problems.join("; ")
        }));
        (row, ok)
    })?;
    let failures = rows.iter().filter(|(_, ok)| !ok).count();
    Ok(Dataset {
        columns,
        rows: rows.into_iter().map(|(r, _)| r).collect(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::config::{DipoleKind, GeometryKind};

    fn cfg(points: usize) -> SweepConfig {
        SweepConfig {
            points,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn vacuum_sweep_is_all_zero() {
        let sweep = run_sweep(&cfg(12)).unwrap();
        assert_eq!(sweep.failures(), 0);
        assert!(sweep.rows.iter().all(|r| r.u_norm == 0.0));
    }

    #[test]
    fn rows_are_ordered_and_independent_of_workers() {
        let base = SweepConfig {
            eps_re: -3.0,
            eps_im: 1e-3,
            zmin: 0.05,
            zmax: 10.0,
            ..cfg(16)
        };
        let serial = run_sweep(&SweepConfig {
            workers: Some(1),
            ..base.clone()
        })
        .unwrap();
        let parallel = run_sweep(&SweepConfig {
            workers: Some(4),
            ..base
        })
        .unwrap();
        assert_eq!(serial.rows, parallel.rows);
        assert!(serial.rows.windows(2).all(|w| w[0].z_norm < w[1].z_norm));
    }

    #[test]
    fn failed_points_are_recorded_in_row() {
        // √ε + √μ = 0: the retarded limit has no finite value.
        let config = SweepConfig {
            eps_re: 0.0,
            mu_re: 0.0,
            zmin: 10.0,
            zmax: 20.0,
            method: "retarded".into(),
            ..cfg(3)
        };
        let sweep = run_sweep(&config).unwrap();
        assert_eq!(sweep.failures(), 3);
        for r in &sweep.rows {
            assert!(r.u_norm.is_nan());
            assert_eq!(r.method, "retarded");
            assert!(
                r.status.label().starts_with("failed: "),
                "{}",
                r.status.label()
            );
        }
    }

    #[test]
    fn compare_lists_applicable_forms() {
        let config = SweepConfig {
            geometry: GeometryKind::PerfectLens,
            thickness: Some(5.0),
            zmin: 5.5,
            zmax: 6.5,
            dipole: DipoleKind::Perp,
            ..cfg(3)
        };
        let data = compare_methods(&config).unwrap();
        assert_eq!(
            data.columns,
            [
                "z_norm",
                "numeric",
                "numeric_err",
                "closed_form",
                "dev_closed_form",
                "auto_method",
                "status"
            ]
        );
        for row in &data.rows {
            // The ideal lens is integrated with exact reflection coefficients.
            let Cell::Real(dev) = row[4] else { panic!() };
            assert!(dev < 1e-6, "{dev}");
            assert_eq!(row[5], Cell::Text("closed-form".into()));
        }
    }

    #[test]
    fn compare_requires_auto() {
        let config = SweepConfig {
            method: "numeric".into(),
            ..cfg(3)
        };
        assert!(matches!(
            compare_methods(&config),
            Err(ConfigError::Field {
                field: "method",
                ..
            })
        ));
    }

    #[test]
    fn impedance_matched_retarded_column_is_zero() {
        let config = SweepConfig {
            eps_re: 2.0,
            eps_im: 0.1,
            mu_re: 2.0,
            mu_im: 0.1,
            zmin: 1.0,
            zmax: 50.0,
            ..cfg(4)
        };
        let data = compare_methods(&config).unwrap();
        let col = data.columns.iter().position(|c| c == "retarded").unwrap();
        assert!(data.rows.iter().all(|r| r[col] == Cell::Real(0.0)));
    }
}
