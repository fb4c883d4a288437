use std::fmt;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::potential::MethodRegistry;
use crate::quadrature::QuadratureSpec;
use crate::types::{Atom, Geometry, MaterialResponse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum GeometryKind {
    #[serde(rename = "halfspace")]
    #[value(name = "halfspace")]
    HalfSpace,
    #[serde(rename = "slab-mirror")]
    #[value(name = "slab-mirror")]
    SlabMirror,
    #[serde(rename = "perfect-lens")]
    #[value(name = "perfect-lens")]
    PerfectLens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DipoleKind {
    Par,
    Perp,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Sweep parameters as given by flags or a TOML file; every field optional.
///
/// File keys are the flag names without the leading dashes.
#[derive(Debug, Clone, Default, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigOverrides {
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryKind>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_im: Option<f64>,
    /// Slab thickness in units of c/ω.
    #[arg(long)]
    pub thickness: Option<f64>,
    /// Smallest atom-surface distance in units of c/ω.
    #[arg(long, allow_negative_numbers = true)]
    pub zmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub zmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    #[arg(long, value_enum)]
    pub dipole: Option<DipoleKind>,
    /// Parallel dipole weight |d∥|²/d² for a mixed dipole.
    #[arg(long)]
    pub w_par: Option<f64>,
    /// Perpendicular dipole weight |d⊥|²/d² for a mixed dipole.
    #[arg(long)]
    pub w_perp: Option<f64>,
    /// auto, numeric, nonretarded, retarded or closed-form.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub reproducible: bool,
}

/// Command-line arguments shared by the `sweep` and `compare` commands.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: ConfigOverrides,
}

impl SweepArgs {
    pub fn load(&self) -> Result<SweepConfig, ConfigError> {
        match &self.config {
            None => SweepConfig::resolve(None, self.overrides.clone()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                SweepConfig::resolve(Some((path, &text)), self.overrides.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Default,
    Flag,
    File { path: PathBuf, line: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{}: {reason}", describe(field, origin))]
    Field {
        field: &'static str,
        origin: Origin,
        reason: String,
    },
}

fn describe(field: &str, origin: &Origin) -> String {
    match origin {
        Origin::Default => format!("{field} (default)"),
        Origin::Flag => format!("--{field}"),
        Origin::File {
            path,
            line: Some(line),
        } => format!("{}:{line}: {field}", path.display()),
        Origin::File { path, line: None } => format!("{}: {field}", path.display()),
    }
}

/// A validated sweep, in normalized units: lengths in c/ω and potentials
/// in U₀ = μ₀ω³d²/(8πc) for the single transition ω = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SweepConfig {
    pub geometry: GeometryKind,
    pub eps_re: f64,
    pub eps_im: f64,
    pub mu_re: f64,
    pub mu_im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
    pub zmin: f64,
    pub zmax: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub dipole: DipoleKind,
    pub w_par: f64,
    pub w_perp: f64,
    pub method: String,
    pub rel_tol: f64,
    pub format: OutputFormat,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub reproducible: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            geometry: GeometryKind::HalfSpace,
            eps_re: 1.0,
            eps_im: 0.0,
            mu_re: 1.0,
            mu_im: 0.0,
            thickness: None,
            zmin: 0.01,
            zmax: 10.0,
            points: 200,
            spacing: Spacing::Log,
            dipole: DipoleKind::Par,
            w_par: 1.0,
            w_perp: 1.0,
            method: "auto".into(),
            rel_tol: QuadratureSpec::default().rel_tol,
            format: OutputFormat::Csv,
            output: None,
            workers: None,
            reproducible: false,
        }
    }
}

struct Sources<'a> {
    file: Option<(&'a Path, &'a str)>,
    from_file: ConfigOverrides,
    flags: ConfigOverrides,
}

impl Sources<'_> {
    fn origin(&self, field: &'static str, in_flags: bool, in_file: bool) -> Origin {
        if in_flags {
            Origin::Flag
        } else if let (true, Some((path, text))) = (in_file, self.file) {
            Origin::File {
                path: path.to_path_buf(),
                line: key_line(text, field),
            }
        } else {
            Origin::Default
        }
    }
}

/// Line of `key = ...` in a flat TOML document, 1-based.
fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|line| {
            line.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

macro_rules! merge {
    ($src:expr, $cfg:expr, $origins:expr, $($field:ident => $name:literal),* $(,)?) => {
        $(
            $origins.push(($name, $src.origin($name, $src.flags.$field.is_some(), $src.from_file.$field.is_some())));
            if let Some(v) = $src.flags.$field.clone().or($src.from_file.$field.clone()) {
                $cfg.$field = v.into();
            }
        )*
    };
}

impl SweepConfig {
    /// Merges an optional TOML file with flag overrides and validates.
    pub fn resolve(
        file: Option<(&Path, &str)>,
        flags: ConfigOverrides,
    ) -> Result<Self, ConfigError> {
        let from_file = match file {
            None => ConfigOverrides::default(),
            Some((path, text)) => toml::from_str(text).map_err(|e| ConfigError::Parse {
                path: path.to_path_buf(),
                message: e.to_string().trim_end().to_string(),
            })?,
        };
        let src = Sources {
            file,
            from_file,
            flags,
        };
        let mut cfg = SweepConfig::default();
        let mut origins = Vec::new();
        merge!(src, cfg, origins,
            geometry => "geometry", eps_re => "eps-re", eps_im => "eps-im",
            mu_re => "mu-re", mu_im => "mu-im", zmin => "zmin", zmax => "zmax",
            points => "points", spacing => "spacing", dipole => "dipole",
            w_par => "w-par", w_perp => "w-perp", method => "method",
            rel_tol => "rel-tol", format => "format",
        );
        origins.push((
            "thickness",
            src.origin(
                "thickness",
                src.flags.thickness.is_some(),
                src.from_file.thickness.is_some(),
            ),
        ));
        cfg.thickness = src.flags.thickness.or(src.from_file.thickness);
        cfg.output = src.flags.output.clone().or(src.from_file.output.clone());
        cfg.workers = src.flags.workers.or(src.from_file.workers);
        cfg.reproducible = src.flags.reproducible || src.from_file.reproducible;

        let fail = |field: &'static str, reason: String| {
            let origin = origins
                .iter()
                .find(|(name, _)| *name == field)
                .map(|(_, o)| o.clone())
                .unwrap_or(Origin::Default);
            ConfigError::Field {
                field,
                origin,
                reason,
            }
        };
        cfg.validate()
            .map_err(|(field, reason)| fail(field, reason))?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), (&'static str, String)> {
        let finite = [
            ("eps-re", self.eps_re),
            ("eps-im", self.eps_im),
            ("mu-re", self.mu_re),
            ("mu-im", self.mu_im),
            ("zmin", self.zmin),
            ("zmax", self.zmax),
            ("w-par", self.w_par),
            ("w-perp", self.w_perp),
            ("rel-tol", self.rel_tol),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err((field, format!("must be finite, got {v}")));
            }
        }
        if self.zmin <= 0.0 {
            return Err(("zmin", format!("must be positive, got {}", self.zmin)));
        }
        if self.zmin >= self.zmax {
            return Err((
                "zmax",
                format!("must exceed zmin = {}, got {}", self.zmin, self.zmax),
            ));
        }
        if self.points < 2 {
            return Err(("points", format!("need at least 2, got {}", self.points)));
        }
        if self.workers == Some(0) {
            return Err(("workers", "must be at least 1".into()));
        }
        if self.dipole == DipoleKind::Mixed {
            if self.w_par < 0.0 || self.w_perp < 0.0 {
                return Err(("w-par", "dipole weights must be non-negative".into()));
            }
            if self.w_par == 0.0 && self.w_perp == 0.0 {
                return Err((
                    "w-par",
                    "at least one dipole weight must be positive".into(),
                ));
            }
        }
        QuadratureSpec::with_rel_tol(self.rel_tol).map_err(|e| ("rel-tol", e.to_string()))?;
        self.geometry_model().map_err(|e| match e {
            Error::PassivityViolation { quantity: "mu", .. } => ("mu-im", e.to_string()),
            Error::PassivityViolation { .. } => ("eps-im", e.to_string()),
            e => ("thickness", e.to_string()),
        })?;

        let registry = MethodRegistry::with_builtins();
        if registry.get(&self.method).is_none() {
            let known: Vec<_> = registry.names().collect();
            return Err((
                "method",
                format!(
                    "unknown method `{}`, expected one of {}",
                    self.method,
                    known.join(", ")
                ),
            ));
        }
        match (self.method.as_str(), self.geometry) {
            ("nonretarded" | "retarded", g) if g != GeometryKind::HalfSpace => {
                return Err((
                    "method",
                    format!("`{}` applies to a half space only", self.method),
                ));
            }
            ("closed-form", GeometryKind::HalfSpace) => {
                return Err((
                    "method",
                    "`closed-form` needs a slab-mirror or perfect-lens geometry".into(),
                ));
            }
            _ => {}
        }
        if let Some(d) = self.thickness {
            let lens_like =
                self.geometry == GeometryKind::PerfectLens || self.method == "closed-form";
            if lens_like && self.zmin <= d {
                return Err((
                    "zmin",
                    format!(
                        "must exceed the focal distance d = {d} for the lens closed form, got {}",
                        self.zmin
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn material(&self) -> crate::error::Result<MaterialResponse> {
        MaterialResponse::from_parts(self.eps_re, self.eps_im, self.mu_re, self.mu_im)
    }

    pub fn geometry_model(&self) -> crate::error::Result<Geometry> {
        let need_thickness = || {
            self.thickness.ok_or_else(|| Error::InvalidParameter {
                name: "thickness",
                reason: format!("required for the {} geometry", geometry_name(self.geometry)),
            })
        };
        match self.geometry {
            GeometryKind::HalfSpace => {
                if self.thickness.is_some() {
                    return Err(Error::InvalidParameter {
                        name: "thickness",
                        reason: "a half space has no thickness".into(),
                    });
                }
                Ok(Geometry::half_space(self.material()?))
            }
            GeometryKind::SlabMirror => {
                Geometry::slab_with_mirror(self.material()?, need_thickness()?)
            }
            GeometryKind::PerfectLens => Geometry::perfect_lens(need_thickness()?),
        }
    }

    /// Two-level atom with ω = 1 and the configured dipole weights.
    pub fn atom(&self) -> Atom {
        let (par, perp) = match self.dipole {
            DipoleKind::Par => (1.0, 0.0),
            DipoleKind::Perp => (0.0, 1.0),
            DipoleKind::Mixed => (self.w_par, self.w_perp),
        };
        Atom::two_level(1.0, par, perp).expect("validated dipole weights")
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec::with_rel_tol(self.rel_tol).expect("validated tolerance")
    }

    /// Sample distances, ascending, with both endpoints exact.
    pub fn distances(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| match i {
                0 => self.zmin,
                i if i == n - 1 => self.zmax,
                i => {
                    let t = i as f64 / last;
                    match self.spacing {
                        Spacing::Lin => self.zmin + t * (self.zmax - self.zmin),
                        Spacing::Log => self.zmin * (self.zmax / self.zmin).powf(t),
                    }
                }
            })
            .collect()
    }
}

fn geometry_name(kind: GeometryKind) -> &'static str {
    match kind {
        GeometryKind::HalfSpace => "halfspace",
        GeometryKind::SlabMirror => "slab-mirror",
        GeometryKind::PerfectLens => "perfect-lens",
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(geometry_name(*self))
    }
}
