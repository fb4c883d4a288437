//! Distance sweeps in normalized units, the engine behind the CLI.

mod config;
mod output;
mod run;

pub use config::{
    ConfigError, ConfigOverrides, DipoleKind, GeometryKind, Origin, OutputFormat, Spacing,
    SweepArgs, SweepConfig,
};
pub use output::write_dataset;
pub use run::{compare_methods, deviation, run_sweep, Cell, Dataset, PointStatus, Sweep, SweepRow};
