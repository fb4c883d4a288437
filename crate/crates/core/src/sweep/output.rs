use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

use super::config::{OutputFormat, SweepConfig};
use super::run::{Cell, Dataset};

fn format_real(v: f64) -> String {
    ryu::Buffer::new().format(v).to_string()
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Writes `data` in the configured format.
///
/// CSV starts with `#` lines echoing the full configuration as TOML that
/// `--config` accepts back. The generation time is the only line that
/// varies between runs and is left out under `reproducible`.
pub fn write_dataset<W: Write>(
    out: W,
    config: &SweepConfig,
    command: &str,
    data: &Dataset,
) -> io::Result<()> {
    match config.format {
        OutputFormat::Csv => write_csv(out, config, command, data),
        OutputFormat::Json => write_json(out, config, command, data),
    }
}

fn write_csv<W: Write>(
    mut out: W,
    config: &SweepConfig,
    command: &str,
    data: &Dataset,
) -> io::Result<()> {
    writeln!(
        out,
        "# {} {} {command}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    )?;
    if !config.reproducible {
        writeln!(out, "# generated-unix = {}", timestamp())?;
    }
    let toml = toml::to_string(config).map_err(io::Error::other)?;
    for line in toml.lines() {
        writeln!(out, "# {line}")?;
    }
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    csv.write_record(&data.columns)?;
    for row in &data.rows {
        csv.write_record(row.iter().map(|c| match c {
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
        }))?;
    }
    csv.flush()
}

fn write_json<W: Write>(
    mut out: W,
    config: &SweepConfig,
    command: &str,
    data: &Dataset,
) -> io::Result<()> {
    let mut doc = json!({
        "generator": format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        "command": command,
        "config": config,
        "columns": data.columns,
        "rows": data.rows,
        "failures": data.failures,
    });
    if !config.reproducible {
        doc["generated_unix"] = json!(timestamp());
    }
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
