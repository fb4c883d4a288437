use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use resonant_cp::potential::MethodRegistry;
use resonant_cp::sweep::{
    compare_methods, run_sweep, write_dataset, Dataset, SweepArgs, SweepConfig,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_CONVERGENCE: u8 = 2;

/// Resonant Casimir-Polder potential of an excited two-level atom near a
/// planar magneto-electric structure.
///
/// Lengths are in units of c/ω and the potential in U₀ = μ₀ω³d²/(8πc).
/// Without a subcommand the flags describe a sweep.
#[derive(Parser)]
#[command(name = "resonant-cp", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the potential over a range of distances.
    Sweep(SweepArgs),
    /// Tabulate quadrature against every applicable closed form.
    Compare(SweepArgs),
    /// List the evaluation methods.
    Methods,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let (name, args) = match cli.command {
        None => ("sweep", cli.sweep),
        Some(Command::Sweep(args)) => ("sweep", args),
        Some(Command::Compare(args)) => ("compare", args),
        Some(Command::Methods) => {
            for s in MethodRegistry::with_builtins().strategies() {
                println!("{:<12} {}", s.name(), s.description());
            }
            return ExitCode::SUCCESS;
        }
    };
    match run(name, &args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(command: &str, args: &SweepArgs) -> Result<ExitCode, String> {
    let config = args.load().map_err(|e| e.to_string())?;
    let data = match command {
        "compare" => compare_methods(&config),
        _ => run_sweep(&config).map(|s| s.dataset()),
    }
    .map_err(|e| e.to_string())?;
    emit(&config, command, &data).map_err(|e| match &config.output {
        Some(path) => format!("{}: {e}", path.display()),
        None => e.to_string(),
    })?;
    if data.failures > 0 {
        eprintln!(
            "warning: {} of {} points failed; see the status column",
            data.failures,
            data.rows.len()
        );
        return Ok(ExitCode::from(EXIT_CONVERGENCE));
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(config: &SweepConfig, command: &str, data: &Dataset) -> io::Result<()> {
    match &config.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_dataset(&mut out, config, command, data)?;
            out.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write_dataset(&mut out, config, command, data)?;
            out.flush()
        }
    }
}
