use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use halfline_cli::commands::{self, ConvertTarget, Report};
use halfline_cli::config::{self, Format, JobConfig};
use halfline_cli::error::{CliError, CliResult, EXIT_VALIDATION};
use halfline_core::jordan::JordanMode;

#[derive(Parser)]
#[command(name = "halfline", version, about = "Scattering on the half line for matrix Schrödinger operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true, value_enum, default_value = "numeric")]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary-condition utilities.
    Bc {
        #[command(subcommand)]
        action: BcAction,
    },
    /// S(k) on the configured k grid.
    Sweep,
    /// Zero-energy limit S(0) with Jordan structure and continuity probes.
    S0,
    /// Property suite with residuals.
    Verify,
    /// Compare a worked example against the pipeline.
    Example {
        /// delta-prime, kirchhoff, xor-gate, two-chain (or 7.1 to 7.4).
        id: String,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        c: Option<f64>,
    },
}

#[derive(Subcommand)]
enum BcAction {
    Validate,
    Convert {
        #[arg(long, value_enum)]
        to: TargetArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Unitary,
    Normalized,
    Kostrykin,
}

fn load(path: &Option<PathBuf>) -> CliResult<JobConfig> {
    let path = path.as_ref().ok_or_else(|| CliError::Validation("--config is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    config::parse_config(&text)
}

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("HALFLINE_NUM_THREADS") else { return Ok(()) };
    let n: usize =
        v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Validation(format!("HALFLINE_NUM_THREADS: expected a positive integer, got {v:?}"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("HALFLINE_NUM_THREADS: {e}")))
}

fn run(cli: &Cli) -> CliResult<Report> {
    init_threads()?;
    let mode = match cli.mode {
        ModeArg::Exact => JordanMode::Exact,
        ModeArg::Numeric => JordanMode::Numeric,
    };
    let format = cli.format.map(|f| match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    });
    match &cli.command {
        Command::Bc { action: BcAction::Validate } => commands::run_bc_validate(&load(&cli.config)?),
        Command::Bc { action: BcAction::Convert { to } } => {
            let to = match to {
                TargetArg::Unitary => ConvertTarget::Unitary,
                TargetArg::Normalized => ConvertTarget::Normalized,
                TargetArg::Kostrykin => ConvertTarget::Kostrykin,
            };
            commands::run_bc_convert(&load(&cli.config)?, to)
        }
        Command::Sweep => commands::run_sweep(&load(&cli.config)?, format),
        Command::S0 => commands::run_s0(&load(&cli.config)?, mode),
        Command::Verify => commands::run_verify(&load(&cli.config)?),
        Command::Example { id, a, b, c } => commands::run_example(id, [*a, *b, *c], mode),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(report) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &report.body).map_err(CliError::from),
                None => {
                    print!("{}", report.body);
                    Ok(())
                }
            };
            match written {
                Ok(()) => report.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_VALIDATION as u8))
}
