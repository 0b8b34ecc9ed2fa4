mod instance;
mod run;
mod sweep;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mrc::bounds::{exponent_csv, Problem};
use mrc::engine::EngineError;
use mrc::MrcError;

use instance::{generate, InstanceArgs, Kind};
use run::{execute, report_json, RunConfig};
use sweep::SweepArgs;

pub const SCHEMA_VERSION: u32 = 1;

const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_CONFIG: u8 = 4;

#[derive(Parser)]
#[command(name = "mrc", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("MRC_BUILD_ID"), ")"))]
#[command(about = "Run MapReduce-class algorithms on the metered simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random instance
    Gen(GenArgs),
    /// Run one algorithm, check it against its oracle and write a JSON report
    Run(RunArgs),
    /// Fit machine-count exponents over a size grid and print CSV
    Sweep(SweepArgs),
    /// Print the analytic exponent table as CSV
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: RunConfig,
    /// Report path (stdout if absent)
    #[arg(long)]
    out: Option<String>,
    /// Also write the algorithm output in its text format
    #[arg(long)]
    result: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Comma-separated problem names (default: all)
    #[arg(long, value_delimiter = ',')]
    problems: Vec<String>,
    /// Intervals per ε domain
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long)]
    x: Option<f64>,
    /// Matrix multiplication exponent (default ω*)
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

enum Failure {
    Mrc(MrcError),
    Io(String),
    Mismatch,
}

impl From<MrcError> for Failure {
    fn from(e: MrcError) -> Self {
        Failure::Mrc(e)
    }
}

fn emit(path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Gen(g) => emit(g.out.as_deref(), &generate(g.kind, &g.instance)?),
        Cmd::Run(r) => {
            let out = execute(&r.config)?;
            let mut doc = serde_json::to_string_pretty(&report_json(&r.config, &out)).expect("report serializes");
            doc.push('\n');
            emit(r.out.as_deref(), &doc)?;
            if let (Some(p), Some(text)) = (r.result.as_deref(), &out.output) {
                emit(Some(p), text)?;
            }
            if out.passed() {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Cmd::Sweep(s) => {
            let res = sweep::sweep(&s)?;
            emit(s.out.as_deref(), &res.csv)?;
            if res.all_passed {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Cmd::Bounds(b) => {
            let problems = if b.problems.is_empty() {
                Problem::ALL.to_vec()
            } else {
                b.problems
                    .iter()
                    .map(|n| Problem::from_name(n).ok_or_else(|| MrcError::InvalidInput(format!("unknown problem {n:?}"))))
                    .collect::<Result<_, _>>()?
            };
            emit(b.out.as_deref(), &exponent_csv(&problems, b.steps, b.x, b.omega))
        }
    }
}

fn exit_code(e: &MrcError) -> u8 {
    match e {
        MrcError::Engine(EngineError::BudgetExceeded { .. }) => EXIT_BUDGET,
        MrcError::Engine(_) | MrcError::ReconstructionFailure(_) => EXIT_MISMATCH,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => {
            eprintln!("mrc: oracle mismatch or failed bound check");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("mrc: {msg}");
            ExitCode::FAILURE
        }
        Err(Failure::Mrc(e)) => {
            eprintln!("mrc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
