//! `econ-ensemble` command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 numerical failure.

mod commands;
mod output;
mod scenario;
mod svg;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use econ_ensemble::Error;

#[derive(Debug, Parser)]
#[command(name = "econ-ensemble", version, about = "Grand-canonical model of economic systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON scenario file.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Also write fig_<name>.svg charts.
    #[arg(long, global = true)]
    svg: bool,
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// ln Z, U, N, p at one parameter point.
    Observables,
    /// Observables over a temperature range, as sweep.csv.
    Sweep,
    /// Every occupation vector of a small level system.
    Enumerate,
    /// Most probable split of wealth and individuals between two systems.
    Equilibrate,
    /// Maximum-pressure profiles, cutoff, residuals and stationarity.
    OptimizeDos,
    /// Schema and density-of-states checks only.
    Validate,
}

#[derive(Debug)]
pub(crate) enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Failure::Numerical(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

fn is_numerical(e: &Error) -> bool {
    match e {
        Error::Divergent(_)
        | Error::Overflow { .. }
        | Error::Quadrature { .. }
        | Error::DegenerateDifference(_)
        | Error::Truncation { .. } => true,
        Error::AtTemperature { source, .. } | Error::AtIndex { source, .. } => is_numerical(source),
        _ => false,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if is_numerical(&e) {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ECON_ENSEMBLE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::input(format!("ECON_ENSEMBLE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| Failure::input("--scenario <path> is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("reading {}: {e}", path.display())))?;
    let scenario = scenario::parse(&text)?;
    let opts = commands::Options {
        out: cli.out.clone(),
        svg: cli.svg,
        verbose: cli.verbose,
    };
    match cli.command {
        Command::Observables => commands::observables(&scenario, &opts),
        Command::Sweep => commands::sweep(&scenario, &opts),
        Command::Enumerate => commands::enumerate(&scenario, &opts),
        Command::Equilibrate => commands::equilibrate(&scenario, &opts),
        Command::OptimizeDos => commands::optimize_dos(&scenario, &opts),
        Command::Validate => commands::validate(&scenario, &opts),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("econ-ensemble: {f}");
            f.exit_code()
        }
    }
}
