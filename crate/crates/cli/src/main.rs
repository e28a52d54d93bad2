mod commands;
mod config;
mod fixtures;
mod verify;

use clap::{Parser, Subcommand};
use config::{GridSpec, Options, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Koebe circular-slit maps, circular-domain automorphisms and family sweeps.
#[derive(Debug, Parser)]
#[command(name = "slitmap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Domain or family spec (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Boundary nodes per component (even, >= 16).
    #[arg(long, global = true, default_value_t = 256, value_name = "N")]
    nodes: usize,

    /// Parameter grid.
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "START:END:COUNT")]
    grid: Option<GridSpec>,

    /// Output directory.
    #[arg(long, global = true, default_value = "slitmap-out", value_name = "DIR")]
    out: PathBuf,

    /// Tolerance override for the selected subcommand.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0, value_name = "S")]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Canonical slit-annulus map of a domain: moduli JSON/CSV, SVG, diagnostics.
    Map,
    /// Automorphism group of a circular domain.
    Aut,
    /// Moduli sweep along a family with smoothness report.
    Sweep,
    /// End-to-end run of the built-in counterexample family and its jump report.
    Counterexample,
    /// Invariant suite over the shipped fixtures.
    Verify,
}

/// Reasons a run stops short of exit 0.
#[derive(Debug)]
pub enum Failure {
    Invariant(String),
    Core(slitmap::Error),
    Solver(String),
    Io(String),
}

impl From<slitmap::Error> for Failure {
    fn from(e: slitmap::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn one_line(s: &str) -> String {
    s.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("; ")
}

fn report(failure: Failure) -> ExitCode {
    let (code, prefix, msg) = match failure {
        Failure::Invariant(m) => (1, "invariant-failure", m),
        Failure::Core(e) => match e.kind() {
            slitmap::ErrorKind::BadInput => (2, "bad-input", e.to_string()),
            slitmap::ErrorKind::Numerical => (3, "numerical-failure", e.to_string()),
        },
        Failure::Solver(m) => (3, "numerical-failure", m),
        Failure::Io(m) => (2, "bad-input", format!("io: {m}")),
    };
    eprintln!("{prefix}: {}", one_line(&msg));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("bad-input: {}", one_line(first));
            return ExitCode::from(2);
        }
    };
    let options = Options {
        input: cli.input,
        nodes: cli.nodes,
        grid: cli.grid,
        out: cli.out,
        tol: cli.tol,
        seed: cli.seed,
    };
    let cfg = match RunConfig::new(cli.command, options) {
        Ok(cfg) => cfg,
        Err(f) => return report(f),
    };
    let result = match cfg.command {
        Command::Map => commands::run_map(&cfg),
        Command::Aut => commands::run_aut(&cfg),
        Command::Sweep => commands::run_sweep(&cfg),
        Command::Counterexample => commands::run_counterexample(&cfg),
        Command::Verify => verify::run_verify(&cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}
