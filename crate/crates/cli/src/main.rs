//! `remcode`: phase diagrams, exponent curves and random-codebook
//! simulations from the command line.
//!
//! Exit codes: 0 success, 1 unexpected failure, 2 unusable input (flags or
//! channel file), 3 infeasible grid or rate, 4 simulation work bound.

mod args;
mod commands;
mod error;
mod grid;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};

const THREADS_ENV: &str = "REMCODE_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Input(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Other(format!("thread pool: {e}")))
}

/// Runs a parsed command; `argv` is what gets recorded for replay.
fn dispatch(cli: Cli, argv: Vec<String>) -> CliResult<()> {
    match cli.command {
        Command::PhaseDiagram(a) => commands::phase::run(a, argv),
        Command::Exponents(a) => commands::exponents::run(a, argv),
        Command::Simulate(a) => commands::simulate::run(a, argv),
        Command::Replay(a) => {
            let (cli, argv) = commands::replay::load(&a)?;
            dispatch(cli, argv)
        }
    }
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help and version requests with exit code 0
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = configure_threads().and_then(|()| dispatch(cli, args::recorded_argv(&raw[1..])));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
