//! Command-line front end for the `gsk` kernel library.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;

use args::{Cli, Command};
use error::{CliError, CliResult};

/// Caps rayon's global pool from `GSK_THREADS` (default: all cores).
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("GSK_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("GSK_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(format!("GSK_THREADS: {e}")))
}

pub fn run(cli: &Cli, command_line: Vec<String>) -> CliResult<()> {
    match &cli.command {
        Command::GpFit(a) => commands::gp_fit(a, command_line),
        Command::GpPredict(a) => commands::gp_predict(a),
        Command::Approx(a) => commands::approx(a, command_line),
        Command::Rff(a) => commands::rff(a, command_line),
        Command::SamplePrior(a) => commands::sample_prior(a, command_line),
    }
}
