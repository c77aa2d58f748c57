use std::process::ExitCode;

use clap::Parser;
use gsk_cli::args::Cli;

fn main() -> ExitCode {
    let command_line: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match gsk_cli::configure_threads().and_then(|()| gsk_cli::run(&cli, command_line)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gsk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
