use std::process::ExitCode;

use clap::Parser;
use jointpir::harness::cli::{run, Cli, EXIT_CHECK_FAILED, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
