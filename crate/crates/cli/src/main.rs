//! `tourney`: batch front end for tourney-core.
//!
//! Exit codes: 0 on success (or a passing check), 1 when `check` finds a
//! violation, 2 on usage or evaluation errors.

mod args;
mod build;
mod commands;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli.command) {
        Ok(outcome) if outcome.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
