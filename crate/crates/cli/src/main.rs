//! `casecenter`: centrality statistics for epidemic case locations.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::output::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Replay { manifest } => commands::replay(&manifest, &cli.out),
        command => commands::run(command, cli.format, &cli.out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad input, 3 for output failures, 4 for degenerate statistics.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<casecenter::Error>() {
            return match e {
                casecenter::Error::DegenerateCloud => 4,
                _ => 2,
            };
        }
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return e.exit_code();
        }
    }
    1
}
