//! `orlicz-qha`: Young-function inspection, Orlicz norms of serialized inputs,
//! and the verification suites.

mod input;
mod norm;
mod verify;
mod young;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use input::Failure;

#[derive(Debug, Parser)]
#[command(name = "orlicz-qha", version, about = "Orlicz-space norms and quantum harmonic analysis checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect and combine Young functions.
    #[command(subcommand)]
    Young(young::YoungCommand),
    /// Norms of step functions, grid functions and operators.
    #[command(subcommand)]
    Norm(norm::NormCommand),
    /// Run a verification suite from a JSON config.
    Verify(verify::VerifyArgs),
    /// Summarise a report written by `verify`.
    Report(verify::ReportArgs),
}

/// Sizes the global pool from `ORLICZ_QHA_THREADS` when set.
fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ORLICZ_QHA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::input(format!("ORLICZ_QHA_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    init_threads()?;
    match cli.command {
        Command::Young(cmd) => young::run(cmd),
        Command::Norm(cmd) => norm::run(cmd),
        Command::Verify(args) => verify::run(args),
        Command::Report(args) => verify::report(args),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
