//! `repulse`: repulsive point-process mini-batch sampling toolkit.
//!
//! Subcommands cover synthetic data generation, batch sampling, mingling
//! analysis, sampler benchmarking, gradient-variance measurement, SGD
//! training, and SVG plotting. Every command prints its resolved
//! configuration to stderr before doing work, and (timings aside) produces
//! byte-identical outputs when re-run with the same seed.
//!
//! Exit codes: 0 success, 2 usage or input error, 1 internal error.

mod commands;
mod common;
mod errors;
mod svg;

use clap::{Parser, Subcommand};
use errors::{CliError, CliResult};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "repulse",
    version,
    about = "Repulsive point-process mini-batch sampling for SGD"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset as CSV.
    GenData(commands::gen_data::Args),
    /// Draw mini-batches with a configured sampler.
    Sample(commands::sample::Args),
    /// Compute mingling indices and the level histogram.
    Mingling(commands::mingling::Args),
    /// Time samplers over an (N, k) grid and fit the scaling slope.
    Bench(commands::bench::Args),
    /// Measure gradient variance per sampler and decompose it.
    Variance(commands::variance::Args),
    /// Train the MLP with a pluggable mini-batch sampler.
    Train(commands::train::Args),
    /// Render a CSV table as an SVG chart.
    Plot(commands::plot::Args),
}

/// REPULSE_THREADS caps the rayon pool used for repetition fan-out.
fn init_thread_pool() -> CliResult<()> {
    let Ok(raw) = std::env::var("REPULSE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        CliError::Input(format!(
            "REPULSE_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    if threads == 0 {
        return Err(CliError::Input(
            "REPULSE_THREADS must be a positive integer".into(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Internal(format!("failed to build thread pool: {e}")))
}

fn run(cli: &Cli) -> CliResult<()> {
    init_thread_pool()?;
    match &cli.command {
        Command::GenData(args) => commands::gen_data::run(args),
        Command::Sample(args) => commands::sample::run(args),
        Command::Mingling(args) => commands::mingling::run(args),
        Command::Bench(args) => commands::bench::run(args),
        Command::Variance(args) => commands::variance::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::Plot(args) => commands::plot::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e @ CliError::Input(_))) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Ok(Err(e @ CliError::Internal(_))) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("internal error: unexpected panic");
            ExitCode::from(1)
        }
    }
}
