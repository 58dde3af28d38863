//! `repulse gen-data`: write a synthetic dataset as CSV.

use clap::{Args as ClapArgs, ValueEnum};
use std::path::PathBuf;

use crate::errors::CliResult;
use repulse_core::io::save_csv;
use repulse_core::train::gen_sine_dataset;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    /// Two classes separated by a sine-shaped boundary on [0, 2pi] x [-2, 2].
    Sine,
}

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Dataset family to generate.
    #[arg(long, value_enum, default_value = "sine")]
    kind: Kind,
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Label noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &Args) -> CliResult<()> {
    eprintln!(
        "[config] gen-data kind={:?} n={} noise={} seed={} out={}",
        args.kind,
        args.n,
        args.noise,
        args.seed,
        args.out.display()
    );
    let dataset = match args.kind {
        Kind::Sine => gen_sine_dataset(args.n, args.noise, args.seed)?,
    };
    save_csv(&dataset, &args.out)?;
    Ok(())
}
