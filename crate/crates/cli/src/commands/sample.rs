//! `repulse sample`: draw mini-batches and write them as CSV rows.

use clap::Args as ClapArgs;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::common::{load_dataset, parse_pi, parse_radius, write_text};
use crate::errors::CliResult;
use repulse_core::sampling::{Method, SamplerConfig};
use repulse_core::seed::derive_seed;
use repulse_core::DistanceMetric;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Dataset: a CSV path, or IDX as `images:labels`.
    #[arg(long)]
    input: String,
    /// random | vanilla_pds | easy_pds | dense_pds | anneal_pds | kdpp_bruteforce
    #[arg(long)]
    method: String,
    /// Disk radius: `auto` (half median pairwise distance) or a number.
    #[arg(long, default_value = "auto")]
    radius: String,
    #[arg(long)]
    batch_size: usize,
    /// Neighbor count for mingling-based methods.
    #[arg(long, default_value_t = 5)]
    knn_k: usize,
    /// Level weights for dense_pds, comma-separated.
    #[arg(long)]
    pi: Option<String>,
    /// Iteration index fed to anneal_pds.
    #[arg(long, default_value_t = 1)]
    iter: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of independent batches to draw.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Output CSV path (columns: rep, position, index).
    #[arg(long)]
    out: PathBuf,
    /// Cap on IDX items when --input is an `images:labels` pair.
    #[arg(long, default_value_t = usize::MAX)]
    idx_limit: usize,
}

pub fn run(args: &Args) -> CliResult<()> {
    let dataset = load_dataset(&args.input, args.idx_limit)?;
    let method: Method = args.method.parse()?;
    let mut config = SamplerConfig::new(method, args.batch_size)
        .with_radius(parse_radius(&args.radius)?)
        .with_knn_k(args.knn_k);
    if let Some(ref pi) = args.pi {
        config = config.with_pi(parse_pi(pi)?);
    }
    let sampler = config.resolve(&dataset, DistanceMetric::Euclidean, args.seed)?;
    eprintln!(
        "[config] sample input={} N={} d={} method={method} resolved_radius={} batch_size={} \
         knn_k={} iter={} seed={} reps={} out={}",
        args.input,
        dataset.n(),
        dataset.dim(),
        sampler.radius(),
        args.batch_size,
        args.knn_k,
        args.iter,
        args.seed,
        args.reps,
        args.out.display()
    );

    let batches: Vec<_> = (0..args.reps)
        .into_par_iter()
        .map(|rep| sampler.draw(args.iter, derive_seed(args.seed, rep as u64)))
        .collect::<Result<_, _>>()?;

    let mut out = String::from("rep,position,index\n");
    for (rep, batch) in batches.iter().enumerate() {
        if batch.is_partial() {
            eprintln!(
                "[note] rep {rep}: accepted {} of {} requested points",
                batch.accepted(),
                batch.requested()
            );
        }
        for (position, &index) in batch.indices().iter().enumerate() {
            let _ = writeln!(out, "{rep},{position},{index}");
        }
    }
    write_text(&args.out, &out)
}
