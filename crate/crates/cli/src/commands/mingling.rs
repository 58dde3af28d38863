//! `repulse mingling`: export per-point mingling indices as CSV.

use clap::Args as ClapArgs;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::common::{load_dataset, write_text};
use crate::errors::CliResult;
use repulse_core::mingling::{compute_knn, compute_mingling};
use repulse_core::DistanceMetric;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Dataset: a CSV path, or IDX as `images:labels`. Labels required.
    #[arg(long)]
    input: String,
    #[arg(long, default_value_t = 5)]
    knn_k: usize,
    /// Output CSV path (columns: index, mingling, label).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = usize::MAX)]
    idx_limit: usize,
}

pub fn run(args: &Args) -> CliResult<()> {
    let dataset = load_dataset(&args.input, args.idx_limit)?;
    eprintln!(
        "[config] mingling input={} N={} d={} knn_k={} out={}",
        args.input,
        dataset.n(),
        dataset.dim(),
        args.knn_k,
        args.out.display()
    );
    let labels = dataset.require_labels("mingling")?;
    let knn = compute_knn(&dataset, DistanceMetric::Euclidean, args.knn_k)?;
    let table = compute_mingling(&knn, labels)?;

    let mut out = String::from("index,mingling,label\n");
    for (i, &label) in labels.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{label}", table.value(i));
    }
    eprintln!(
        "[note] level histogram h = [{}]",
        table
            .histogram()
            .iter()
            .map(|v| format!("{v:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    write_text(&args.out, &out)
}
