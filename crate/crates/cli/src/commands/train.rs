//! `repulse train`: SGD runs with a pluggable sampler; one metrics CSV per
//! repetition plus a mean/std aggregate.

use clap::Args as ClapArgs;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::common::{load_dataset, parse_lr, parse_pi, parse_radius, write_text};
use crate::errors::{input_err, CliResult};
use repulse_core::sampling::{Method, SamplerConfig};
use repulse_core::seed::derive_seed;
use repulse_core::train::{train_with_model, Metrics, MlpModel, TrainConfig};
use repulse_core::DistanceMetric;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Training dataset: a CSV path, or IDX as `images:labels`.
    #[arg(long)]
    train: String,
    /// Test dataset, same forms.
    #[arg(long)]
    test: String,
    /// Sampling method for mini-batches.
    #[arg(long, default_value = "random")]
    sampler: String,
    #[arg(long, default_value = "auto")]
    radius: String,
    #[arg(long, default_value_t = 30)]
    batch_size: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    /// Constant rate (`0.1`) or step schedule (`step:0.5,0.5,100`).
    #[arg(long, default_value = "0.1")]
    lr: String,
    #[arg(long, default_value_t = 10)]
    eval_every: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent repetitions (rep r uses a seed derived from --seed and r).
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Output prefix: writes `<out>_rep<r>.csv` and `<out>_aggregate.csv`.
    #[arg(long)]
    out: PathBuf,
    /// Hidden layer width.
    #[arg(long, default_value_t = 5)]
    hidden: usize,
    /// Draw one batch and reuse it for every iteration.
    #[arg(long, default_value_t = false)]
    single_batch: bool,
    /// Neighbor count for mingling-based samplers.
    #[arg(long, default_value_t = 5)]
    knn_k: usize,
    /// Level weights for dense_pds.
    #[arg(long)]
    pi: Option<String>,
    /// Cap on IDX items for the training set (`images:labels` inputs).
    #[arg(long, default_value_t = usize::MAX)]
    train_limit: usize,
    /// Cap on IDX items for the test set.
    #[arg(long, default_value_t = usize::MAX)]
    test_limit: usize,
    /// Write the rep-0 model's decision-boundary grid here as CSV
    /// (columns f0,f1,label; 2-D features only).
    #[arg(long)]
    boundary_out: Option<PathBuf>,
    /// Grid resolution per axis for --boundary-out.
    #[arg(long, default_value_t = 100)]
    boundary_resolution: usize,
}

fn metrics_csv(metrics: &Metrics) -> String {
    let mut out = String::from("iteration,loss,test_error,sample_time_ns\n");
    for row in &metrics.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.iteration, row.loss, row.test_error, row.sample_time_ns
        );
    }
    out
}

/// Argmax class of the model at the centers of a grid over the sine box.
fn boundary_grid_csv(model: &MlpModel, resolution: usize) -> CliResult<String> {
    use repulse_core::train::{SINE_X_MAX, SINE_X_MIN, SINE_Y_MAX, SINE_Y_MIN};
    if model.dim() != 2 {
        return Err(input_err(format!(
            "--boundary-out needs 2-D features, model has dimension {}",
            model.dim()
        )));
    }
    if resolution == 0 {
        return Err(input_err("--boundary-resolution must be at least 1"));
    }
    let mut out = String::from("f0,f1,label\n");
    for iy in 0..resolution {
        let x2 = SINE_Y_MIN + (iy as f64 + 0.5) / resolution as f64 * (SINE_Y_MAX - SINE_Y_MIN);
        for ix in 0..resolution {
            let x1 =
                SINE_X_MIN + (ix as f64 + 0.5) / resolution as f64 * (SINE_X_MAX - SINE_X_MIN);
            let class = model.predict(&[x1, x2], 1)?[0];
            let _ = writeln!(out, "{x1},{x2},{class}");
        }
    }
    Ok(out)
}

pub fn run(args: &Args) -> CliResult<()> {
    if args.reps == 0 {
        return Err(input_err("--reps must be at least 1"));
    }
    let train_set = load_dataset(&args.train, args.train_limit)?;
    let test_set = load_dataset(&args.test, args.test_limit)?;
    let method: Method = args.sampler.parse()?;
    let mut config = SamplerConfig::new(method, args.batch_size)
        .with_radius(parse_radius(&args.radius)?)
        .with_knn_k(args.knn_k);
    if let Some(ref pi) = args.pi {
        config = config.with_pi(parse_pi(pi)?);
    }
    let sampler = config.resolve(&train_set, DistanceMetric::Euclidean, args.seed)?;
    let lr = parse_lr(&args.lr)?;
    eprintln!(
        "[config] train train={} (N={}) test={} (N={}) sampler={method} resolved_radius={} \
         batch_size={} iters={} lr={} eval_every={} hidden={} single_batch={} seed={} reps={} out={}",
        args.train,
        train_set.n(),
        args.test,
        test_set.n(),
        sampler.radius(),
        args.batch_size,
        args.iters,
        args.lr,
        args.eval_every,
        args.hidden,
        args.single_batch,
        args.seed,
        args.reps,
        args.out.display()
    );

    let outcomes: Vec<(Metrics, MlpModel)> = (0..args.reps)
        .into_par_iter()
        .map(|rep| {
            let config = TrainConfig {
                iterations: args.iters,
                eval_every: args.eval_every,
                lr,
                hidden: args.hidden,
                seed: derive_seed(args.seed, rep as u64),
                single_batch: args.single_batch,
            };
            train_with_model(&train_set, &test_set, &sampler, &config)
        })
        .collect::<Result<_, _>>()?;

    if let Some(ref path) = args.boundary_out {
        write_text(
            path,
            &boundary_grid_csv(&outcomes[0].1, args.boundary_resolution)?,
        )?;
    }
    let runs: Vec<Metrics> = outcomes.into_iter().map(|(metrics, _)| metrics).collect();

    let prefix = args.out.as_os_str().to_string_lossy();
    for (rep, metrics) in runs.iter().enumerate() {
        if metrics.skipped_iterations > 0 {
            eprintln!(
                "[note] rep {rep}: skipped {} iterations on empty/exhausted batches",
                metrics.skipped_iterations
            );
        }
        write_text(
            &PathBuf::from(format!("{prefix}_rep{rep}.csv")),
            &metrics_csv(metrics),
        )?;
    }

    // aggregate over repetitions at each recorded iteration
    let grid_len = runs[0].rows.len();
    if runs.iter().any(|m| m.rows.len() != grid_len) {
        return Err(input_err(
            "repetitions recorded different metric grids; cannot aggregate",
        ));
    }
    let mut aggregate =
        String::from("iteration,mean_loss,std_loss,mean_test_error,std_test_error\n");
    for row_idx in 0..grid_len {
        let iteration = runs[0].rows[row_idx].iteration;
        let losses: Vec<f64> = runs.iter().map(|m| m.rows[row_idx].loss).collect();
        let errors: Vec<f64> = runs.iter().map(|m| m.rows[row_idx].test_error).collect();
        let stats = |xs: &[f64]| {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let std = if xs.len() > 1 {
                (xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64)
                    .sqrt()
            } else {
                0.0
            };
            (mean, std)
        };
        let (mean_loss, std_loss) = stats(&losses);
        let (mean_err, std_err) = stats(&errors);
        let _ = writeln!(
            aggregate,
            "{iteration},{mean_loss},{std_loss},{mean_err},{std_err}"
        );
    }
    write_text(
        &PathBuf::from(format!("{prefix}_aggregate.csv")),
        &aggregate,
    )
}
