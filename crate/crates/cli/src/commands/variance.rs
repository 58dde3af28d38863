//! `repulse variance`: compare measured gradient variance and its
//! inclusion-statistics decomposition across samplers, with a one-sided
//! reduction test against random sampling.

use clap::Args as ClapArgs;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::common::{load_dataset, parse_radius, write_text};
use crate::errors::{input_err, CliResult};
use repulse_core::sampling::{Method, SamplerConfig};
use repulse_core::seed::{derive_seed, derive_seed2};
use repulse_core::stats::testing::welch_one_sided_p;
use repulse_core::stats::{
    discrete_variance_formula, estimate_inclusion_stats, measure_gradient_variance,
    PerPointGradients,
};
use repulse_core::train::{gather_batch, MlpModel};
use repulse_core::{Dataset, DistanceMetric};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Labeled dataset: a CSV path, or IDX as `images:labels`.
    #[arg(long)]
    input: String,
    /// Methods to evaluate, comma-separated.
    #[arg(long, default_value = "random,vanilla_pds")]
    methods: String,
    /// Monte-Carlo realizations per method (>= 1000).
    #[arg(long, default_value_t = 2000)]
    reps: usize,
    /// Seed for the probe model and all sampling.
    #[arg(long, default_value_t = 0)]
    model_seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Batch size under comparison.
    #[arg(long, default_value_t = 10)]
    batch_size: usize,
    /// Disk radius for PDS methods.
    #[arg(long, default_value = "auto")]
    radius: String,
    /// Hidden width of the probe model.
    #[arg(long, default_value_t = 5)]
    hidden: usize,
    #[arg(long, default_value_t = usize::MAX)]
    idx_limit: usize,
}

/// 100 random-sampling SGD steps from a seeded init: the gradients are
/// probed at a mid-training parameter vector rather than at the noisy init.
fn mid_training_model(
    ds: &Dataset,
    hidden: usize,
    batch_size: usize,
    seed: u64,
) -> CliResult<MlpModel> {
    let classes = ds
        .num_classes()
        .ok_or_else(|| input_err("variance needs a labeled dataset"))?;
    let mut model = MlpModel::init(ds.dim(), hidden, classes, derive_seed(seed, 1))?;
    let sampler = SamplerConfig::new(Method::Random, batch_size).resolve(
        ds,
        DistanceMetric::Euclidean,
        seed,
    )?;
    for t in 0..100u64 {
        let batch = sampler.draw(1, derive_seed2(seed, 2, t))?;
        let (x, y) = gather_batch(ds, batch.indices())?;
        let grad = model.grad(&x, batch.accepted(), &y)?;
        model.step(&grad, 0.1)?;
    }
    Ok(model)
}

pub fn run(args: &Args) -> CliResult<()> {
    if args.reps < 1000 {
        return Err(input_err(format!(
            "--reps must be at least 1000 for stable variance estimates, got {}",
            args.reps
        )));
    }
    let dataset = load_dataset(&args.input, args.idx_limit)?;
    let methods: Vec<Method> = args
        .methods
        .split(',')
        .map(|tok| tok.trim().parse::<Method>().map_err(Into::into))
        .collect::<CliResult<_>>()?;

    let model = mid_training_model(
        &dataset,
        args.hidden,
        args.batch_size.min(dataset.n()),
        args.model_seed,
    )?;
    let param_count = model.param_count();
    if dataset.n() * param_count > 50_000_000 {
        return Err(input_err(format!(
            "per-point gradient table would hold {} x {param_count} values; \
             use a smaller dataset or --hidden",
            dataset.n()
        )));
    }
    let labels = dataset.require_labels("variance")?;
    let gradients = PerPointGradients::from_fn(&dataset, param_count, |i| {
        model.grad(dataset.row(i), 1, &labels[i..=i])
    })?;

    // independent random baseline for the reduction test
    let baseline_sampler = SamplerConfig::new(Method::Random, args.batch_size).resolve(
        &dataset,
        DistanceMetric::Euclidean,
        args.model_seed,
    )?;
    let baseline = measure_gradient_variance(
        |s| baseline_sampler.draw(1, s),
        &gradients,
        args.reps,
        derive_seed(args.model_seed, 9999),
    )?;

    let mut out = String::from(
        "method,resolved_radius,mean_batch_size,measured_variance,variance_se,term1,term2,formula_total,p_vs_random\n",
    );
    for (slot, &method) in methods.iter().enumerate() {
        let sampler = SamplerConfig::new(method, args.batch_size)
            .with_radius(parse_radius(&args.radius)?)
            .resolve(&dataset, DistanceMetric::Euclidean, args.model_seed)?;
        eprintln!(
            "[config] variance input={} N={} method={method} resolved_radius={} batch_size={} \
             reps={} model_seed={} hidden={}",
            args.input,
            dataset.n(),
            sampler.radius(),
            args.batch_size,
            args.reps,
            args.model_seed,
            args.hidden
        );
        let slot_seed = derive_seed(args.model_seed, 100 + slot as u64);
        let measured = measure_gradient_variance(
            |s| sampler.draw(1, s),
            &gradients,
            args.reps,
            derive_seed(slot_seed, 0),
        )?;
        let stats = estimate_inclusion_stats(
            |s| sampler.draw(1, s),
            dataset.n(),
            args.reps,
            derive_seed(slot_seed, 1),
            true,
        )?;
        let formula = discrete_variance_formula(&stats, &gradients, stats.mean_batch_size())?;
        let p = welch_one_sided_p(&measured.squared_deviations, &baseline.squared_deviations)?;
        let _ = writeln!(
            out,
            "{method},{},{},{},{},{},{},{},{}",
            sampler.radius(),
            measured.mean_batch_size,
            measured.variance,
            measured.variance_se,
            formula.term1,
            formula.term2,
            formula.total,
            p
        );
        // compact summary on stdout alongside the CSV
        println!(
            "{method:>16}: var {:.4e} (se {:.1e})  formula {:.4e} = term1 {:+.4e} + term2 {:.4e}  \
             E|B| {:.2}  p_vs_random {:.3e}",
            measured.variance,
            measured.variance_se,
            formula.total,
            formula.term1,
            formula.term2,
            measured.mean_batch_size,
            p
        );
    }
    write_text(&args.out, &out)
}
