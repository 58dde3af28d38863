//! SGD training loop with pluggable mini-batch samplers.

mod mlp;
mod synthetic;

pub use mlp::{gather_batch, MlpModel};
pub use synthetic::{
    boundary_error, boundary_error_of, gen_sine_dataset, sine_truth, SINE_X_MAX, SINE_X_MIN,
    SINE_Y_MAX, SINE_Y_MIN,
};

use std::time::Instant;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::sampling::ResolvedSampler;
use crate::seed::derive_seed2;

/// Seed streams used by the trainer.
const MODEL_STREAM: u64 = 0x4D4F_4445;
const BATCH_STREAM: u64 = 0x4241_5443;

/// Learning-rate schedule: constant or step decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LrSchedule {
    Constant(f64),
    /// `initial * factor^floor((t-1)/every)` at iteration `t` (1-based).
    Step {
        initial: f64,
        factor: f64,
        every: usize,
    },
}

impl LrSchedule {
    pub fn at(&self, iteration: usize) -> f64 {
        match *self {
            LrSchedule::Constant(lr) => lr,
            LrSchedule::Step {
                initial,
                factor,
                every,
            } => initial * factor.powi(((iteration - 1) / every) as i32),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            LrSchedule::Constant(lr) => lr > 0.0 && lr.is_finite(),
            LrSchedule::Step {
                initial,
                factor,
                every,
            } => {
                initial > 0.0
                    && initial.is_finite()
                    && factor > 0.0
                    && factor.is_finite()
                    && every >= 1
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("learning rate schedule must be positive"))
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub iterations: usize,
    /// Metrics are recorded at iteration 0, every `eval_every` iterations,
    /// and at the final iteration.
    pub eval_every: usize,
    pub lr: LrSchedule,
    pub hidden: usize,
    pub seed: u64,
    /// Draw one batch at the first iteration and reuse it for every step
    /// (the single-mini-batch experiment).
    pub single_batch: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 200,
            eval_every: 10,
            lr: LrSchedule::Constant(0.1),
            hidden: 5,
            seed: 0,
            single_batch: false,
        }
    }
}

/// One recorded evaluation point.
///
/// `sample_time_ns` is the mean wall-clock cost of a sampler draw over the
/// window since the previous row; unlike the other fields it is not
/// deterministic across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub iteration: usize,
    pub loss: f64,
    pub test_error: f64,
    pub sample_time_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metrics {
    pub rows: Vec<MetricsRow>,
    /// Iterations skipped because the sampler came back empty or exhausted.
    pub skipped_iterations: usize,
}

impl Metrics {
    pub fn final_test_error(&self) -> Option<f64> {
        self.rows.last().map(|r| r.test_error)
    }
}

/// Runs `config.iterations` SGD steps, drawing a fresh batch per step from
/// the sampler (Anneal PDS sees the 1-based iteration counter), and records
/// loss and test error at the evaluation interval.
///
/// A sampler that comes back empty or exhausted skips the iteration and is
/// counted in `skipped_iterations`; it never aborts the run.
pub fn train(
    train_set: &Dataset,
    test_set: &Dataset,
    sampler: &ResolvedSampler,
    config: &TrainConfig,
) -> Result<Metrics> {
    train_with_model(train_set, test_set, sampler, config).map(|(metrics, _)| metrics)
}

/// [`train`], additionally handing back the trained model (e.g. to measure
/// its decision boundary).
pub fn train_with_model(
    train_set: &Dataset,
    test_set: &Dataset,
    sampler: &ResolvedSampler,
    config: &TrainConfig,
) -> Result<(Metrics, MlpModel)> {
    config.lr.validate()?;
    if config.eval_every == 0 {
        return Err(Error::invalid("eval_every must be at least 1"));
    }
    if config.hidden == 0 {
        return Err(Error::invalid("hidden width must be at least 1"));
    }
    train_set.require_labels("train")?;
    test_set.require_labels("train (test set)")?;
    if test_set.dim() != train_set.dim() {
        return Err(Error::invalid(format!(
            "test dimension {} does not match train dimension {}",
            test_set.dim(),
            train_set.dim()
        )));
    }
    let classes = train_set.num_classes().expect("labels checked");
    if classes < 2 {
        return Err(Error::invalid("training needs at least 2 classes"));
    }
    if let Some(test_classes) = test_set.num_classes() {
        if test_classes > classes {
            return Err(Error::invalid(format!(
                "test set has {test_classes} classes but the train set only {classes}"
            )));
        }
    }

    let mut model = MlpModel::init(
        train_set.dim(),
        config.hidden,
        classes,
        derive_seed2(config.seed, MODEL_STREAM, 0),
    )?;

    let mut metrics = Metrics::default();
    let mut window_ns = 0u64;
    let mut window_draws = 0u64;
    let mut record = |model: &MlpModel,
                      iteration: usize,
                      window_ns: &mut u64,
                      window_draws: &mut u64|
     -> Result<()> {
        let loss = model.loss(
            train_set.features(),
            train_set.n(),
            train_set.labels().unwrap(),
        )?;
        let test_error = model.error_rate(test_set)?;
        let mean_ns = window_ns.checked_div(*window_draws).unwrap_or(0);
        *window_ns = 0;
        *window_draws = 0;
        metrics.rows.push(MetricsRow {
            iteration,
            loss,
            test_error,
            sample_time_ns: mean_ns,
        });
        Ok(())
    };

    record(&model, 0, &mut window_ns, &mut window_draws)?;

    let mut reused_batch = None;
    for t in 1..=config.iterations {
        let batch = if config.single_batch {
            if reused_batch.is_none() {
                let started = Instant::now();
                let drawn = sampler.draw(1, derive_seed2(config.seed, BATCH_STREAM, 1));
                window_ns += started.elapsed().as_nanos() as u64;
                window_draws += 1;
                match drawn {
                    Ok(b) => reused_batch = Some(b),
                    Err(Error::SamplerExhausted(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            reused_batch.clone()
        } else {
            let started = Instant::now();
            let drawn = sampler.draw(t as u64, derive_seed2(config.seed, BATCH_STREAM, t as u64));
            window_ns += started.elapsed().as_nanos() as u64;
            window_draws += 1;
            match drawn {
                Ok(b) => Some(b),
                Err(Error::SamplerExhausted(_)) => None,
                Err(e) => return Err(e),
            }
        };

        let stepped = match batch {
            Some(ref b) if !b.is_empty() => {
                let (features, labels) = gather_batch(train_set, b.indices())?;
                let grad = model.grad(&features, b.accepted(), &labels)?;
                model.step(&grad, config.lr.at(t))?;
                true
            }
            _ => false,
        };
        if !stepped {
            metrics.skipped_iterations += 1;
        }

        if t % config.eval_every == 0 || t == config.iterations {
            record(&model, t, &mut window_ns, &mut window_draws)?;
        }
    }
    Ok((metrics, model))
}
