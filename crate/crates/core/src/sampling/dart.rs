//! Poisson disk sampling by dart throwing: the Vanilla and Easy variants.
//!
//! Each trial draws a candidate uniformly (with replacement) from the whole
//! dataset, then rejects it if it falls strictly inside the disk of an
//! already-accepted point. Rejection counts are consecutive: an acceptance
//! resets the counter, and the sampler stops once `k` points are accepted or
//! `max_trials` rejections occur in a row, so a partial batch is a normal
//! return. Because a larger cap only extends the same trial sequence,
//! accepted prefixes are stable under raising `max_trials`.

use crate::dataset::{Dataset, DistanceMetric, MiniBatch};
use crate::error::{Error, Result};
use crate::mingling::MinglingTable;
use crate::seed::rng_from_seed;
use rand::Rng;

fn validate_dart_inputs(n: usize, r: f64, k: usize, max_trials: usize) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::invalid(
            "disk radius must be finite and non-negative",
        ));
    }
    if k == 0 {
        return Err(Error::invalid("batch size k must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "batch size k = {k} exceeds dataset size N = {n}"
        )));
    }
    if max_trials == 0 {
        return Err(Error::invalid("max_trials must be at least 1"));
    }
    Ok(())
}

/// Dart-throwing loop shared by the Vanilla and Easy variants.
///
/// `disk_radius(j)` is the radius owned by accepted point `j`; a candidate is
/// rejected iff it lies strictly within some accepted point's own disk.
/// Distance exactly equal to the radius is accepted, which makes `r = 0`
/// degenerate to sampling without replacement.
fn dart_throw<F>(
    dataset: &Dataset,
    metric: DistanceMetric,
    k: usize,
    max_trials: usize,
    seed: u64,
    disk_radius: F,
) -> MiniBatch
where
    F: Fn(usize) -> f64,
{
    let n = dataset.n();
    let mut rng = rng_from_seed(seed);
    let mut accepted: Vec<usize> = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    let mut consecutive_rejections = 0usize;

    while accepted.len() < k && consecutive_rejections < max_trials {
        let candidate = rng.random_range(0..n);
        let rejected = taken[candidate]
            || accepted.iter().any(|&j| {
                let r = disk_radius(j);
                r > 0.0 && metric.distance(dataset.row(candidate), dataset.row(j)) < r
            });
        if rejected {
            consecutive_rejections += 1;
        } else {
            taken[candidate] = true;
            accepted.push(candidate);
            consecutive_rejections = 0;
        }
    }
    MiniBatch::new(accepted, k)
}

/// Vanilla PDS: every pair of accepted points ends up at distance >= `r`.
pub fn sample_vanilla_pds(
    dataset: &Dataset,
    metric: DistanceMetric,
    r: f64,
    k: usize,
    max_trials: usize,
    seed: u64,
) -> Result<MiniBatch> {
    validate_dart_inputs(dataset.n(), r, k, max_trials)?;
    Ok(dart_throw(dataset, metric, k, max_trials, seed, |_| r))
}

/// Easy PDS: only points with mingling index 0 own a repulsion disk.
///
/// An accepted easy point (level 0) carries radius `r0` and repels every
/// later candidate inside it; accepted points with positive mingling index
/// carry radius 0 and repel nobody.
pub fn sample_easy_pds(
    dataset: &Dataset,
    metric: DistanceMetric,
    r0: f64,
    mingling: &MinglingTable,
    k: usize,
    max_trials: usize,
    seed: u64,
) -> Result<MiniBatch> {
    validate_dart_inputs(dataset.n(), r0, k, max_trials)?;
    if mingling.len() != dataset.n() {
        return Err(Error::invalid(format!(
            "mingling table covers {} points but the dataset has {}",
            mingling.len(),
            dataset.n()
        )));
    }
    Ok(dart_throw(dataset, metric, k, max_trials, seed, |j| {
        if mingling.level(j) == 0 {
            r0
        } else {
            0.0
        }
    }))
}
