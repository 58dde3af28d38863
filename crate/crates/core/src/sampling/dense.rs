//! Dense and Anneal PDS: dart throwing with a categorical preference over
//! mingling levels.
//!
//! Each trial first draws a mingling level from `Cat(pi)` restricted to
//! levels that still hold unaccepted points (renormalized), then draws a
//! candidate uniformly among the unaccepted points at that level. The
//! candidate is rejected if it falls strictly within distance `r` of an
//! accepted point; rejected candidates stay eligible for later trials.

use crate::dataset::{Dataset, DistanceMetric, MiniBatch};
use crate::error::{Error, Result};
use crate::mingling::{anneal_schedule, MinglingTable};
use crate::seed::rng_from_seed;
use rand::Rng;

fn validate_pi(pi: &[f64], num_levels: usize) -> Result<Vec<f64>> {
    if pi.len() != num_levels {
        return Err(Error::invalid(format!(
            "pi has {} entries but there are {} mingling levels",
            pi.len(),
            num_levels
        )));
    }
    if pi.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(Error::invalid("pi entries must be non-negative"));
    }
    let total: f64 = pi.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("pi must have positive mass"));
    }
    Ok(pi.iter().map(|w| w / total).collect())
}

/// Dense PDS (dart throwing with level preference `pi`).
///
/// Runs until `k` points are accepted or `max_trials` consecutive rejections
/// occur; a partially filled batch is a normal return. If no level with
/// positive `pi` mass holds an unaccepted point before anything was
/// accepted, the draw cannot start and a sampler-exhausted error is
/// returned; the same situation mid-batch yields the partial batch.
#[allow(clippy::too_many_arguments)]
pub fn sample_dense_pds(
    dataset: &Dataset,
    metric: DistanceMetric,
    r: f64,
    mingling: &MinglingTable,
    pi: &[f64],
    k: usize,
    max_trials: usize,
    seed: u64,
) -> Result<MiniBatch> {
    let n = dataset.n();
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
    if mingling.len() != n {
        return Err(Error::invalid(format!(
            "mingling table covers {} points but the dataset has {n}",
            mingling.len()
        )));
    }
    let pi = validate_pi(pi, mingling.num_levels())?;

    // Unaccepted points per level; acceptance swap-removes from its bucket.
    let mut remaining: Vec<Vec<usize>> = (0..mingling.num_levels())
        .map(|l| mingling.bucket(l).to_vec())
        .collect();
    let mut rng = rng_from_seed(seed);
    let mut accepted: Vec<usize> = Vec::with_capacity(k);
    let mut consecutive_rejections = 0usize;

    while accepted.len() < k && consecutive_rejections < max_trials {
        let drawable_mass: f64 = pi
            .iter()
            .zip(&remaining)
            .map(|(&w, bucket)| if bucket.is_empty() { 0.0 } else { w })
            .sum();
        if drawable_mass <= 0.0 {
            if accepted.is_empty() {
                return Err(Error::SamplerExhausted(
                    "all pi mass lies on levels with no remaining points".into(),
                ));
            }
            break;
        }
        // level ~ Cat(pi) renormalized over non-empty levels
        let u = rng.random::<f64>() * drawable_mass;
        let mut acc = 0.0;
        let mut level = 0;
        for (l, (&w, bucket)) in pi.iter().zip(&remaining).enumerate() {
            if bucket.is_empty() {
                continue;
            }
            acc += w;
            level = l;
            if u < acc {
                break;
            }
        }
        let slot = rng.random_range(0..remaining[level].len());
        let candidate = remaining[level][slot];
        let rejected = r > 0.0
            && accepted
                .iter()
                .any(|&j| metric.distance(dataset.row(candidate), dataset.row(j)) < r);
        if rejected {
            consecutive_rejections += 1;
        } else {
            remaining[level].swap_remove(slot);
            accepted.push(candidate);
            consecutive_rejections = 0;
        }
    }
    Ok(MiniBatch::new(accepted, k))
}

/// Anneal PDS: Dense PDS whose level preference follows the annealing
/// schedule `pi_n` derived from the level histogram at iteration `n`.
#[allow(clippy::too_many_arguments)]
pub fn sample_anneal_pds(
    dataset: &Dataset,
    metric: DistanceMetric,
    r: f64,
    mingling: &MinglingTable,
    iteration: u64,
    k: usize,
    max_trials: usize,
    seed: u64,
    anneal_c: f64,
) -> Result<MiniBatch> {
    let pi = anneal_schedule(mingling.histogram(), iteration, anneal_c)?;
    sample_dense_pds(dataset, metric, r, mingling, &pi, k, max_trials, seed)
}
