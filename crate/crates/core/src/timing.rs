//! Wall-clock measurement of sampler draws and the log-log scaling fit.
//!
//! Methodology: one warm-up draw is discarded, then each repetition times a
//! single `draw` call on the monotonic clock; cells report the median and
//! the median absolute deviation.

use std::time::Instant;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::sampling::ResolvedSampler;
use crate::seed::derive_seed;

/// Times `reps` draws (after one discarded warm-up draw), in nanoseconds.
pub fn time_draws(sampler: &ResolvedSampler, reps: usize, seed: u64) -> Result<Vec<u64>> {
    if reps == 0 {
        return Err(Error::invalid("need at least one timing repetition"));
    }
    sampler.draw(1, derive_seed(seed, u64::MAX))?; // warm-up
    let mut timings = Vec::with_capacity(reps);
    for rep in 0..reps {
        let draw_seed = derive_seed(seed, rep as u64);
        let started = Instant::now();
        let batch = sampler.draw(1, draw_seed)?;
        let elapsed = started.elapsed().as_nanos() as u64;
        std::hint::black_box(batch);
        timings.push(elapsed);
    }
    Ok(timings)
}

/// Median; the even case averages the two central values.
pub fn median_ns(timings: &[u64]) -> u64 {
    assert!(!timings.is_empty());
    let mut sorted = timings.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2
    }
}

/// Median absolute deviation around the median.
pub fn mad_ns(timings: &[u64]) -> u64 {
    let med = median_ns(timings);
    let deviations: Vec<u64> = timings.iter().map(|&t| t.abs_diff(med)).collect();
    median_ns(&deviations)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("slope fit needs at least 2 points"));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::invalid("log-log fit needs positive coordinates"));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid(
            "slope fit needs at least 2 distinct x values",
        ));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

/// Disk radius for timing PDS on a 2-D dataset: sized so `k` accepted disks
/// cover a quarter of the bounding box, which keeps the rejection rate
/// moderate and lets batches fill to `k`. (The median-distance heuristic is
/// unusable here: in 2-D it saturates dart throwing after a handful of
/// accepts, so every cell would measure the same truncated run.)
pub fn pds_bench_radius(dataset: &Dataset, k: usize) -> Result<f64> {
    if dataset.dim() != 2 {
        return Err(Error::invalid(
            "the bench radius rule is defined for 2-D data",
        ));
    }
    if k == 0 {
        return Err(Error::invalid("batch size k must be at least 1"));
    }
    let bounds = dataset.bounding_box();
    let area = (bounds[0].1 - bounds[0].0) * (bounds[1].1 - bounds[1].0);
    if area <= 0.0 {
        return Err(Error::invalid("dataset bounding box has zero area"));
    }
    Ok((0.25 * area / (std::f64::consts::PI * k as f64)).sqrt())
}
