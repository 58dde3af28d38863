//! Binned pair correlation: the discrete analog of `rho(x, y) / (lambda(x)
//! lambda(y))` as a function of pair distance.
//!
//! For a repulsive process the estimate vanishes below the disk radius and
//! approaches the independence level at large distances; for plain random
//! sampling it sits at the flat without-replacement constant
//! `N(k-1) / ((N-1) k)`.

use crate::dataset::{Dataset, DistanceMetric};
use crate::error::{Error, Result};
use crate::stats::ProcessStats;

/// Denominators `lambda_i * lambda_j` below this are excluded (and counted)
/// rather than divided by.
pub const MIN_LAMBDA_PRODUCT: f64 = 1e-12;

/// Per-distance-bin pair correlation estimates.
#[derive(Debug, Clone)]
pub struct PairCorrelationHistogram {
    edges: Vec<f64>,
    estimates: Vec<Option<f64>>,
    pair_counts: Vec<usize>,
    excluded: Vec<usize>,
    out_of_range: usize,
}

impl PairCorrelationHistogram {
    pub fn num_bins(&self) -> usize {
        self.estimates.len()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Mean of `rho_ij / (lambda_i lambda_j)` over usable pairs in the bin;
    /// `None` when the bin holds no usable pair (missing, not zero).
    pub fn estimate(&self, bin: usize) -> Option<f64> {
        self.estimates[bin]
    }

    /// Number of pairs whose distance fell into the bin.
    pub fn pair_count(&self, bin: usize) -> usize {
        self.pair_counts[bin]
    }

    /// Pairs excluded from the bin because their lambda product was tiny.
    pub fn excluded(&self, bin: usize) -> usize {
        self.excluded[bin]
    }

    /// Pairs whose distance fell outside the binning range.
    pub fn out_of_range(&self) -> usize {
        self.out_of_range
    }
}

/// Bins every unordered pair by distance and averages the pair correlation
/// ratio within each bin.
///
/// `edges` must be strictly increasing; bin `b` covers `[edges[b],
/// edges[b+1])`, with the final bin closed on the right.
pub fn pair_correlation(
    stats: &ProcessStats,
    dataset: &Dataset,
    metric: DistanceMetric,
    edges: &[f64],
) -> Result<PairCorrelationHistogram> {
    if !stats.has_pairs() {
        return Err(Error::invalid(
            "pair correlation needs stats estimated with with_pairs",
        ));
    }
    if stats.n() != dataset.n() {
        return Err(Error::invalid(format!(
            "stats cover {} points but the dataset has {}",
            stats.n(),
            dataset.n()
        )));
    }
    if edges.len() < 2 {
        return Err(Error::invalid("need at least two bin edges"));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "bin edges must be finite and strictly increasing",
        ));
    }

    let bins = edges.len() - 1;
    let mut sums = vec![0.0; bins];
    let mut used = vec![0usize; bins];
    let mut pair_counts = vec![0usize; bins];
    let mut excluded = vec![0usize; bins];
    let mut out_of_range = 0usize;

    let n = dataset.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.distance(dataset.row(i), dataset.row(j));
            let bin = if d < edges[0] || d > edges[bins] {
                None
            } else if d == edges[bins] {
                Some(bins - 1)
            } else {
                // edges[b] <= d < edges[b+1]
                Some(edges.partition_point(|&e| e <= d) - 1)
            };
            let Some(bin) = bin else {
                out_of_range += 1;
                continue;
            };
            pair_counts[bin] += 1;
            let denom = stats.lambda(i) * stats.lambda(j);
            if denom < MIN_LAMBDA_PRODUCT {
                excluded[bin] += 1;
                continue;
            }
            sums[bin] += stats.rho(i, j).expect("has_pairs checked") / denom;
            used[bin] += 1;
        }
    }

    let estimates = sums
        .iter()
        .zip(&used)
        .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
        .collect();
    Ok(PairCorrelationHistogram {
        edges: edges.to_vec(),
        estimates,
        pair_counts,
        excluded,
        out_of_range,
    })
}
