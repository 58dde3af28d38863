//! K-nearest-neighbor structure, mingling indices, and the annealing schedule.
//!
//! The mingling index of a point is the fraction of its K nearest neighbors
//! carrying a different class label: 0 means the point sits in a locally pure
//! region, values near 1 mean it is surrounded by other classes. The level
//! histogram `h` over the K+1 attainable values drives the Dense and Anneal
//! PDS samplers.

use rayon::prelude::*;

use crate::dataset::{Dataset, DistanceMetric};
use crate::error::{Error, Result};

/// Exact K-nearest-neighbor lists, one per point.
///
/// Neighbor lists are ordered by ascending distance; ties break toward the
/// lower index. A point is never its own neighbor.
#[derive(Debug, Clone)]
pub struct KnnIndex {
    neighbors: Vec<usize>,
    n: usize,
    k: usize,
}

impl KnnIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The K neighbors of point `i`, nearest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i * self.k..(i + 1) * self.k]
    }
}

/// Exact K nearest neighbors of every point under `metric`.
///
/// Brute force over all pairs; deterministic regardless of thread count.
pub fn compute_knn(dataset: &Dataset, metric: DistanceMetric, k: usize) -> Result<KnnIndex> {
    let n = dataset.n();
    if k == 0 {
        return Err(Error::invalid("neighbor count K must be at least 1"));
    }
    if n <= k {
        return Err(Error::invalid(format!(
            "need at least K+1 = {} points for K = {k} nearest neighbors, got {n}",
            k + 1
        )));
    }
    let per_point: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut dists: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (metric.distance(dataset.row(i), dataset.row(j)), j))
                .collect();
            dists.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dists.truncate(k);
            dists.into_iter().map(|(_, j)| j).collect()
        })
        .collect();
    let mut neighbors = Vec::with_capacity(n * k);
    for list in per_point {
        neighbors.extend(list);
    }
    Ok(KnnIndex { neighbors, n, k })
}

/// Per-point mingling levels plus the class-conditional level histogram.
///
/// The level of point `i` is the integer count of differing-label neighbors,
/// so its mingling index is `level / K`, always a multiple of `1/K`.
#[derive(Debug, Clone)]
pub struct MinglingTable {
    levels: Vec<u32>,
    k: usize,
    histogram: Vec<f64>,
    buckets: Vec<Vec<usize>>,
}

impl MinglingTable {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Integer mingling level of point `i`, in `0..=K`.
    pub fn level(&self, i: usize) -> usize {
        self.levels[i] as usize
    }

    /// Mingling index of point `i`, in `[0, 1]`.
    pub fn value(&self, i: usize) -> f64 {
        self.levels[i] as f64 / self.k as f64
    }

    /// Number of attainable levels, `K + 1`.
    pub fn num_levels(&self) -> usize {
        self.k + 1
    }

    /// Level frequency histogram `h`; sums to 1.
    pub fn histogram(&self) -> &[f64] {
        &self.histogram
    }

    /// Point indices at each level.
    pub fn bucket(&self, level: usize) -> &[usize] {
        &self.buckets[level]
    }
}

/// Computes mingling levels from a neighbor index and class labels.
pub fn compute_mingling(knn: &KnnIndex, labels: &[u32]) -> Result<MinglingTable> {
    if labels.len() != knn.n() {
        return Err(Error::invalid(format!(
            "label vector length {} does not match neighbor index size {}",
            labels.len(),
            knn.n()
        )));
    }
    let k = knn.k();
    let mut levels = Vec::with_capacity(knn.n());
    let mut buckets = vec![Vec::new(); k + 1];
    let mut counts = vec![0usize; k + 1];
    for (i, &label) in labels.iter().enumerate() {
        let differing = knn
            .neighbors(i)
            .iter()
            .filter(|&&j| labels[j] != label)
            .count();
        levels.push(differing as u32);
        buckets[differing].push(i);
        counts[differing] += 1;
    }
    let n = labels.len() as f64;
    let histogram = counts.iter().map(|&c| c as f64 / n).collect();
    Ok(MinglingTable {
        levels,
        k,
        histogram,
        buckets,
    })
}

/// Annealing schedule: categorical weights over mingling levels at iteration `n`.
///
/// Returns the normalization of `h[j]^(1/ln(c*n + 1))`. Zero entries of `h`
/// stay zero. Early iterations concentrate mass on the most frequent level;
/// as `n` grows the exponent decays and the weights flatten toward uniform
/// over the support of `h`. When `ln(c*n + 1)` underflows the limit applies:
/// the point mass on the argmax of `h` (ties to the lower index).
///
/// Computed in log space so large exponents cannot underflow the whole
/// vector to zero.
pub fn anneal_schedule(h: &[f64], n: u64, c: f64) -> Result<Vec<f64>> {
    if h.is_empty() {
        return Err(Error::invalid("level histogram must be non-empty"));
    }
    if n == 0 {
        return Err(Error::invalid("iteration index n starts at 1"));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::invalid("schedule constant c must be positive"));
    }
    if h.iter().any(|&v| !v.is_finite() || v < 0.0) {
        return Err(Error::invalid(
            "level histogram entries must be non-negative",
        ));
    }
    if h.iter().all(|&v| v == 0.0) {
        return Err(Error::invalid("level histogram must have positive mass"));
    }

    let log_denom = (c * n as f64 + 1.0).ln();
    if log_denom < 1e-12 {
        // Limit of exponent -> infinity: all mass on the most frequent level.
        let argmax = h
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap();
        let mut pi = vec![0.0; h.len()];
        pi[argmax] = 1.0;
        return Ok(pi);
    }
    let exponent = 1.0 / log_denom;

    // pi_j = exp(e*ln h_j - m) / sum, with m the max over the support.
    let logs: Vec<Option<f64>> = h
        .iter()
        .map(|&v| (v > 0.0).then(|| exponent * v.ln()))
        .collect();
    let m = logs
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut pi: Vec<f64> = logs
        .iter()
        .map(|l| l.map_or(0.0, |l| (l - m).exp()))
        .collect();
    let total: f64 = pi.iter().sum();
    for v in &mut pi {
        *v /= total;
    }
    Ok(pi)
}

/// Default constant in the annealing exponent `1/ln(c*n + 1)`.
pub const DEFAULT_ANNEAL_C: f64 = 0.01;
