//! Point-process statistics: per-point inclusion probabilities, pairwise
//! joint inclusion, pair correlation, Campbell-identity checks, and the
//! gradient variance decomposition.
//!
//! In the discrete setting the intensity of point `i` is its inclusion
//! probability `lambda_i = P(i in B)` and the second-order product density
//! of a pair is the joint inclusion `rho_ij = P(i in B and j in B)`. Both
//! are estimated by Monte Carlo over independent batch realizations with
//! seeds derived from a master seed.

mod campbell;
mod paircorr;
pub mod testing;
mod variance;

pub use campbell::{campbell_check, campbell_check_pairs, CampbellReport};
pub use paircorr::{pair_correlation, PairCorrelationHistogram};
pub use variance::{
    discrete_variance_formula, measure_gradient_variance, GradientVarianceReport,
    PerPointGradients, VarianceDecomposition,
};

use crate::dataset::MiniBatch;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// Largest N for which pairwise statistics may be requested; beyond this the
/// N^2/2 joint-inclusion table stops being desk-scale.
pub const MAX_PAIR_POINTS: usize = 5000;

/// Fewest realizations accepted when estimating inclusion statistics.
pub const MIN_REALIZATIONS: usize = 100;

/// Monte-Carlo estimates of per-point and pairwise inclusion probabilities.
///
/// Pairwise values are stored packed for unordered pairs `i < j`; `rho(i, j)`
/// is symmetric and `rho(i, i)` is 0 by convention (a batch never holds a
/// point twice).
#[derive(Debug, Clone)]
pub struct ProcessStats {
    lambda: Vec<f64>,
    /// packed upper triangle, length n*(n-1)/2, or None without `with_pairs`
    rho: Option<Vec<f64>>,
    realizations: usize,
    mean_batch_size: f64,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl ProcessStats {
    /// Wraps externally computed inclusion probabilities (e.g. exact
    /// closed-form values) in the same container the estimators produce.
    ///
    /// `rho` is the full row-major N×N matrix; its diagonal is ignored.
    /// `realizations` only scales the reported standard errors.
    pub fn from_values(
        lambda: Vec<f64>,
        rho: Option<&[f64]>,
        realizations: usize,
        mean_batch_size: f64,
    ) -> Result<Self> {
        let n = lambda.len();
        if n == 0 {
            return Err(Error::invalid("lambda vector must be non-empty"));
        }
        if lambda.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::invalid("lambda entries must lie in [0, 1]"));
        }
        let packed = match rho {
            None => None,
            Some(full) => {
                if full.len() != n * n {
                    return Err(Error::invalid(format!(
                        "rho must be {n}x{n}, got {} entries",
                        full.len()
                    )));
                }
                let mut packed = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for j in (i + 1)..n {
                        let a = full[i * n + j];
                        let b = full[j * n + i];
                        if (a - b).abs() > 1e-12 {
                            return Err(Error::invalid(format!(
                                "rho is not symmetric at ({i}, {j})"
                            )));
                        }
                        if !(0.0..=1.0).contains(&a) {
                            return Err(Error::invalid("rho entries must lie in [0, 1]"));
                        }
                        if a > lambda[i].min(lambda[j]) + 1e-9 {
                            return Err(Error::invalid(format!(
                                "rho({i}, {j}) = {a} exceeds min of its lambdas"
                            )));
                        }
                        packed.push(a);
                    }
                }
                Some(packed)
            }
        };
        Ok(ProcessStats {
            lambda,
            rho: packed,
            realizations,
            mean_batch_size,
        })
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn realizations(&self) -> usize {
        self.realizations
    }

    /// Mean realized batch size over the estimation run; equals the sum of
    /// the lambda estimates.
    pub fn mean_batch_size(&self) -> f64 {
        self.mean_batch_size
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.lambda[i]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    /// Binomial standard error of the lambda estimate.
    pub fn lambda_se(&self, i: usize) -> f64 {
        let p = self.lambda[i];
        (p * (1.0 - p) / self.realizations as f64).sqrt()
    }

    pub fn has_pairs(&self) -> bool {
        self.rho.is_some()
    }

    /// Joint inclusion probability of `i` and `j`; 0 on the diagonal.
    pub fn rho(&self, i: usize, j: usize) -> Option<f64> {
        let rho = self.rho.as_ref()?;
        if i == j {
            return Some(0.0);
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        Some(rho[pair_index(self.n(), a, b)])
    }

    pub fn rho_se(&self, i: usize, j: usize) -> Option<f64> {
        let p = self.rho(i, j)?;
        Some((p * (1.0 - p) / self.realizations as f64).sqrt())
    }
}

/// Estimates inclusion statistics by drawing `realizations` batches from the
/// sampler closure.
///
/// The closure receives a seed derived from `seed` for each realization
/// index, so the run is reproducible and realizations are independent.
/// `with_pairs` additionally tallies joint inclusion for every unordered
/// pair (quadratic memory, capped at [`MAX_PAIR_POINTS`]).
pub fn estimate_inclusion_stats<F>(
    sample: F,
    n: usize,
    realizations: usize,
    seed: u64,
    with_pairs: bool,
) -> Result<ProcessStats>
where
    F: Fn(u64) -> Result<MiniBatch>,
{
    if n == 0 {
        return Err(Error::invalid("point count must be at least 1"));
    }
    if realizations < MIN_REALIZATIONS {
        return Err(Error::invalid(format!(
            "need at least {MIN_REALIZATIONS} realizations for standard errors, got {realizations}"
        )));
    }
    if with_pairs && n > MAX_PAIR_POINTS {
        return Err(Error::invalid(format!(
            "pair statistics are capped at N = {MAX_PAIR_POINTS}, got N = {n}"
        )));
    }

    let mut counts = vec![0u64; n];
    let mut pair_counts = if with_pairs {
        vec![0u32; n * (n - 1) / 2]
    } else {
        Vec::new()
    };
    let mut batch_size_sum = 0u64;

    for r in 0..realizations {
        let batch = sample(derive_seed(seed, r as u64))?;
        let idx = batch.indices();
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::invalid(format!(
                "sampler returned index {bad} outside 0..{n}"
            )));
        }
        batch_size_sum += idx.len() as u64;
        for &i in idx {
            counts[i] += 1;
        }
        if with_pairs {
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    let (i, j) = if idx[a] < idx[b] {
                        (idx[a], idx[b])
                    } else {
                        (idx[b], idx[a])
                    };
                    pair_counts[pair_index(n, i, j)] += 1;
                }
            }
        }
    }

    let r = realizations as f64;
    let lambda: Vec<f64> = counts.iter().map(|&c| c as f64 / r).collect();
    let rho = with_pairs.then(|| pair_counts.iter().map(|&c| c as f64 / r).collect());
    Ok(ProcessStats {
        lambda,
        rho,
        realizations,
        mean_batch_size: batch_size_sum as f64 / r,
    })
}
