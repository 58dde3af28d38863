//! Gradient variance of the mini-batch estimator: direct Monte-Carlo
//! measurement and the closed-form decomposition in terms of inclusion
//! statistics.
//!
//! For per-point gradients `g_i`, requested batch size `k`, inclusion
//! probabilities `lambda_i`, and joint inclusions `rho_ij`, the variance of
//! the batch-mean gradient splits into
//!
//! ```text
//! term1 = (1/k^2) sum_{i != j} g_i . g_j (rho_ij - lambda_i lambda_j)
//! term2 = (1/k^2) sum_i ||g_i||^2 lambda_i (1 - lambda_i)
//! ```
//!
//! The second term keeps the full Bernoulli factor `lambda (1 - lambda)`:
//! its continuous counterpart drops the square because an infinitesimal cell
//! is included with infinitesimal probability, but the discrete form must
//! retain it to match brute-force enumeration exactly. `term1` is where
//! repulsion acts: nearby pairs with aligned gradients and `rho < lambda
//! lambda` contribute negatively.

use crate::dataset::{Dataset, MiniBatch};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::stats::ProcessStats;

/// Row-major N×P matrix of per-point gradients at a fixed parameter vector.
#[derive(Debug, Clone)]
pub struct PerPointGradients {
    data: Vec<f64>,
    n: usize,
    p: usize,
}

impl PerPointGradients {
    pub fn new(data: Vec<f64>, n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 || data.len() != n * p {
            return Err(Error::invalid(format!(
                "gradient buffer length {} does not match {n}x{p}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("gradient entries must be finite"));
        }
        Ok(PerPointGradients { data, n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    /// Gradient of the full dataset under `grad_fn`, one row per point.
    pub fn from_fn<F>(dataset: &Dataset, p: usize, mut grad_fn: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<Vec<f64>>,
    {
        let mut data = Vec::with_capacity(dataset.n() * p);
        for i in 0..dataset.n() {
            let g = grad_fn(i)?;
            if g.len() != p {
                return Err(Error::invalid(format!(
                    "gradient of point {i} has length {}, expected {p}",
                    g.len()
                )));
            }
            data.extend(g);
        }
        PerPointGradients::new(data, dataset.n(), p)
    }
}

/// The two-term decomposition of the gradient-estimator variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceDecomposition {
    /// Pair-interaction term; negative under repulsion with aligned gradients.
    pub term1: f64,
    /// Self term from per-point inclusion fluctuations.
    pub term2: f64,
    pub total: f64,
}

/// Evaluates the exact discrete variance formula from inclusion statistics.
///
/// `batch_size` is the normalizer `k` of the batch-mean estimator; when the
/// sampler returns partial batches, pass the realized mean batch size.
pub fn discrete_variance_formula(
    stats: &ProcessStats,
    gradients: &PerPointGradients,
    batch_size: f64,
) -> Result<VarianceDecomposition> {
    if !stats.has_pairs() {
        return Err(Error::invalid(
            "the variance formula needs stats estimated with with_pairs",
        ));
    }
    if stats.n() != gradients.n() {
        return Err(Error::invalid(format!(
            "stats cover {} points but gradients cover {}",
            stats.n(),
            gradients.n()
        )));
    }
    if !batch_size.is_finite() || batch_size <= 0.0 {
        return Err(Error::invalid("batch size must be positive"));
    }

    let n = stats.n();
    let k2 = batch_size * batch_size;
    let mut term1 = 0.0;
    for i in 0..n {
        let gi = gradients.row(i);
        let li = stats.lambda(i);
        for j in (i + 1)..n {
            let dot: f64 = gi.iter().zip(gradients.row(j)).map(|(a, b)| a * b).sum();
            let bracket = stats.rho(i, j).expect("has_pairs checked") - li * stats.lambda(j);
            // unordered pair counted twice in the ordered sum
            term1 += 2.0 * dot * bracket;
        }
    }
    term1 /= k2;

    let mut term2 = 0.0;
    for i in 0..n {
        let norm_sq: f64 = gradients.row(i).iter().map(|v| v * v).sum();
        let li = stats.lambda(i);
        term2 += norm_sq * li * (1.0 - li);
    }
    term2 /= k2;

    Ok(VarianceDecomposition {
        term1,
        term2,
        total: term1 + term2,
    })
}

/// Direct Monte-Carlo measurement of the gradient-estimator variance.
#[derive(Debug, Clone)]
pub struct GradientVarianceReport {
    /// Trace of the unbiased sample covariance of the batch-mean gradient.
    pub variance: f64,
    pub mean_gradient: Vec<f64>,
    pub realizations: usize,
    /// Monte-Carlo standard error of the variance estimate.
    pub variance_se: f64,
    /// Per-realization squared deviations `||G_r - mean||^2`; feed these to a
    /// two-sample test when comparing samplers.
    pub squared_deviations: Vec<f64>,
    pub mean_batch_size: f64,
}

/// Draws `realizations` batches and measures the variance of the batch-mean
/// gradient `G_r = (1/|B_r|) sum_{i in B_r} g_i`.
pub fn measure_gradient_variance<F>(
    sample: F,
    gradients: &PerPointGradients,
    realizations: usize,
    seed: u64,
) -> Result<GradientVarianceReport>
where
    F: Fn(u64) -> Result<MiniBatch>,
{
    if realizations < 2 {
        return Err(Error::invalid(
            "variance needs at least 2 realizations (undefined at R = 1)",
        ));
    }
    let p = gradients.dim();
    let mut estimates: Vec<f64> = Vec::with_capacity(realizations * p);
    let mut batch_size_sum = 0usize;
    for r in 0..realizations {
        let batch = sample(derive_seed(seed, r as u64))?;
        let idx = batch.indices();
        if idx.is_empty() {
            return Err(Error::invalid(format!(
                "sampler returned an empty batch at realization {r}"
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= gradients.n()) {
            return Err(Error::invalid(format!(
                "sampler returned index {bad} outside 0..{}",
                gradients.n()
            )));
        }
        batch_size_sum += idx.len();
        let start = estimates.len();
        estimates.resize(start + p, 0.0);
        let est = &mut estimates[start..];
        for &i in idx {
            for (e, &g) in est.iter_mut().zip(gradients.row(i)) {
                *e += g;
            }
        }
        let inv = 1.0 / idx.len() as f64;
        for e in est.iter_mut() {
            *e *= inv;
        }
    }

    let r = realizations as f64;
    let mut mean_gradient = vec![0.0; p];
    for chunk in estimates.chunks_exact(p) {
        for (m, &e) in mean_gradient.iter_mut().zip(chunk) {
            *m += e;
        }
    }
    for m in &mut mean_gradient {
        *m /= r;
    }

    let squared_deviations: Vec<f64> = estimates
        .chunks_exact(p)
        .map(|chunk| {
            chunk
                .iter()
                .zip(&mean_gradient)
                .map(|(&e, &m)| (e - m) * (e - m))
                .sum()
        })
        .collect();
    let variance = squared_deviations.iter().sum::<f64>() / (r - 1.0);
    let mean_dev = squared_deviations.iter().sum::<f64>() / r;
    let dev_var = squared_deviations
        .iter()
        .map(|&s| (s - mean_dev) * (s - mean_dev))
        .sum::<f64>()
        / (r - 1.0);
    let variance_se = (dev_var / r).sqrt();

    Ok(GradientVarianceReport {
        variance,
        mean_gradient,
        realizations,
        variance_se,
        squared_deviations,
        mean_batch_size: batch_size_sum as f64 / r,
    })
}
