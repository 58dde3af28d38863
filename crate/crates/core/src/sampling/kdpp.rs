//! Brute-force k-DPP sampling by subset enumeration.
//!
//! Draws a size-k subset S with probability proportional to `det(C_S)`,
//! the principal minor of the kernel matrix. Enumeration over all C(N, k)
//! subsets is exponential, so this sampler is guarded to tiny N and exists
//! as an exact oracle and baseline, not a production sampler.

use itertools::Itertools;
use rand::Rng;

use crate::dataset::{Dataset, DistanceMetric, MiniBatch};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Enumeration guard for the brute-force sampler.
pub const KDPP_MAX_POINTS: usize = 20;

/// An N×N symmetric positive-semidefinite kernel matrix.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    data: Vec<f64>,
    n: usize,
}

impl KernelMatrix {
    /// Validates shape, finiteness, and symmetry (within 1e-10).
    pub fn new(data: Vec<f64>, n: usize) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::invalid(format!(
                "kernel buffer length {} does not match an {n}x{n} matrix",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("kernel entries must be finite"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (data[i * n + j] - data[j * n + i]).abs() > 1e-10 {
                    return Err(Error::invalid(format!(
                        "kernel is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(KernelMatrix { data, n })
    }

    /// Gaussian (RBF) kernel on the dataset: `exp(-d^2 / (2 sigma^2))`.
    pub fn from_rbf(dataset: &Dataset, metric: DistanceMetric, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::invalid("RBF bandwidth must be positive"));
        }
        let n = dataset.n();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
            for j in (i + 1)..n {
                let d = metric.distance(dataset.row(i), dataset.row(j));
                let v = (-d * d / (2.0 * sigma * sigma)).exp();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        KernelMatrix::new(data, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Determinant of the principal minor indexed by `subset`, by Gaussian
/// elimination with partial pivoting.
fn principal_minor_det(kernel: &KernelMatrix, subset: &[usize]) -> f64 {
    let k = subset.len();
    let mut m = vec![0.0f64; k * k];
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            m[a * k + b] = kernel.get(i, j);
        }
    }
    let mut det = 1.0;
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&a, &b| m[a * k + col].abs().total_cmp(&m[b * k + col].abs()))
            .unwrap();
        let pivot = m[pivot_row * k + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for c in 0..k {
                m.swap(col * k + c, pivot_row * k + c);
            }
            det = -det;
        }
        det *= m[col * k + col];
        for row in (col + 1)..k {
            let factor = m[row * k + col] / m[col * k + col];
            for c in col..k {
                m[row * k + c] -= factor * m[col * k + c];
            }
        }
    }
    det
}

/// Exact subset probabilities of the k-DPP: every size-k subset paired with
/// `det(C_S) / sum_T det(C_T)`.
///
/// Tiny negative determinants from rounding are clamped to zero; if every
/// minor vanishes the kernel cannot define a size-k distribution.
pub fn kdpp_subset_probabilities(
    kernel: &KernelMatrix,
    k: usize,
) -> Result<Vec<(Vec<usize>, f64)>> {
    let n = kernel.n();
    if n > KDPP_MAX_POINTS {
        return Err(Error::Capacity(format!(
            "brute-force k-DPP is limited to N <= {KDPP_MAX_POINTS}, got N = {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "subset size k = {k} must lie in 1..=N = {n}"
        )));
    }
    let mut table: Vec<(Vec<usize>, f64)> = (0..n)
        .combinations(k)
        .map(|subset| {
            let det = principal_minor_det(kernel, &subset).max(0.0);
            (subset, det)
        })
        .collect();
    let total: f64 = table.iter().map(|(_, d)| d).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateKernel(format!(
            "all {k}x{k} principal minors are zero"
        )));
    }
    for (_, d) in &mut table {
        *d /= total;
    }
    Ok(table)
}

/// Draws one subset from the exact k-DPP distribution.
pub fn sample_kdpp_bruteforce(kernel: &KernelMatrix, k: usize, seed: u64) -> Result<MiniBatch> {
    let table = kdpp_subset_probabilities(kernel, k)?;
    let mut rng = rng_from_seed(seed);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (subset, p) in &table {
        acc += p;
        if u < acc {
            return Ok(MiniBatch::new(subset.clone(), k));
        }
    }
    // u landed in the rounding slack past the last cumulative step
    let (subset, _) = table.last().expect("table is non-empty");
    Ok(MiniBatch::new(subset.clone(), k))
}
