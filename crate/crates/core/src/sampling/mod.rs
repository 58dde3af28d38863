//! Mini-batch samplers: the uniform baseline, Poisson disk sampling by dart
//! throwing (Vanilla/Easy/Dense/Anneal), and a brute-force k-DPP oracle.
//!
//! Every sampler is a pure function of its inputs and a 64-bit seed -- the
//! same seed always yields the same batch -- and is safe to invoke from
//! multiple threads on a shared read-only dataset.

mod dart;
mod dense;
mod kdpp;
mod random;

pub use dart::{sample_easy_pds, sample_vanilla_pds};
pub use dense::{sample_anneal_pds, sample_dense_pds};
pub use kdpp::{kdpp_subset_probabilities, sample_kdpp_bruteforce, KernelMatrix, KDPP_MAX_POINTS};
pub use random::sample_random;

use std::fmt;
use std::str::FromStr;

use crate::dataset::{Dataset, DistanceMetric, MiniBatch};
use crate::error::{Error, Result};
use crate::mingling::{compute_knn, compute_mingling, MinglingTable, DEFAULT_ANNEAL_C};
use crate::seed::{derive_seed, rng_from_seed};

/// Default consecutive-rejection cap, as a multiple of the batch size.
pub const DEFAULT_MAX_TRIALS_FACTOR: usize = 100;

/// Subsample size used when resolving an `auto` radius.
pub const RADIUS_AUTO_SUBSAMPLE: usize = 1000;

/// The sampling methods exposed by the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Random,
    VanillaPds,
    EasyPds,
    DensePds,
    AnnealPds,
    KdppBruteforce,
}

impl Method {
    /// All method names accepted on the command line.
    pub const ALL: [Method; 6] = [
        Method::Random,
        Method::VanillaPds,
        Method::EasyPds,
        Method::DensePds,
        Method::AnnealPds,
        Method::KdppBruteforce,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::VanillaPds => "vanilla_pds",
            Method::EasyPds => "easy_pds",
            Method::DensePds => "dense_pds",
            Method::AnnealPds => "anneal_pds",
            Method::KdppBruteforce => "kdpp_bruteforce",
        }
    }

    /// Whether the method consumes mingling indices (and therefore labels).
    pub fn needs_mingling(&self) -> bool {
        matches!(self, Method::EasyPds | Method::DensePds | Method::AnnealPds)
    }

    /// Whether the method uses a repulsion radius.
    pub fn uses_radius(&self) -> bool {
        !matches!(self, Method::Random | Method::KdppBruteforce)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown sampling method '{s}' (expected one of: {})",
                    Method::ALL.map(|m| m.name()).join(", ")
                ))
            })
    }
}

/// Disk radius specification: a fixed value or the median-distance heuristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    /// Half the median pairwise distance of a seeded subsample.
    Auto,
    Fixed(f64),
}

/// Everything needed to construct a sampler, before binding it to a dataset.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub method: Method,
    pub radius: Radius,
    pub batch_size: usize,
    /// Consecutive-rejection cap; defaults to `100 * batch_size`.
    pub max_trials: Option<usize>,
    /// Neighbor count for mingling-based methods.
    pub knn_k: usize,
    /// Level weights for Dense PDS; defaults to uniform over levels.
    pub pi: Option<Vec<f64>>,
    /// Constant in the Anneal PDS exponent `1/ln(c*n + 1)`.
    pub anneal_c: f64,
}

impl SamplerConfig {
    pub fn new(method: Method, batch_size: usize) -> Self {
        SamplerConfig {
            method,
            radius: Radius::Auto,
            batch_size,
            max_trials: None,
            knn_k: 5,
            pi: None,
            anneal_c: DEFAULT_ANNEAL_C,
        }
    }

    pub fn with_radius(mut self, radius: Radius) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_knn_k(mut self, k: usize) -> Self {
        self.knn_k = k;
        self
    }

    pub fn with_pi(mut self, pi: Vec<f64>) -> Self {
        self.pi = Some(pi);
        self
    }

    pub fn with_max_trials(mut self, max_trials: usize) -> Self {
        self.max_trials = Some(max_trials);
        self
    }

    /// Binds the configuration to a dataset: resolves the radius, computes
    /// the mingling table or kernel where the method requires one, and
    /// validates every parameter. `seed` drives only the radius-heuristic
    /// subsample.
    pub fn resolve<'a>(
        &self,
        dataset: &'a Dataset,
        metric: DistanceMetric,
        seed: u64,
    ) -> Result<ResolvedSampler<'a>> {
        let n = dataset.n();
        if self.batch_size == 0 {
            return Err(Error::invalid("batch size k must be at least 1"));
        }
        if self.batch_size > n {
            return Err(Error::invalid(format!(
                "batch size k = {} exceeds dataset size N = {n}",
                self.batch_size
            )));
        }
        let max_trials = self
            .max_trials
            .unwrap_or(DEFAULT_MAX_TRIALS_FACTOR * self.batch_size);
        if max_trials == 0 {
            return Err(Error::invalid("max_trials must be at least 1"));
        }

        let radius = if self.method.uses_radius() {
            match self.radius {
                Radius::Fixed(r) => {
                    if !r.is_finite() || r < 0.0 {
                        return Err(Error::invalid(
                            "disk radius must be finite and non-negative",
                        ));
                    }
                    r
                }
                Radius::Auto => radius_heuristic(
                    dataset,
                    metric,
                    RADIUS_AUTO_SUBSAMPLE.min(n),
                    derive_seed(seed, 0x5244),
                )?,
            }
        } else {
            0.0
        };

        let mingling = if self.method.needs_mingling() {
            let labels = dataset.require_labels(self.method.name())?;
            let knn = compute_knn(dataset, metric, self.knn_k)?;
            Some(compute_mingling(&knn, labels)?)
        } else {
            None
        };

        let pi = match (&self.method, &self.pi) {
            (Method::DensePds, Some(pi)) => Some(pi.clone()),
            (Method::DensePds, None) => {
                // uniform preference over all K+1 levels
                Some(vec![1.0; self.knn_k + 1])
            }
            _ => None,
        };

        let kernel = if self.method == Method::KdppBruteforce {
            if n > KDPP_MAX_POINTS {
                return Err(Error::Capacity(format!(
                    "kdpp_bruteforce is limited to N <= {KDPP_MAX_POINTS}, got N = {n}"
                )));
            }
            // Gaussian kernel with the median pairwise distance as bandwidth.
            let sigma = 2.0 * radius_heuristic(dataset, metric, n, derive_seed(seed, 0x4B44))?;
            if sigma <= 0.0 {
                return Err(Error::DegenerateKernel(
                    "all points identical: RBF bandwidth is zero".into(),
                ));
            }
            Some(KernelMatrix::from_rbf(dataset, metric, sigma)?)
        } else {
            None
        };

        Ok(ResolvedSampler {
            dataset,
            metric,
            method: self.method,
            radius,
            batch_size: self.batch_size,
            max_trials,
            mingling,
            pi,
            anneal_c: self.anneal_c,
            kernel,
        })
    }
}

/// A sampler bound to a dataset, ready to draw batches.
#[derive(Debug, Clone)]
pub struct ResolvedSampler<'a> {
    dataset: &'a Dataset,
    metric: DistanceMetric,
    method: Method,
    radius: f64,
    batch_size: usize,
    max_trials: usize,
    mingling: Option<MinglingTable>,
    pi: Option<Vec<f64>>,
    anneal_c: f64,
    kernel: Option<KernelMatrix>,
}

impl<'a> ResolvedSampler<'a> {
    pub fn method(&self) -> Method {
        self.method
    }

    /// The resolved disk radius (0 for methods without repulsion).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn mingling(&self) -> Option<&MinglingTable> {
        self.mingling.as_ref()
    }

    /// Draws one mini-batch. `iteration` (1-based) only matters for Anneal
    /// PDS, where it selects the schedule step `pi_n`.
    pub fn draw(&self, iteration: u64, seed: u64) -> Result<MiniBatch> {
        match self.method {
            Method::Random => sample_random(self.dataset, self.batch_size, seed),
            Method::VanillaPds => sample_vanilla_pds(
                self.dataset,
                self.metric,
                self.radius,
                self.batch_size,
                self.max_trials,
                seed,
            ),
            Method::EasyPds => sample_easy_pds(
                self.dataset,
                self.metric,
                self.radius,
                self.mingling.as_ref().expect("resolve() built the table"),
                self.batch_size,
                self.max_trials,
                seed,
            ),
            Method::DensePds => sample_dense_pds(
                self.dataset,
                self.metric,
                self.radius,
                self.mingling.as_ref().expect("resolve() built the table"),
                self.pi.as_ref().expect("resolve() built pi"),
                self.batch_size,
                self.max_trials,
                seed,
            ),
            Method::AnnealPds => sample_anneal_pds(
                self.dataset,
                self.metric,
                self.radius,
                self.mingling.as_ref().expect("resolve() built the table"),
                iteration,
                self.batch_size,
                self.max_trials,
                seed,
                self.anneal_c,
            ),
            Method::KdppBruteforce => sample_kdpp_bruteforce(
                self.kernel.as_ref().expect("resolve() built the kernel"),
                self.batch_size,
                seed,
            ),
        }
    }
}

/// Table-driven disk radius: half the median pairwise distance among a
/// seeded uniform subsample of `min(subsample, N)` points.
///
/// The median of an even pair count is the mean of the two central values.
pub fn radius_heuristic(
    dataset: &Dataset,
    metric: DistanceMetric,
    subsample: usize,
    seed: u64,
) -> Result<f64> {
    let n = dataset.n();
    if subsample < 2 {
        return Err(Error::invalid(
            "radius heuristic needs a subsample of at least 2",
        ));
    }
    if n < 2 {
        return Err(Error::invalid(
            "radius heuristic needs at least 2 points in the dataset",
        ));
    }
    let m = subsample.min(n);
    let mut rng = rng_from_seed(seed);
    let chosen = rand::seq::index::sample(&mut rng, n, m).into_vec();
    let mut dists = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in (a + 1)..m {
            dists.push(metric.distance(dataset.row(chosen[a]), dataset.row(chosen[b])));
        }
    }
    dists.sort_unstable_by(f64::total_cmp);
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 1 {
        dists[mid]
    } else {
        0.5 * (dists[mid - 1] + dists[mid])
    };
    Ok(0.5 * median)
}
