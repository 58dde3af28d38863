//! Uniform random mini-batch sampling without replacement (the SGD baseline).

use crate::dataset::{Dataset, MiniBatch};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Draws `k` distinct indices uniformly over all size-`k` subsets.
pub fn sample_random(dataset: &Dataset, k: usize, seed: u64) -> Result<MiniBatch> {
    let n = dataset.n();
    if k == 0 {
        return Err(Error::invalid("batch size k must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "batch size k = {k} exceeds dataset size N = {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let indices = rand::seq::index::sample(&mut rng, n, k).into_vec();
    Ok(MiniBatch::new(indices, k))
}
