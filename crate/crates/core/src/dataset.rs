//! Core data types: datasets, distance metrics, and mini-batches.

use crate::error::{Error, Result};

/// An N×d feature matrix with optional integer class labels.
///
/// Features are stored row-major; row `i` is the feature vector of point `i`.
/// Labels, when present, are class identifiers in `0..C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    labels: Option<Vec<u32>>,
    n: usize,
    d: usize,
}

impl Dataset {
    /// Builds a dataset from row-major features.
    ///
    /// Fails if the matrix is empty, the length is not a multiple of `d`,
    /// any value is non-finite, or the label vector length differs from N.
    pub fn new(features: Vec<f64>, d: usize, labels: Option<Vec<u32>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("feature dimension must be at least 1"));
        }
        if features.is_empty() {
            return Err(Error::invalid("dataset must contain at least one point"));
        }
        if !features.len().is_multiple_of(d) {
            return Err(Error::invalid(format!(
                "feature buffer length {} is not a multiple of dimension {d}",
                features.len()
            )));
        }
        let n = features.len() / d;
        if let Some(bad) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite feature value at point {}, column {}",
                bad / d,
                bad % d
            )));
        }
        if let Some(ref l) = labels {
            if l.len() != n {
                return Err(Error::invalid(format!(
                    "label vector length {} does not match point count {n}",
                    l.len()
                )));
            }
        }
        Ok(Dataset {
            features,
            labels,
            n,
            d,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Feature vector of point `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// Labels, or an invalid-input error naming the operation that needs them.
    pub fn require_labels(&self, what: &str) -> Result<&[u32]> {
        self.labels
            .as_deref()
            .ok_or_else(|| Error::invalid(format!("{what} requires a labeled dataset")))
    }

    /// Number of classes, inferred as `max(label) + 1`.
    pub fn num_classes(&self) -> Option<usize> {
        self.labels
            .as_deref()
            .and_then(|l| l.iter().max().map(|&m| m as usize + 1))
    }

    /// Per-dimension (min, max) bounds of the feature values.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); self.d];
        for i in 0..self.n {
            for (b, &v) in bounds.iter_mut().zip(self.row(i)) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        bounds
    }
}

/// Distance measure on feature space.
///
/// Euclidean on raw features is the only kind for now; the enum leaves room
/// for others without breaking the sampler signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMetric {
    #[default]
    Euclidean,
}

impl DistanceMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            DistanceMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let t = x - y;
                    t * t
                })
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// An ordered set of distinct point indices drawn by a sampler.
///
/// `accepted() <= requested()`; dart throwing may return fewer points than
/// asked for when the rejection cap is hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiniBatch {
    indices: Vec<usize>,
    requested: usize,
}

impl MiniBatch {
    pub fn new(indices: Vec<usize>, requested: usize) -> Self {
        debug_assert!(indices.len() <= requested);
        debug_assert!(
            {
                let mut seen = indices.clone();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            },
            "mini-batch indices must be distinct"
        );
        MiniBatch { indices, requested }
    }

    /// Indices in acceptance order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    pub fn accepted(&self) -> usize {
        self.indices.len()
    }

    pub fn is_partial(&self) -> bool {
        self.accepted() < self.requested
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}
