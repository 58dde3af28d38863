//! The two-class sine-boundary synthetic dataset and its boundary-error
//! figure of merit.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;
use crate::train::MlpModel;

/// Bounds of the sampling box: `[0, 2*pi] x [-2, 2]`.
pub const SINE_X_MIN: f64 = 0.0;
pub const SINE_X_MAX: f64 = std::f64::consts::TAU;
pub const SINE_Y_MIN: f64 = -2.0;
pub const SINE_Y_MAX: f64 = 2.0;

/// Noiseless ground-truth rule: class 1 above the sine curve.
pub fn sine_truth(x1: f64, x2: f64) -> u32 {
    u32::from(x2 > x1.sin())
}

/// Two classes separated by a sine-shaped boundary.
///
/// Features are uniform on the box; the label compares `x2` against
/// `sin(x1)` plus Gaussian noise of the given standard deviation, so labels
/// flip near the curve when `noise_sd > 0`. Bit-for-bit deterministic given
/// the seed.
pub fn gen_sine_dataset(n: usize, noise_sd: f64, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::invalid("sine dataset needs at least 2 points"));
    }
    if !noise_sd.is_finite() || noise_sd < 0.0 {
        return Err(Error::invalid(
            "noise standard deviation must be non-negative",
        ));
    }
    let noise = Normal::new(0.0, noise_sd)
        .map_err(|e| Error::invalid(format!("bad noise distribution: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let mut features = Vec::with_capacity(n * 2);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x1 = rng.random_range(SINE_X_MIN..SINE_X_MAX);
        let x2 = rng.random_range(SINE_Y_MIN..SINE_Y_MAX);
        let eps = noise.sample(&mut rng);
        features.push(x1);
        features.push(x2);
        labels.push(u32::from(x2 > x1.sin() + eps));
    }
    Dataset::new(features, 2, Some(labels))
}

/// Fraction of a `resolution x resolution` grid over the sine box where a
/// classifier disagrees with the noiseless ground truth.
pub fn boundary_error_of<F>(classify: F, resolution: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> u32,
{
    if resolution == 0 {
        return Err(Error::invalid("grid resolution must be at least 1"));
    }
    let mut wrong = 0usize;
    for iy in 0..resolution {
        let x2 = SINE_Y_MIN + (iy as f64 + 0.5) / resolution as f64 * (SINE_Y_MAX - SINE_Y_MIN);
        for ix in 0..resolution {
            let x1 = SINE_X_MIN + (ix as f64 + 0.5) / resolution as f64 * (SINE_X_MAX - SINE_X_MIN);
            if classify(x1, x2) != sine_truth(x1, x2) {
                wrong += 1;
            }
        }
    }
    Ok(wrong as f64 / (resolution * resolution) as f64)
}

/// Grid disagreement between the model's argmax class and the ground truth.
pub fn boundary_error(model: &MlpModel, resolution: usize) -> Result<f64> {
    if model.dim() != 2 {
        return Err(Error::invalid(format!(
            "boundary error is defined on 2-D models, got dimension {}",
            model.dim()
        )));
    }
    boundary_error_of(
        |x1, x2| {
            model
                .predict(&[x1, x2], 1)
                .expect("2-row forward cannot fail")[0]
        },
        resolution,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_labels_follow_the_curve_exactly() {
        let ds = gen_sine_dataset(500, 0.0, 3).unwrap();
        let labels = ds.labels().unwrap();
        for (i, &label) in labels.iter().enumerate() {
            let row = ds.row(i);
            assert_eq!(label, sine_truth(row[0], row[1]), "point {i}");
        }
    }

    #[test]
    fn classes_are_roughly_balanced() {
        let ds = gen_sine_dataset(1000, 0.1, 9).unwrap();
        let ones = ds.labels().unwrap().iter().filter(|&&y| y == 1).count();
        let frac = ones as f64 / 1000.0;
        assert!((0.4..=0.6).contains(&frac), "class-1 fraction {frac}");
    }

    #[test]
    fn generation_is_bit_for_bit_deterministic() {
        let a = gen_sine_dataset(100, 0.25, 42).unwrap();
        let b = gen_sine_dataset(100, 0.25, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_sine_dataset(1, 0.0, 0).is_err());
        assert!(gen_sine_dataset(10, -1.0, 0).is_err());
        assert!(gen_sine_dataset(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn perfect_rule_has_zero_boundary_error() {
        assert_eq!(boundary_error_of(sine_truth, 200).unwrap(), 0.0);
    }

    #[test]
    fn constant_classifier_errs_on_half_the_box() {
        // the sine region splits the box into equal areas, so a constant
        // prediction disagrees on half of it (up to grid discretization)
        let err = boundary_error_of(|_, _| 1, 200).unwrap();
        assert!((err - 0.5).abs() < 0.02, "constant-classifier error {err}");
    }

    #[test]
    fn model_boundary_error_requires_2d() {
        let model = MlpModel::init(3, 2, 2, 0).unwrap();
        assert!(boundary_error(&model, 10).is_err());
        let flat = MlpModel::init(2, 2, 2, 0).unwrap();
        let e = boundary_error(&flat, 50).unwrap();
        assert!((0.0..=1.0).contains(&e));
    }
}
