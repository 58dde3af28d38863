//! One-hidden-layer tanh MLP with a softmax head and cross-entropy loss.
//!
//! Parameters live in one flat vector laid out as `[W1 (d x H, row-major),
//! b1 (H), W2 (H x C, row-major), b2 (C)]`; gradients use the same layout,
//! so an SGD step is a single axpy over the vector.

use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    d: usize,
    hidden: usize,
    classes: usize,
    params: Vec<f64>,
}

impl MlpModel {
    /// Seeded symmetric-uniform initialization scaled by `1/sqrt(fan_in)`.
    pub fn init(d: usize, hidden: usize, classes: usize, seed: u64) -> Result<Self> {
        if d == 0 || hidden == 0 {
            return Err(Error::invalid(
                "input dimension and hidden width must be positive",
            ));
        }
        if classes < 2 {
            return Err(Error::invalid(
                "softmax classifier needs at least 2 classes",
            ));
        }
        let mut rng = rng_from_seed(seed);
        let mut params = Vec::with_capacity(d * hidden + hidden + hidden * classes + classes);
        let a1 = 1.0 / (d as f64).sqrt();
        for _ in 0..(d * hidden + hidden) {
            params.push(rng.random_range(-a1..a1));
        }
        let a2 = 1.0 / (hidden as f64).sqrt();
        for _ in 0..(hidden * classes + classes) {
            params.push(rng.random_range(-a2..a2));
        }
        Ok(MlpModel {
            d,
            hidden,
            classes,
            params,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// In-place SGD step `theta -= lr * grad`.
    pub fn step(&mut self, gradient: &[f64], lr: f64) -> Result<()> {
        if gradient.len() != self.params.len() {
            return Err(Error::invalid(format!(
                "gradient length {} does not match parameter count {}",
                gradient.len(),
                self.params.len()
            )));
        }
        for (p, &g) in self.params.iter_mut().zip(gradient) {
            *p -= lr * g;
        }
        Ok(())
    }

    fn w1(&self) -> &[f64] {
        &self.params[..self.d * self.hidden]
    }

    fn b1(&self) -> &[f64] {
        let o = self.d * self.hidden;
        &self.params[o..o + self.hidden]
    }

    fn w2(&self) -> &[f64] {
        let o = self.d * self.hidden + self.hidden;
        &self.params[o..o + self.hidden * self.classes]
    }

    fn b2(&self) -> &[f64] {
        let o = self.d * self.hidden + self.hidden + self.hidden * self.classes;
        &self.params[o..]
    }

    fn check_rows(&self, features: &[f64], rows: usize) -> Result<()> {
        if rows == 0 {
            return Err(Error::invalid("batch must contain at least one row"));
        }
        if features.len() != rows * self.d {
            return Err(Error::invalid(format!(
                "feature buffer length {} does not match {rows} rows of dimension {}",
                features.len(),
                self.d
            )));
        }
        Ok(())
    }

    /// tanh activations of the hidden layer for one input row.
    fn hidden_activations(&self, x: &[f64], out: &mut [f64]) {
        let (h, w1, b1) = (self.hidden, self.w1(), self.b1());
        out.copy_from_slice(b1);
        for (i, &xi) in x.iter().enumerate() {
            let row = &w1[i * h..(i + 1) * h];
            for (o, &w) in out.iter_mut().zip(row) {
                *o += xi * w;
            }
        }
        for o in out.iter_mut() {
            *o = o.tanh();
        }
    }

    /// Softmax logits -> probabilities for one hidden activation row.
    fn output_probs(&self, a1: &[f64], out: &mut [f64]) {
        let (c, w2, b2) = (self.classes, self.w2(), self.b2());
        out.copy_from_slice(b2);
        for (j, &aj) in a1.iter().enumerate() {
            let row = &w2[j * c..(j + 1) * c];
            for (o, &w) in out.iter_mut().zip(row) {
                *o += aj * w;
            }
        }
        let max = out.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let mut total = 0.0;
        for o in out.iter_mut() {
            *o = (*o - max).exp();
            total += *o;
        }
        for o in out.iter_mut() {
            *o /= total;
        }
    }

    /// Class probabilities, one row per input row; every row sums to 1.
    pub fn forward(&self, features: &[f64], rows: usize) -> Result<Vec<f64>> {
        self.check_rows(features, rows)?;
        let mut probs = vec![0.0; rows * self.classes];
        let mut a1 = vec![0.0; self.hidden];
        for r in 0..rows {
            self.hidden_activations(&features[r * self.d..(r + 1) * self.d], &mut a1);
            self.output_probs(&a1, &mut probs[r * self.classes..(r + 1) * self.classes]);
        }
        Ok(probs)
    }

    fn check_labels(&self, labels: &[u32], rows: usize) -> Result<()> {
        if labels.len() != rows {
            return Err(Error::invalid(format!(
                "label count {} does not match row count {rows}",
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&y| y as usize >= self.classes) {
            return Err(Error::invalid(format!(
                "label {bad} outside the model's {} classes",
                self.classes
            )));
        }
        Ok(())
    }

    /// Mean cross-entropy loss over the rows.
    pub fn loss(&self, features: &[f64], rows: usize, labels: &[u32]) -> Result<f64> {
        self.check_rows(features, rows)?;
        self.check_labels(labels, rows)?;
        let probs = self.forward(features, rows)?;
        let mut total = 0.0;
        for (r, &y) in labels.iter().enumerate() {
            total -= probs[r * self.classes + y as usize].max(1e-300).ln();
        }
        Ok(total / rows as f64)
    }

    /// Mean cross-entropy gradient over the rows, flattened in parameter
    /// layout.
    pub fn grad(&self, features: &[f64], rows: usize, labels: &[u32]) -> Result<Vec<f64>> {
        self.check_rows(features, rows)?;
        self.check_labels(labels, rows)?;
        let (d, h, c) = (self.d, self.hidden, self.classes);
        let mut grad = vec![0.0; self.params.len()];
        let (gw1, rest) = grad.split_at_mut(d * h);
        let (gb1, rest) = rest.split_at_mut(h);
        let (gw2, gb2) = rest.split_at_mut(h * c);

        let mut a1 = vec![0.0; h];
        let mut dz2 = vec![0.0; c];
        let mut dz1 = vec![0.0; h];
        let w2 = self.w2().to_vec();
        for (r, &y) in labels.iter().enumerate() {
            let x = &features[r * d..(r + 1) * d];
            self.hidden_activations(x, &mut a1);
            self.output_probs(&a1, &mut dz2);
            dz2[y as usize] -= 1.0;

            for (j, &aj) in a1.iter().enumerate() {
                let row = &w2[j * c..(j + 1) * c];
                let mut da = 0.0;
                for (slot, (&dz, &w)) in dz2.iter().zip(row).enumerate() {
                    gw2[j * c + slot] += aj * dz;
                    da += dz * w;
                }
                dz1[j] = da * (1.0 - aj * aj);
            }
            for (gb, &dz) in gb2.iter_mut().zip(&dz2) {
                *gb += dz;
            }
            for (i, &xi) in x.iter().enumerate() {
                let row = &mut gw1[i * h..(i + 1) * h];
                for (g, &dz) in row.iter_mut().zip(&dz1) {
                    *g += xi * dz;
                }
            }
            for (gb, &dz) in gb1.iter_mut().zip(&dz1) {
                *gb += dz;
            }
        }
        let inv = 1.0 / rows as f64;
        for g in &mut grad {
            *g *= inv;
        }
        Ok(grad)
    }

    /// Argmax class per row (ties to the lower class index).
    pub fn predict(&self, features: &[f64], rows: usize) -> Result<Vec<u32>> {
        let probs = self.forward(features, rows)?;
        Ok(probs
            .chunks_exact(self.classes)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i as u32)
                    .unwrap()
            })
            .collect())
    }

    /// Fraction of misclassified points over a labeled dataset.
    pub fn error_rate(&self, dataset: &Dataset) -> Result<f64> {
        let labels = dataset.require_labels("error_rate")?;
        if dataset.dim() != self.d {
            return Err(Error::invalid(format!(
                "dataset dimension {} does not match model dimension {}",
                dataset.dim(),
                self.d
            )));
        }
        let predictions = self.predict(dataset.features(), dataset.n())?;
        let wrong = predictions
            .iter()
            .zip(labels)
            .filter(|(p, y)| p != y)
            .count();
        Ok(wrong as f64 / dataset.n() as f64)
    }
}

/// Copies the rows and labels selected by `indices` out of a dataset.
pub fn gather_batch(dataset: &Dataset, indices: &[usize]) -> Result<(Vec<f64>, Vec<u32>)> {
    let labels = dataset.require_labels("gather_batch")?;
    let d = dataset.dim();
    let mut features = Vec::with_capacity(indices.len() * d);
    let mut batch_labels = Vec::with_capacity(indices.len());
    for &i in indices {
        if i >= dataset.n() {
            return Err(Error::invalid(format!(
                "batch index {i} outside 0..{}",
                dataset.n()
            )));
        }
        features.extend_from_slice(dataset.row(i));
        batch_labels.push(labels[i]);
    }
    Ok((features, batch_labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::derive_seed;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zeroed_model_outputs_uniform_probabilities() {
        let mut model = MlpModel::init(3, 4, 5, 0).unwrap();
        model.params_mut().fill(0.0);
        let probs = model.forward(&[0.3, -1.0, 2.0], 1).unwrap();
        for &p in &probs {
            assert_abs_diff_eq!(p, 0.2, epsilon = 1e-12);
        }
    }

    #[test]
    fn probability_rows_sum_to_one() {
        let model = MlpModel::init(4, 6, 3, 7).unwrap();
        let features: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
        let probs = model.forward(&features, 5).unwrap();
        for row in probs.chunks_exact(3) {
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
            assert!(row.iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn crafted_one_point_forward_matches_hand_composition() {
        // d=2, H=1, C=2; weights set by hand, result computed from the same
        // closed-form expression written out independently.
        let mut model = MlpModel::init(2, 1, 2, 0).unwrap();
        let params = model.params_mut();
        params.copy_from_slice(&[
            1.0, -1.0, // W1 (2x1)
            0.5,  // b1
            2.0, -1.0, // W2 (1x2)
            0.1, -0.2, // b2
        ]);
        let x = [0.3, 0.7];
        let probs = model.forward(&x, 1).unwrap();
        let a = (0.3 - 0.7 + 0.5_f64).tanh();
        let z0 = 2.0 * a + 0.1;
        let z1 = -a - 0.2;
        let e0 = z0.exp();
        let e1 = z1.exp();
        assert_abs_diff_eq!(probs[0], e0 / (e0 + e1), epsilon = 1e-14);
        assert_abs_diff_eq!(probs[1], e1 / (e0 + e1), epsilon = 1e-14);
    }

    /// Central finite differences of the loss with respect to each parameter.
    fn finite_difference_grad(
        model: &MlpModel,
        features: &[f64],
        rows: usize,
        labels: &[u32],
        step: f64,
    ) -> Vec<f64> {
        let mut probe = model.clone();
        let grad = (0..model.param_count())
            .map(|idx| {
                let orig = model.params()[idx];
                probe.params_mut()[idx] = orig + step;
                let up = probe.loss(features, rows, labels).unwrap();
                probe.params_mut()[idx] = orig - step;
                let down = probe.loss(features, rows, labels).unwrap();
                probe.params_mut()[idx] = orig;
                (up - down) / (2.0 * step)
            })
            .collect();
        grad
    }

    #[test]
    fn grad_matches_central_finite_differences() {
        let mut rng = crate::seed::rng_from_seed(500);
        for case in 0..100u64 {
            let model = MlpModel::init(3, 4, 3, derive_seed(1000, case)).unwrap();
            let rows = 1 + (case as usize % 5);
            let features: Vec<f64> = (0..rows * 3)
                .map(|_| rand::Rng::random_range(&mut rng, -2.0..2.0))
                .collect();
            let labels: Vec<u32> = (0..rows)
                .map(|_| rand::Rng::random_range(&mut rng, 0..3u32))
                .collect();
            let analytic = model.grad(&features, rows, &labels).unwrap();
            let fd = finite_difference_grad(&model, &features, rows, &labels, 1e-5);
            let num: f64 = analytic
                .iter()
                .zip(&fd)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let den: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            assert!(
                num / den < 1e-5,
                "case {case}: relative gradient error {}",
                num / den
            );
        }
    }

    #[test]
    fn duplicated_point_equals_single_point_gradient() {
        let model = MlpModel::init(2, 3, 2, 5).unwrap();
        let x = [0.4, -0.9];
        let both = [0.4, -0.9, 0.4, -0.9];
        let single = model.grad(&x, 1, &[1]).unwrap();
        let doubled = model.grad(&both, 2, &[1, 1]).unwrap();
        for (a, b) in single.iter().zip(&doubled) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn gradient_norm_vanishes_near_a_one_point_optimum() {
        // one separable point: gradient descent drives the gradient norm
        // toward stationarity
        let mut model = MlpModel::init(1, 2, 2, 3).unwrap();
        let x = [1.0];
        let y = [1u32];
        for _ in 0..200_000 {
            let g = model.grad(&x, 1, &y).unwrap();
            model.step(&g, 5.0).unwrap();
        }
        let g = model.grad(&x, 1, &y).unwrap();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm < 1e-6, "gradient norm {norm}");
    }

    #[test]
    fn empty_batch_is_invalid() {
        let model = MlpModel::init(2, 2, 2, 0).unwrap();
        assert!(model.grad(&[], 0, &[]).is_err());
        assert!(model.loss(&[], 0, &[]).is_err());
        assert!(model.forward(&[], 0).is_err());
    }

    #[test]
    fn shape_and_label_validation() {
        let model = MlpModel::init(2, 2, 2, 0).unwrap();
        assert!(model.forward(&[1.0, 2.0, 3.0], 1).is_err());
        assert!(model.grad(&[1.0, 2.0], 1, &[2]).is_err());
        assert!(model.grad(&[1.0, 2.0], 1, &[0, 1]).is_err());
        assert!(MlpModel::init(2, 2, 1, 0).is_err());
        assert!(MlpModel::init(0, 2, 2, 0).is_err());
    }
}
