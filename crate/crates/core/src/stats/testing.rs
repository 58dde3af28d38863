//! Small statistical tests used by the verification suites and the CLI.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Chi-square goodness-of-fit p-value of observed counts against a discrete
/// distribution. `expected_probs` is normalized internally.
pub fn chi_square_gof_p(observed: &[u64], expected_probs: &[f64]) -> Result<f64> {
    if observed.len() != expected_probs.len() {
        return Err(Error::invalid(format!(
            "observed ({}) and expected ({}) cell counts differ",
            observed.len(),
            expected_probs.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::invalid("chi-square needs at least 2 cells"));
    }
    if expected_probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
        return Err(Error::invalid(
            "expected probabilities must be non-negative",
        ));
    }
    let mass: f64 = expected_probs.iter().sum();
    if mass <= 0.0 {
        return Err(Error::invalid(
            "expected probabilities must have positive mass",
        ));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::invalid("observed counts are all zero"));
    }

    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        let e = p / mass * total as f64;
        if e == 0.0 {
            if o > 0 {
                // impossible cell observed: the fit fails outright
                return Ok(0.0);
            }
            continue;
        }
        let d = o as f64 - e;
        stat += d * d / e;
    }
    let df = (observed.len() - 1) as f64;
    let chi = ChiSquared::new(df).expect("df >= 1");
    Ok(1.0 - chi.cdf(stat))
}

/// One-sided Welch test p-value for H1: mean(a) < mean(b), using the normal
/// approximation (both samples are expected to be large).
pub fn welch_one_sided_p(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::invalid("both samples need at least 2 observations"));
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let var = |xs: &[f64], m: f64| {
        xs.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
    };
    let (ma, mb) = (mean(a), mean(b));
    let se = (var(a, ma) / a.len() as f64 + var(b, mb) / b.len() as f64).sqrt();
    if se == 0.0 {
        return Ok(if ma < mb {
            0.0
        } else if ma > mb {
            1.0
        } else {
            0.5
        });
    }
    let t = (ma - mb) / se;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    Ok(normal.cdf(t))
}
