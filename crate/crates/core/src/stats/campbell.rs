//! Empirical Campbell-identity checks.
//!
//! Campbell's theorem equates the expected sum of a function over process
//! points with its integral against the intensity; discretely,
//! `E[sum_{i in B} f_i] = sum_i f_i lambda_i`, and for ordered pairs
//! `E[sum_{i != j in B} f_ij] = sum_{i != j} f_ij rho_ij`. These checks pit
//! a fresh Monte-Carlo estimate of the left side against the plug-in right
//! side computed from previously estimated inclusion statistics, and report
//! the discrepancy as a z-score.

use crate::dataset::MiniBatch;
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::stats::ProcessStats;

/// Fewest stats realizations required before a Campbell check is meaningful.
pub const MIN_STATS_REALIZATIONS: usize = 1000;

/// Outcome of a Campbell check.
#[derive(Debug, Clone)]
pub struct CampbellReport {
    /// Monte-Carlo mean of the batch sum over fresh realizations.
    pub mc_mean: f64,
    /// Plug-in sum against the estimated inclusion probabilities.
    pub analytic_sum: f64,
    /// |difference| over the combined standard error (0 when both sides agree
    /// exactly, infinite when the error is zero but the sides differ).
    pub z_score: f64,
    pub combined_se: f64,
    pub fresh_realizations: usize,
}

fn finish_report(sums: &[f64], analytic_sum: f64, stats_realizations: usize) -> CampbellReport {
    let fresh = sums.len();
    let mc_mean = sums.iter().sum::<f64>() / fresh as f64;
    let sample_var = sums
        .iter()
        .map(|&s| (s - mc_mean) * (s - mc_mean))
        .sum::<f64>()
        / (fresh - 1) as f64;
    // the same per-realization variance drives both sides' uncertainty
    let combined_se = (sample_var / fresh as f64 + sample_var / stats_realizations as f64).sqrt();
    let diff = (mc_mean - analytic_sum).abs();
    // below summation roundoff the sides agree
    let roundoff = 1e-12 * (1.0 + mc_mean.abs() + analytic_sum.abs());
    let z_score = if diff <= roundoff {
        0.0
    } else if combined_se == 0.0 {
        f64::INFINITY
    } else {
        diff / combined_se
    };
    CampbellReport {
        mc_mean,
        analytic_sum,
        z_score,
        combined_se,
        fresh_realizations: fresh,
    }
}

fn validate_inputs(stats: &ProcessStats, fresh_realizations: usize) -> Result<()> {
    if stats.realizations() < MIN_STATS_REALIZATIONS {
        return Err(Error::invalid(format!(
            "stats must be estimated from at least {MIN_STATS_REALIZATIONS} realizations"
        )));
    }
    if fresh_realizations < 2 {
        return Err(Error::invalid("need at least 2 fresh realizations"));
    }
    Ok(())
}

/// Checks the first-order Campbell identity for per-point values `f`.
///
/// `seed` must differ from the master seed used for `stats`, so the fresh
/// realizations are independent of the plug-in side.
pub fn campbell_check<F>(
    stats: &ProcessStats,
    f: &[f64],
    sample: F,
    fresh_realizations: usize,
    seed: u64,
) -> Result<CampbellReport>
where
    F: Fn(u64) -> Result<MiniBatch>,
{
    validate_inputs(stats, fresh_realizations)?;
    if f.len() != stats.n() {
        return Err(Error::invalid(format!(
            "f has {} values but stats cover {} points",
            f.len(),
            stats.n()
        )));
    }
    let mut sums = Vec::with_capacity(fresh_realizations);
    for r in 0..fresh_realizations {
        let batch = sample(derive_seed(seed, r as u64))?;
        sums.push(batch.indices().iter().map(|&i| f[i]).sum());
    }
    let analytic: f64 = f.iter().zip(stats.lambdas()).map(|(&v, &l)| v * l).sum();
    Ok(finish_report(&sums, analytic, stats.realizations()))
}

/// Checks the second-order Campbell identity for a pairwise function.
///
/// Sums run over ordered pairs of distinct indices, so a symmetric `f`
/// contributes each unordered pair twice.
pub fn campbell_check_pairs<F, G>(
    stats: &ProcessStats,
    f: G,
    sample: F,
    fresh_realizations: usize,
    seed: u64,
) -> Result<CampbellReport>
where
    F: Fn(u64) -> Result<MiniBatch>,
    G: Fn(usize, usize) -> f64,
{
    validate_inputs(stats, fresh_realizations)?;
    if !stats.has_pairs() {
        return Err(Error::invalid(
            "pairwise Campbell check needs stats estimated with with_pairs",
        ));
    }
    let mut sums = Vec::with_capacity(fresh_realizations);
    for r in 0..fresh_realizations {
        let batch = sample(derive_seed(seed, r as u64))?;
        let idx = batch.indices();
        let mut s = 0.0;
        for &i in idx {
            for &j in idx {
                if i != j {
                    s += f(i, j);
                }
            }
        }
        sums.push(s);
    }
    let n = stats.n();
    let mut analytic = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let rho = stats.rho(i, j).expect("has_pairs checked");
            analytic += (f(i, j) + f(j, i)) * rho;
        }
    }
    Ok(finish_report(&sums, analytic, stats.realizations()))
}
