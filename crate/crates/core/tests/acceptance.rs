//! Acceptance suite: one test per verification criterion, each printing a
//! PASS line with the measured quantities (run with `--nocapture` to see
//! them; assertion messages carry the same detail on failure).
//!
//! Criteria:
//!  1. Vanilla PDS min-distance invariant (exact, 1000 draws x 10 datasets)
//!  2. Dart-throwing cost scales ~quadratically in k and is N-independent
//!  3. Vanilla PDS lowers gradient variance vs random sampling (p < 0.01)
//!  4. Variance formula: exact equality vs enumeration; Monte-Carlo
//!     consistency vs direct measurement for PDS
//!  5. Pair correlation: ~0 below r, near the flat constant beyond 3r
//!  6. Campbell identities: z < 3 for >= 99 of 100 random functions
//!  7. Mingling equals an O(N^2) brute-force oracle exactly
//!  8. Annealing schedule behavior on the reference level histogram
//!  9. Brute-force k-DPP matches determinant ratios (chi-square)
//! 10. Single-batch training: Dense PDS < Vanilla PDS < Random boundaries
//! 11. Analytic gradient matches central finite differences
//! 12. MNIST smoke run: Vanilla PDS final error <= Random's (5 seeds)

use rand::Rng;
use repulse_core::dataset::{Dataset, DistanceMetric};
use repulse_core::mingling::{anneal_schedule, compute_knn, compute_mingling, DEFAULT_ANNEAL_C};
use repulse_core::sampling::{
    kdpp_subset_probabilities, sample_kdpp_bruteforce, KernelMatrix, Method, Radius, SamplerConfig,
};
use repulse_core::seed::{derive_seed, rng_from_seed};
use repulse_core::stats::testing::{chi_square_gof_p, welch_one_sided_p};
use repulse_core::stats::{
    campbell_check, campbell_check_pairs, discrete_variance_formula, estimate_inclusion_stats,
    measure_gradient_variance, pair_correlation, PerPointGradients, ProcessStats,
};
use repulse_core::timing::{log_log_slope, median_ns, pds_bench_radius, time_draws};
use repulse_core::train::{
    boundary_error, gather_batch, gen_sine_dataset, train, train_with_model, LrSchedule, MlpModel,
    TrainConfig,
};
use std::time::Instant;

fn pass(criterion: usize, detail: String) {
    println!("[acceptance] criterion {criterion}: PASS - {detail}");
}

fn uniform_square_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let features: Vec<f64> = (0..n * 2).map(|_| rng.random::<f64>()).collect();
    Dataset::new(features, 2, None).unwrap()
}

#[test]
fn a01_min_distance_invariant() {
    let started = Instant::now();
    let metric = DistanceMetric::Euclidean;
    let mut draws = 0usize;
    for dataset_seed in 0..10u64 {
        let ds = uniform_square_dataset(500, derive_seed(100, dataset_seed));
        let sampler = SamplerConfig::new(Method::VanillaPds, 20)
            .resolve(&ds, metric, derive_seed(101, dataset_seed))
            .unwrap();
        let r = sampler.radius();
        for rep in 0..100u64 {
            let batch = sampler
                .draw(1, derive_seed(102, dataset_seed * 1000 + rep))
                .unwrap();
            draws += 1;
            let idx = batch.indices();
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    let d = metric.distance(ds.row(idx[a]), ds.row(idx[b]));
                    assert!(
                        d >= r,
                        "criterion 1: FAIL - pair at distance {d} below r = {r} \
                         (dataset {dataset_seed}, rep {rep})"
                    );
                }
            }
        }
    }
    assert_eq!(draws, 1000);
    assert!(
        started.elapsed().as_secs() < 10,
        "criterion 1: FAIL - over 10 s"
    );
    pass(
        1,
        format!(
            "0 sub-radius pairs in 1000 draws over 10 datasets ({:?})",
            started.elapsed()
        ),
    );
}

#[test]
fn a02_complexity_scaling() {
    let started = Instant::now();
    let metric = DistanceMetric::Euclidean;
    let big = gen_sine_dataset(100_000, 0.1, 4).unwrap();
    let small = gen_sine_dataset(10_000, 0.1, 4).unwrap();

    let mut points = Vec::new();
    for k in [50usize, 100, 200, 400, 800] {
        let r = pds_bench_radius(&big, k).unwrap();
        let sampler = SamplerConfig::new(Method::VanillaPds, k)
            .with_radius(Radius::Fixed(r))
            .resolve(&big, metric, 0)
            .unwrap();
        let med = median_ns(&time_draws(&sampler, 20, 9).unwrap());
        points.push((k as f64, med as f64));
    }
    let slope = log_log_slope(&points).unwrap();
    assert!(
        (1.3..=2.3).contains(&slope),
        "criterion 2: FAIL - log-log slope {slope} outside [1.3, 2.3]"
    );

    let medians: Vec<u64> = [&small, &big]
        .iter()
        .map(|ds| {
            let r = pds_bench_radius(ds, 100).unwrap();
            let sampler = SamplerConfig::new(Method::VanillaPds, 100)
                .with_radius(Radius::Fixed(r))
                .resolve(ds, metric, 0)
                .unwrap();
            median_ns(&time_draws(&sampler, 20, 9).unwrap())
        })
        .collect();
    let ratio = medians[1].max(medians[0]) as f64 / medians[1].min(medians[0]).max(1) as f64;
    assert!(
        ratio < 3.0,
        "criterion 2: FAIL - k=100 time changed {ratio:.2}x between N=1e4 and N=1e5"
    );
    assert!(
        started.elapsed().as_secs() < 120,
        "criterion 2: FAIL - over 2 min"
    );
    pass(
        2,
        format!("slope {slope:.2} in [1.3, 2.3]; N-dependence ratio {ratio:.2} < 3"),
    );
}

/// A partially trained sine-task model: 100 random-sampling SGD steps.
fn mid_training_model(ds: &Dataset, seed: u64) -> MlpModel {
    let mut model = MlpModel::init(2, 5, 2, derive_seed(seed, 1)).unwrap();
    let sampler = SamplerConfig::new(Method::Random, 30)
        .resolve(ds, DistanceMetric::Euclidean, seed)
        .unwrap();
    for t in 0..100u64 {
        let b = sampler
            .draw(1, derive_seed(seed.wrapping_add(2), t))
            .unwrap();
        let (x, y) = gather_batch(ds, b.indices()).unwrap();
        let g = model.grad(&x, b.accepted(), &y).unwrap();
        model.step(&g, 0.1).unwrap();
    }
    model
}

fn per_point_gradients(ds: &Dataset, model: &MlpModel) -> PerPointGradients {
    let labels = ds.labels().unwrap();
    PerPointGradients::from_fn(ds, model.param_count(), |i| {
        model.grad(ds.row(i), 1, &labels[i..=i])
    })
    .unwrap()
}

#[test]
fn a03_variance_reduction() {
    let started = Instant::now();
    let ds = gen_sine_dataset(1000, 0.1, 7).unwrap();
    let metric = DistanceMetric::Euclidean;
    let model = mid_training_model(&ds, 42);
    let grads = per_point_gradients(&ds, &model);

    let k = 10;
    let pds = SamplerConfig::new(Method::VanillaPds, k)
        .resolve(&ds, metric, 11)
        .unwrap();
    let rnd = SamplerConfig::new(Method::Random, k)
        .resolve(&ds, metric, 11)
        .unwrap();
    let vp = measure_gradient_variance(|s| pds.draw(1, s), &grads, 2000, 21).unwrap();
    let vr = measure_gradient_variance(|s| rnd.draw(1, s), &grads, 2000, 22).unwrap();
    let p = welch_one_sided_p(&vp.squared_deviations, &vr.squared_deviations).unwrap();
    assert!(
        vp.variance < vr.variance && p < 0.01,
        "criterion 3: FAIL - PDS variance {} vs random {} (p = {p})",
        vp.variance,
        vr.variance
    );
    assert!(
        started.elapsed().as_secs() < 60,
        "criterion 3: FAIL - over 1 min"
    );
    pass(
        3,
        format!(
            "PDS variance {:.4e} < random {:.4e} (radius auto = {:.3}, p = {p:.2e})",
            vp.variance,
            vr.variance,
            pds.radius()
        ),
    );
}

/// Exact variance of the batch-mean gradient over all C(N, k) batches.
fn enumeration_variance(grads: &PerPointGradients, k: usize) -> f64 {
    use itertools::Itertools;
    let n = grads.n();
    let p = grads.dim();
    let means: Vec<Vec<f64>> = (0..n)
        .combinations(k)
        .map(|subset| {
            let mut m = vec![0.0; p];
            for &i in &subset {
                for (a, &g) in m.iter_mut().zip(grads.row(i)) {
                    *a += g;
                }
            }
            m.iter_mut().for_each(|a| *a /= k as f64);
            m
        })
        .collect();
    let count = means.len() as f64;
    let mut grand = vec![0.0; p];
    for m in &means {
        for (g, &v) in grand.iter_mut().zip(m) {
            *g += v;
        }
    }
    grand.iter_mut().for_each(|g| *g /= count);
    means
        .iter()
        .map(|m| {
            m.iter()
                .zip(&grand)
                .map(|(&v, &g)| (v - g) * (v - g))
                .sum::<f64>()
        })
        .sum::<f64>()
        / count
}

#[test]
fn a04_formula_oracle_equivalence() {
    // Part A: exact hypergeometric inclusion statistics at N=8, k=3 make the
    // discrete formula equal the enumeration variance over all 56 batches.
    let (n, k) = (8usize, 3usize);
    let mut rng = rng_from_seed(321);
    let grads = PerPointGradients::new(
        (0..n * 5).map(|_| rng.random_range(-1.0..1.0)).collect(),
        n,
        5,
    )
    .unwrap();
    let lambda = vec![k as f64 / n as f64; n];
    let rho_val = (k * (k - 1)) as f64 / (n * (n - 1)) as f64;
    let mut rho = vec![rho_val; n * n];
    (0..n).for_each(|i| rho[i * n + i] = 0.0);
    let exact_stats = ProcessStats::from_values(lambda, Some(&rho), 1, k as f64).unwrap();
    let formula = discrete_variance_formula(&exact_stats, &grads, k as f64).unwrap();
    let exact = enumeration_variance(&grads, k);
    let rel = (formula.total - exact).abs() / exact.abs();
    assert!(
        rel < 1e-10,
        "criterion 4: FAIL - exact-plug-in relative error {rel} (formula {} vs enumeration {exact})",
        formula.total
    );

    // Part B: Vanilla PDS at N=10 with Monte-Carlo inclusion statistics; the
    // plug-in total must match direct measurement within 3 combined standard
    // errors (formula-side error from 10 independent estimation blocks).
    let ds = Dataset::new((0..10).map(f64::from).collect(), 1, None).unwrap();
    let sampler = SamplerConfig::new(Method::VanillaPds, 4)
        .with_radius(Radius::Fixed(1.5))
        .resolve(&ds, DistanceMetric::Euclidean, 0)
        .unwrap();
    let draw = |s| sampler.draw(1, s);
    let mut rng = rng_from_seed(321);
    let pds_grads = PerPointGradients::new(
        (0..10 * 6).map(|_| rng.random_range(-1.0..1.0)).collect(),
        10,
        6,
    )
    .unwrap();
    let stats = estimate_inclusion_stats(draw, 10, 100_000, 777, true).unwrap();
    let full = discrete_variance_formula(&stats, &pds_grads, stats.mean_batch_size()).unwrap();
    let block_totals: Vec<f64> = (0..10u64)
        .map(|b| {
            let bs = estimate_inclusion_stats(draw, 10, 10_000, derive_seed(777, 1000 + b), true)
                .unwrap();
            discrete_variance_formula(&bs, &pds_grads, bs.mean_batch_size())
                .unwrap()
                .total
        })
        .collect();
    let bm = block_totals.iter().sum::<f64>() / 10.0;
    let bv = block_totals
        .iter()
        .map(|&t| (t - bm) * (t - bm))
        .sum::<f64>()
        / 9.0;
    let se_formula = (bv / 10.0).sqrt();
    let measured = measure_gradient_variance(draw, &pds_grads, 100_000, 888).unwrap();
    let combined = (se_formula * se_formula + measured.variance_se * measured.variance_se).sqrt();
    let t_stat = (full.total - measured.variance).abs() / combined;
    assert!(
        t_stat <= 3.0,
        "criterion 4: FAIL - formula {} vs measured {} is {t_stat:.2} combined SE apart",
        full.total,
        measured.variance
    );
    pass(4, format!(
        "exact plug-in rel err {rel:.1e} < 1e-10; PDS formula {:.4e} vs measured {:.4e} ({t_stat:.2} SE)",
        full.total, measured.variance
    ));
}

#[test]
fn a05_pair_correlation_shape() {
    let n = 300;
    let k = 12;
    let ds = gen_sine_dataset(n, 0.1, 3).unwrap();
    let metric = DistanceMetric::Euclidean;
    let pds = SamplerConfig::new(Method::VanillaPds, k)
        .resolve(&ds, metric, 5)
        .unwrap();
    let r = pds.radius();
    let stats = estimate_inclusion_stats(|s| pds.draw(1, s), n, 10_000, 17, true).unwrap();
    let edges = vec![0.0, 0.5 * r, r, 1.5 * r, 2.0 * r, 3.0 * r, 4.0 * r, 6.0 * r];
    let hist = pair_correlation(&stats, &ds, metric, &edges).unwrap();

    // bins [0, r/2) and [r/2, r): hard-core exclusion
    for bin in 0..2 {
        let est = hist.estimate(bin).expect("sub-radius bins hold pairs");
        assert!(
            est < 0.1,
            "criterion 5: FAIL - bin {bin} below r has estimate {est} >= 0.1"
        );
    }
    // bins [3r, 4r) and [4r, 6r): near the without-replacement constant
    let constant = (k - 1) as f64 * n as f64 / ((n - 1) as f64 * k as f64);
    for bin in 5..7 {
        let est = hist.estimate(bin).expect("far bins hold pairs");
        let rel = (est - constant).abs() / constant;
        assert!(
            rel < 0.15,
            "criterion 5: FAIL - bin {bin} beyond 3r is {est:.4}, {:.0}% from constant {constant:.4}",
            rel * 100.0
        );
    }
    pass(5, format!(
        "below r: {:.3}, {:.3} (< 0.1); beyond 3r: {:.3}, {:.3} vs constant {constant:.3} (within 15%)",
        hist.estimate(0).unwrap(),
        hist.estimate(1).unwrap(),
        hist.estimate(5).unwrap(),
        hist.estimate(6).unwrap()
    ));
}

#[test]
fn a06_campbell_checks() {
    let ds = gen_sine_dataset(200, 0.1, 13).unwrap();
    let metric = DistanceMetric::Euclidean;
    let sampler = SamplerConfig::new(Method::VanillaPds, 10)
        .with_radius(Radius::Fixed(0.8))
        .resolve(&ds, metric, 55)
        .unwrap();
    let draw = |s| sampler.draw(1, s);
    let stats = estimate_inclusion_stats(draw, 200, 5000, 1000, true).unwrap();

    let mut ok = 0usize;
    let mut worst: f64 = 0.0;
    for fidx in 0..50u64 {
        let mut rng = rng_from_seed(derive_seed(7_000, fidx));
        let f: Vec<f64> = (0..200).map(|_| rng.random_range(-2.0..2.0)).collect();
        let rep = campbell_check(&stats, &f, draw, 5000, derive_seed(8_000, fidx)).unwrap();
        worst = worst.max(rep.z_score);
        if rep.z_score < 3.0 {
            ok += 1;
        }
    }
    for fidx in 0..50u64 {
        let mut rng = rng_from_seed(derive_seed(9_000, fidx));
        let a: Vec<f64> = (0..200).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..200).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rep = campbell_check_pairs(
            &stats,
            |i, j| a[i] * b[j],
            draw,
            5000,
            derive_seed(10_000, fidx),
        )
        .unwrap();
        worst = worst.max(rep.z_score);
        if rep.z_score < 3.0 {
            ok += 1;
        }
    }
    assert!(
        ok >= 99,
        "criterion 6: FAIL - only {ok}/100 functions below z = 3 (worst {worst:.2})"
    );
    pass(
        6,
        format!("{ok}/100 randomized functions below z = 3 (worst z = {worst:.2})"),
    );
}

/// Independent O(N^2) mingling recomputation.
fn brute_force_mingling(ds: &Dataset, k: usize) -> Vec<f64> {
    let labels = ds.labels().unwrap();
    let metric = DistanceMetric::Euclidean;
    (0..ds.n())
        .map(|i| {
            let mut dists: Vec<(f64, usize)> = (0..ds.n())
                .filter(|&j| j != i)
                .map(|j| (metric.distance(ds.row(i), ds.row(j)), j))
                .collect();
            dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dists[..k]
                .iter()
                .filter(|&&(_, j)| labels[j] != labels[i])
                .count() as f64
                / k as f64
        })
        .collect()
}

#[test]
fn a07_mingling_oracle() {
    let metric = DistanceMetric::Euclidean;
    for case in 0..50u64 {
        let mut rng = rng_from_seed(derive_seed(700, case));
        let n = rng.random_range(50..=200usize);
        let classes = rng.random_range(2..=4u32);
        let features: Vec<f64> = (0..n * 2).map(|_| rng.random_range(-3.0..3.0)).collect();
        let labels: Vec<u32> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        let ds = Dataset::new(features, 2, Some(labels)).unwrap();
        let k = [1usize, 3, 5][case as usize % 3];
        let knn = compute_knn(&ds, metric, k).unwrap();
        let table = compute_mingling(&knn, ds.labels().unwrap()).unwrap();
        let oracle = brute_force_mingling(&ds, k);
        for (i, expected) in oracle.iter().enumerate() {
            assert_eq!(
                table.value(i),
                *expected,
                "criterion 7: FAIL - case {case} (N={n}, K={k}) point {i}"
            );
        }
    }
    pass(
        7,
        "exact oracle agreement on 50 random labeled datasets (K in {1,3,5})".into(),
    );
}

#[test]
fn a08_annealing_schedule() {
    let h = [0.9017, 0.0474, 0.0212, 0.013, 0.0096, 0.0071];
    let pi1 = anneal_schedule(&h, 1, DEFAULT_ANNEAL_C).unwrap();
    assert!(
        pi1[0] > 0.999,
        "criterion 8: FAIL - pi_1[0] = {} not above 0.999",
        pi1[0]
    );
    let mut prev = pi1[0];
    for exp in 1..=6u32 {
        let n = 10u64.pow(exp);
        let next = anneal_schedule(&h, n, DEFAULT_ANNEAL_C).unwrap()[0];
        assert!(
            next <= prev + 1e-15,
            "criterion 8: FAIL - pi_n[0] increased from {prev} to {next} at n = {n}"
        );
        prev = next;
    }
    let pi9 = anneal_schedule(&h, 1_000_000_000, DEFAULT_ANNEAL_C).unwrap();
    let max_dev = pi9
        .iter()
        .map(|&v| (v - 1.0 / 6.0).abs())
        .fold(0.0f64, f64::max);
    assert!(
        max_dev < 0.05,
        "criterion 8: FAIL - at n=1e9 max deviation from uniform is {max_dev}"
    );
    pass(
        8,
        format!(
        "pi_1[0] = {:.6}; non-increasing over n = 10^1..10^6; max |pi_1e9 - 1/6| = {max_dev:.4}",
        pi1[0]
    ),
    );
}

#[test]
fn a09_kdpp_oracle() {
    // random PSD kernel built as G G^T from a seeded Gaussian factor
    let n = 4;
    let mut rng = rng_from_seed(2024);
    let g: Vec<f64> = (0..n * n)
        .map(|_| rng.random::<f64>() * 2.0 - 1.0)
        .collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = (0..n).map(|t| g[i * n + t] * g[j * n + t]).sum();
        }
    }
    let kernel = KernelMatrix::new(data, n).unwrap();
    let table = kdpp_subset_probabilities(&kernel, 2).unwrap();
    let mut counts = std::collections::HashMap::new();
    for rep in 0..100_000u64 {
        let b = sample_kdpp_bruteforce(&kernel, 2, derive_seed(31, rep)).unwrap();
        *counts.entry(b.indices().to_vec()).or_insert(0u64) += 1;
    }
    let observed: Vec<u64> = table
        .iter()
        .map(|(s, _)| *counts.get(s).unwrap_or(&0))
        .collect();
    let expected: Vec<f64> = table.iter().map(|(_, p)| *p).collect();
    let p = chi_square_gof_p(&observed, &expected).unwrap();
    assert!(
        p > 0.01,
        "criterion 9: FAIL - chi-square p = {p} against determinant ratios"
    );
    pass(
        9,
        format!("10^5 draws match determinant ratios (chi-square p = {p:.3})"),
    );
}

#[test]
fn a10_single_batch_boundary_ordering() {
    let started = Instant::now();
    let metric = DistanceMetric::Euclidean;
    let train_set = gen_sine_dataset(300, 0.0, 77).unwrap();
    let test_set = gen_sine_dataset(200, 0.0, 78).unwrap();
    let k = 30;
    let dense_pi = vec![0.35, 0.13, 0.13, 0.13, 0.13, 0.13];

    let mut errs: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for rep in 0..30u64 {
        for (slot, method) in [Method::Random, Method::VanillaPds, Method::DensePds]
            .into_iter()
            .enumerate()
        {
            let mut cfg = SamplerConfig::new(method, k).with_radius(Radius::Fixed(0.6));
            if method == Method::DensePds {
                cfg = cfg
                    .with_radius(Radius::Fixed(0.45))
                    .with_pi(dense_pi.clone());
            }
            let sampler = cfg.resolve(&train_set, metric, 5).unwrap();
            let config = TrainConfig {
                iterations: 3000,
                eval_every: 3000,
                lr: LrSchedule::Constant(0.3),
                hidden: 5,
                seed: derive_seed(900, rep),
                single_batch: true,
            };
            let (_, model) = train_with_model(&train_set, &test_set, &sampler, &config).unwrap();
            errs[slot].push(boundary_error(&model, 200).unwrap());
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m_random, m_vanilla, m_dense) = (mean(&errs[0]), mean(&errs[1]), mean(&errs[2]));
    let p = welch_one_sided_p(&errs[2], &errs[0]).unwrap();
    assert!(
        m_dense < m_vanilla && m_vanilla < m_random,
        "criterion 10: FAIL - ordering violated: dense {m_dense:.4}, vanilla {m_vanilla:.4}, random {m_random:.4}"
    );
    assert!(
        p < 0.05,
        "criterion 10: FAIL - dense vs random p = {p} not below 0.05"
    );
    assert!(
        started.elapsed().as_secs() < 120,
        "criterion 10: FAIL - over 2 min"
    );
    pass(10, format!(
        "boundary error dense {m_dense:.4} < vanilla {m_vanilla:.4} < random {m_random:.4} (p = {p:.2e}, {:?})",
        started.elapsed()
    ));
}

#[test]
fn a11_gradient_check() {
    let mut rng = rng_from_seed(500);
    let mut worst: f64 = 0.0;
    for case in 0..100u64 {
        let model = MlpModel::init(3, 4, 3, derive_seed(1000, case)).unwrap();
        let rows = 1 + (case as usize % 5);
        let features: Vec<f64> = (0..rows * 3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let labels: Vec<u32> = (0..rows).map(|_| rng.random_range(0..3u32)).collect();
        let analytic = model.grad(&features, rows, &labels).unwrap();

        let step = 1e-5;
        let mut probe = model.clone();
        let fd: Vec<f64> = (0..model.param_count())
            .map(|idx| {
                let orig = model.params()[idx];
                probe.params_mut()[idx] = orig + step;
                let up = probe.loss(&features, rows, &labels).unwrap();
                probe.params_mut()[idx] = orig - step;
                let down = probe.loss(&features, rows, &labels).unwrap();
                probe.params_mut()[idx] = orig;
                (up - down) / (2.0 * step)
            })
            .collect();
        let num: f64 = analytic
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let den: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        let rel = num / den;
        worst = worst.max(rel);
        assert!(
            rel < 1e-5,
            "criterion 11: FAIL - case {case} relative gradient error {rel}"
        );
    }
    pass(
        11,
        format!("100 random (model, batch) pairs; worst relative error {worst:.2e} < 1e-5"),
    );
}

#[test]
fn a12_mnist_smoke() {
    let started = Instant::now();
    let dir = std::env::var("REPULSE_MNIST_DIR").map_or_else(
        |_| std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist"),
        std::path::PathBuf::from,
    );
    let load = |images: &str, labels: &str, limit| {
        repulse_core::io::load_idx(dir.join(images), dir.join(labels), limit).unwrap_or_else(|e| {
            panic!(
                "criterion 12: FAIL - cannot load MNIST from {} ({e}); \
                 place the four standard IDX files there or set REPULSE_MNIST_DIR",
                dir.display()
            )
        })
    };
    let train_set = load("train-images-idx3-ubyte", "train-labels-idx1-ubyte", 5000);
    let test_set = load("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte", 10_000);
    assert_eq!((train_set.n(), test_set.n()), (5000, 10_000));

    let metric = DistanceMetric::Euclidean;
    let mut means = Vec::new();
    for method in [Method::VanillaPds, Method::Random] {
        let sampler = SamplerConfig::new(method, 32)
            .resolve(&train_set, metric, 1234)
            .unwrap();
        let mut errs = Vec::new();
        for seed in 0..5u64 {
            let config = TrainConfig {
                iterations: 2000,
                eval_every: 2000,
                lr: LrSchedule::Constant(0.3),
                hidden: 128,
                seed: derive_seed(31_000, seed),
                single_batch: false,
            };
            let metrics = train(&train_set, &test_set, &sampler, &config).unwrap();
            errs.push(metrics.final_test_error().unwrap());
        }
        means.push(errs.iter().sum::<f64>() / errs.len() as f64);
    }
    let (pds_mean, random_mean) = (means[0], means[1]);
    assert!(
        pds_mean <= random_mean,
        "criterion 12: FAIL - PDS mean error {pds_mean:.4} above random {random_mean:.4}"
    );
    assert!(
        started.elapsed().as_secs() < 600,
        "criterion 12: FAIL - over 10 min"
    );
    pass(
        12,
        format!(
            "PDS mean test error {pds_mean:.4} <= random {random_mean:.4} over 5 seeds ({:?})",
            started.elapsed()
        ),
    );
}
