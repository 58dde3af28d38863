//! Property tests over the sampler family: distinct indices, determinism,
//! min-distance, partial-batch monotonicity, and label-permutation
//! invariance of mingling.

use proptest::prelude::*;
use repulse_core::dataset::{Dataset, DistanceMetric};
use repulse_core::mingling::{anneal_schedule, compute_knn, compute_mingling};
use repulse_core::sampling::{Method, Radius, SamplerConfig};
use std::collections::HashSet;

fn arb_dataset(max_n: usize) -> impl Strategy<Value = Dataset> {
    (4..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(-10.0f64..10.0, n * 2),
            proptest::collection::vec(0u32..3, n),
        )
            .prop_map(move |(features, labels)| Dataset::new(features, 2, Some(labels)).unwrap())
    })
}

fn arb_method() -> impl Strategy<Value = Method> {
    prop_oneof![
        Just(Method::Random),
        Just(Method::VanillaPds),
        Just(Method::EasyPds),
        Just(Method::DensePds),
        Just(Method::AnnealPds),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn batches_have_distinct_indices_and_respect_k(
        ds in arb_dataset(40),
        method in arb_method(),
        k_frac in 0.1f64..1.0,
        radius in 0.0f64..3.0,
        seed in any::<u64>(),
    ) {
        let k = ((ds.n() as f64 * k_frac) as usize).clamp(1, ds.n());
        let sampler = SamplerConfig::new(method, k)
            .with_radius(Radius::Fixed(radius))
            .with_knn_k(3)
            .resolve(&ds, DistanceMetric::Euclidean, seed)
            .unwrap();
        let batch = match sampler.draw(1, seed) {
            Ok(b) => b,
            // Dense/Anneal may be exhausted from the start on degenerate pi
            Err(repulse_core::Error::SamplerExhausted(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error: {e}"))),
        };
        prop_assert!(batch.accepted() <= k);
        let set: HashSet<_> = batch.indices().iter().copied().collect();
        prop_assert_eq!(set.len(), batch.accepted(), "duplicate indices");
        prop_assert!(batch.indices().iter().all(|&i| i < ds.n()));
    }

    #[test]
    fn identical_seeds_give_identical_batches(
        ds in arb_dataset(30),
        method in arb_method(),
        seed in any::<u64>(),
    ) {
        let k = (ds.n() / 2).max(1);
        let sampler = SamplerConfig::new(method, k)
            .with_radius(Radius::Fixed(1.0))
            .with_knn_k(2)
            .resolve(&ds, DistanceMetric::Euclidean, 7)
            .unwrap();
        let a = sampler.draw(3, seed);
        let b = sampler.draw(3, seed);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "one draw failed, the other succeeded"),
        }
    }

    #[test]
    fn vanilla_min_distance_holds_on_random_datasets(
        ds in arb_dataset(50),
        radius in 0.1f64..4.0,
        seed in any::<u64>(),
    ) {
        let metric = DistanceMetric::Euclidean;
        let k = (ds.n() / 3).max(2).min(ds.n());
        let sampler = SamplerConfig::new(Method::VanillaPds, k)
            .with_radius(Radius::Fixed(radius))
            .resolve(&ds, metric, 0)
            .unwrap();
        let batch = sampler.draw(1, seed).unwrap();
        let idx = batch.indices();
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                prop_assert!(metric.distance(ds.row(idx[a]), ds.row(idx[b])) >= radius);
            }
        }
    }

    #[test]
    fn accepted_size_is_monotone_in_max_trials(
        ds in arb_dataset(40),
        radius in 0.5f64..4.0,
        seed in any::<u64>(),
        small_cap in 1usize..20,
        extra in 1usize..200,
    ) {
        let metric = DistanceMetric::Euclidean;
        let k = (ds.n() / 2).max(2).min(ds.n());
        let small = SamplerConfig::new(Method::VanillaPds, k)
            .with_radius(Radius::Fixed(radius))
            .with_max_trials(small_cap)
            .resolve(&ds, metric, 0)
            .unwrap()
            .draw(1, seed)
            .unwrap();
        let large = SamplerConfig::new(Method::VanillaPds, k)
            .with_radius(Radius::Fixed(radius))
            .with_max_trials(small_cap + extra)
            .resolve(&ds, metric, 0)
            .unwrap()
            .draw(1, seed)
            .unwrap();
        prop_assert!(large.accepted() >= small.accepted());
        // the longer run extends, never restarts, the shorter one
        prop_assert_eq!(&large.indices()[..small.accepted()], small.indices());
    }

    #[test]
    fn mingling_values_are_multiples_of_one_over_k(
        ds in arb_dataset(30),
        k in 1usize..4,
    ) {
        prop_assume!(ds.n() > k);
        let knn = compute_knn(&ds, DistanceMetric::Euclidean, k).unwrap();
        let table = compute_mingling(&knn, ds.labels().unwrap()).unwrap();
        for i in 0..ds.n() {
            let v = table.value(i);
            prop_assert!((0.0..=1.0).contains(&v));
            let scaled = v * k as f64;
            prop_assert!((scaled - scaled.round()).abs() < 1e-12);
        }
        let total: f64 = table.histogram().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mingling_is_invariant_under_label_bijection(
        ds in arb_dataset(30),
        k in 1usize..4,
    ) {
        prop_assume!(ds.n() > k);
        let knn = compute_knn(&ds, DistanceMetric::Euclidean, k).unwrap();
        let labels = ds.labels().unwrap();
        let before = compute_mingling(&knn, labels).unwrap();
        // bijection on {0, 1, 2}: x -> (x + 1) mod 3
        let permuted: Vec<u32> = labels.iter().map(|&l| (l + 1) % 3).collect();
        let after = compute_mingling(&knn, &permuted).unwrap();
        for i in 0..ds.n() {
            prop_assert_eq!(before.value(i), after.value(i));
        }
    }

    #[test]
    fn anneal_schedule_normalizes_and_keeps_zeros(
        weights in proptest::collection::vec(0.0f64..1.0, 2..8),
        n in 1u64..1_000_000_000,
    ) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-6);
        let h: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let pi = anneal_schedule(&h, n, 0.01).unwrap();
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (p, orig) in pi.iter().zip(&h) {
            prop_assert!(*p >= 0.0);
            prop_assert_eq!(*orig == 0.0, *p == 0.0, "zero pattern changed");
        }
    }
}

/// The schedule's top-level mass decays in n whenever level 0 holds the
/// strict maximum of h (checked over a grid since monotonicity in n is the
/// spec-level property, not per-draw randomness).
#[test]
fn anneal_top_level_mass_is_non_increasing() {
    let histograms = [
        vec![0.5, 0.3, 0.2],
        vec![0.9017, 0.0474, 0.0212, 0.013, 0.0096, 0.0071],
        vec![0.4, 0.35, 0.25],
        vec![0.6, 0.0, 0.4],
    ];
    for h in &histograms {
        let mut prev = f64::INFINITY;
        for exp in 0..=9u32 {
            let n = 10u64.pow(exp);
            let pi = anneal_schedule(h, n, 0.01).unwrap();
            assert!(
                pi[0] <= prev + 1e-15,
                "pi_n[0] increased at n = {n} for h = {h:?}"
            );
            prev = pi[0];
        }
    }
}
