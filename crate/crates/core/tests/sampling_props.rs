use std::collections::HashMap;

use noncross::catalan::{catalan_number, enumerate_dyck_paths, phi};
use noncross::lln::lln_curve;
use noncross::sampling::*;
use num_rational::Ratio;
use proptest::prelude::*;
use rayon::prelude::*;

fn histogram(n: usize, sampler: Sampler, seed: u64, count: usize) -> Vec<u64> {
    let index: HashMap<_, usize> = enumerate_dyck_paths(n).unwrap().enumerate().map(|(i, p)| (p, i)).collect();
    let mut counts = vec![0u64; index.len()];
    for r in sample_batch(n, sampler, seed, 0, count) {
        counts[index[&r.unwrap().path]] += 1;
    }
    counts
}

#[test]
fn samplers_agree_in_distribution() {
    for n in 2..=6 {
        let a = histogram(n, Sampler::Rejection, 11, 30_000);
        let b = histogram(n, Sampler::Cycle, 12, 30_000);
        let test = chi_square_two_sample(&a, &b).unwrap();
        assert!(test.p_value > 1e-3, "n={n}: {test:?}");
    }
}

#[test]
fn both_samplers_are_uniform_at_five() {
    for (seed, sampler) in [(3, Sampler::Rejection), (4, Sampler::Cycle)] {
        let counts = histogram(5, sampler, seed, 100_000);
        assert_eq!(counts.len(), 42);
        assert!(chi_square_uniform(&counts).unwrap().p_value > 1e-3);
    }
}

#[test]
fn acceptance_frequency_is_catalan_over_four_to_the_n() {
    const TRIALS: u64 = 2_000_000;
    for n in 1..=12usize {
        let accepted: u64 = (0..16u64)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = stream_rng(99, ((n as u64) << 8) | chunk);
                (0..TRIALS / 16).filter(|_| acceptance_trial(n, &mut rng)).count() as u64
            })
            .sum();
        let p = catalan_number(n as u32).unwrap() as f64 / 4f64.powi(n as i32);
        let sd = (p * (1.0 - p) / TRIALS as f64).sqrt();
        let freq = accepted as f64 / TRIALS as f64;
        assert!((freq - p).abs() <= 3.0 * sd, "n={n}: {freq} vs {p}");
        assert!((freq - 0.5 * p).abs() > 3.0 * sd, "n={n}");
    }
}

#[test]
fn mean_attempts_at_twenty() {
    // 4^20 / C_20 ≈ 167.6 attempts per accepted path.
    let records: Vec<u64> = sample_batch(20, Sampler::Rejection, 5, 0, 4000)
        .into_iter()
        .map(|r| r.unwrap().attempts.unwrap())
        .collect();
    let mean = records.iter().sum::<u64>() as f64 / records.len() as f64;
    let expected = 4f64.powi(20) / catalan_number(20).unwrap() as f64;
    let sd = (expected * (expected - 1.0)).sqrt() / (records.len() as f64).sqrt();
    assert!((mean - expected).abs() < 4.0 * sd, "{mean} vs {expected}");
}

#[test]
fn lln_curve_decreases_through_ten_to_the_five() {
    let curve = lln_curve(&[100, 1_000, 10_000, 100_000], 20, 17, Sampler::Cycle).unwrap();
    let betas: Vec<f64> = curve.points.iter().map(|p| p.mean_beta).collect();
    assert!(betas.windows(2).all(|w| w[1] < w[0]), "{betas:?}");
    let last = curve.points.last().unwrap();
    assert!((last.mean_tau - 0.25).abs() < 0.003);
    assert!((last.mean_sigma - 2.0).abs() < 0.01);
    for r in &curve.reps {
        assert_eq!(r.sigma, Ratio::new(1, 2) / r.tau);
    }
}

#[test]
fn batches_are_reproducible_and_order_independent() {
    let a: Vec<_> = sample_batch(30, Sampler::Rejection, 8, 100, 50).into_iter().map(|r| r.unwrap()).collect();
    let b: Vec<_> = sample_batch(30, Sampler::Rejection, 8, 120, 10).into_iter().map(|r| r.unwrap()).collect();
    assert_eq!(&a[20..30], &b[..]);
    assert_ne!(a[0].path, a[1].path);
}

#[test]
fn small_budget_is_reported() {
    let mut rng = stream_rng(1, 1);
    assert!(matches!(
        sample_uniform_dyck_rejection_with_budget(200, &mut rng, 3),
        Err(noncross::Error::SamplingBudget { attempts: 3 })
    ));
}

proptest! {
    #[test]
    fn sigma_is_one_over_two_tau(n in 1usize..400, seed in any::<u64>(), cycle in any::<bool>()) {
        let sampler = if cycle || n > 40 { Sampler::Cycle } else { Sampler::Rejection };
        let record = sample_one(n, sampler, seed, 0).unwrap();
        let stats = empirical_stats(&record.path);
        prop_assert_eq!(stats.sigma * stats.tau * 2, Ratio::from_integer(1));
        prop_assert_eq!(stats.n, n);
        prop_assert_eq!(&stats, &empirical_stats_via_phi(&record.path));
        prop_assert_eq!(stats.r, phi(&record.path).block_count());
        prop_assert!((stats.lambda.mass() - 1.0).abs() < 1e-12);
    }
}
