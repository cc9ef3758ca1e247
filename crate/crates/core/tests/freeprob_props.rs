use std::f64::consts::PI;

use noncross::freeprob::*;
use noncross::precision::{HighPrecision, Scalar};
use proptest::collection::vec;
use proptest::prelude::*;

fn max_relative_gap(a: &[f64], b: &[f64], scale: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(scale)
        .map(|((x, y), s)| if *s == 0.0 { (x - y).abs() } else { (x - y).abs() / s })
        .fold(0.0, f64::max)
}

fn generators() -> Vec<CumulantSpec> {
    vec![
        CumulantSpec::semicircle(2.0).unwrap(),
        CumulantSpec::free_poisson(1.0).unwrap(),
        CumulantSpec::free_poisson(3.0).unwrap(),
        CumulantSpec::PointMass { at: -2.0 },
        CumulantSpec::Finite { cumulants: vec![0.5, 0.25, -1.0, 4.0] },
        CumulantSpec::LevyKhintchine { alpha: 1.0, atoms: vec![(2.0, 0.5), (0.5, 4.0)] },
    ]
}

#[test]
fn brute_force_matches_recursion_on_every_generator() {
    let mut specs = generators();
    specs.push(CumulantSpec::uniform(1.0).unwrap());
    specs.push(free_convolve(&CumulantSpec::free_poisson(1.0).unwrap(), &CumulantSpec::uniform(1.0).unwrap()));
    specs.push(zeta_series_cumulants(&CumulantSpec::free_poisson(1.0).unwrap(), 2.0).unwrap());
    specs.push(dilate(&CumulantSpec::free_poisson(2.0).unwrap(), 0.5).unwrap());
    specs.push(shift_first_cumulant(&CumulantSpec::semicircle(1.0).unwrap(), 1.5).unwrap());
    for spec in &specs {
        let brute = moments_from_cumulants_bruteforce(spec, 12).unwrap();
        let fast = moments_from_cumulants_recursive(spec, 12);
        // Scale: the same sum with |k_n|, which bounds every partial sum.
        let abs = CumulantSpec::Finite { cumulants: spec.cumulants(12).iter().map(|k| k.abs()).collect() };
        let scale = moments_from_cumulants_recursive(&abs, 12);
        let gap = max_relative_gap(brute.as_slice(), fast.as_slice(), scale.as_slice());
        assert!(gap < 1e-10, "{spec:?}: {gap}");
    }
}

#[test]
fn free_poisson_two_moments_are_narayana_polynomials() {
    // m_n = Σ_k N(n, k) λ^k.
    let m = moments_from_cumulants_recursive(&CumulantSpec::free_poisson(2.0).unwrap(), 12);
    for n in 1..=12u64 {
        let expected: f64 = (1..=n)
            .map(|k| noncross::catalan::narayana(n, k).unwrap() as f64 * 2f64.powi(k as i32))
            .sum();
        assert!((m.get(n as usize).unwrap() / expected - 1.0).abs() < 1e-14);
    }
}

#[test]
fn uniform_cumulants_match_zeta_values() {
    // k_{2j} = (−1)^{j+1} 2 ζ(2j) / π^{2j}, odd cumulants vanish; k_2 = 1/3, k_4 = m_4 − 2 m_2² = −1/45.
    let u = CumulantSpec::uniform(1.0).unwrap();
    assert!((u.cumulant(2) - 1.0 / 3.0).abs() < 1e-15);
    assert!((u.cumulant(4) + 1.0 / 45.0).abs() < 1e-15);
    for j in 1..=60usize {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let s = 2.0 * j as f64;
        let head: f64 = (1..200).rev().map(|k| (k as f64).powf(-s)).sum();
        let z = head + 200f64.powf(1.0 - s) / (s - 1.0) + 0.5 * 200f64.powf(-s) + s / 12.0 * 200f64.powf(-s - 1.0);
        let expected = sign * 2.0 * z / PI.powi(2 * j as i32);
        assert!((u.cumulant(2 * j) - expected).abs() <= 1e-13 * expected.abs(), "j={j}");
        assert_eq!(u.cumulant(2 * j - 1), 0.0);
    }
}

#[test]
fn poisson_plus_uniform_cumulants_are_positive_through_40() {
    let spec = free_convolve(&CumulantSpec::free_poisson(1.0).unwrap(), &CumulantSpec::uniform(1.0).unwrap());
    for n in 1..=40 {
        assert!(spec.cumulant(n) > 0.0, "k_{n} = {}", spec.cumulant(n));
    }
    spec.validate().unwrap();
}

#[test]
fn convolution_is_commutative_and_associative_on_generators() {
    let g = generators();
    for a in &g {
        for b in &g {
            assert_eq!(free_convolve(a, b).cumulants(20), free_convolve(b, a).cumulants(20));
            for c in &g {
                let left = free_convolve(&free_convolve(a, b), c).cumulants(20);
                let right = free_convolve(a, &free_convolve(b, c)).cumulants(20);
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn semicircle_plus_semicircle_is_a_wider_semicircle() {
    let s = free_convolve(&CumulantSpec::semicircle(2.0).unwrap(), &CumulantSpec::semicircle(2.0).unwrap());
    let wide = CumulantSpec::semicircle(8f64.sqrt()).unwrap();
    for (x, y) in s.cumulants(8).iter().zip(wide.cumulants(8)) {
        assert!((x - y).abs() < 1e-15);
    }
}

#[test]
fn dilation_round_trip() {
    for spec in generators() {
        for c in [0.5, 3.0, 7.25] {
            let back = dilate(&dilate(&spec, c).unwrap(), 1.0 / c).unwrap();
            let (a, b) = (spec.cumulants(30), back.cumulants(30));
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{spec:?} c={c}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn specs_round_trip_through_json() {
    let mut specs = generators();
    specs.push(zeta_series_cumulants(&CumulantSpec::free_poisson(1.0).unwrap(), 2.0).unwrap());
    specs.push(dilate(&free_convolve(&specs[0], &specs[1]), 2.0).unwrap());
    for spec in specs {
        let back = CumulantSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }
    let parsed = CumulantSpec::from_json(r#"{"kind":"free_poisson","lambda":4.0}"#).unwrap();
    assert_eq!(parsed, CumulantSpec::FreePoisson { lambda: 4.0 });
    assert!(CumulantSpec::from_json(r#"{"kind":"free_poisson","lambda":-1.0}"#).is_err());
    assert!(CumulantSpec::from_json(r#"{"kind":"bogus"}"#).is_err());
}

#[test]
fn growth_bounds_hold() {
    let mut specs = generators();
    specs.push(CumulantSpec::uniform(2.0).unwrap());
    specs.push(zeta_series_cumulants(&CumulantSpec::free_poisson(1.0).unwrap(), 1.5).unwrap());
    for spec in specs {
        let bound = spec.growth_bound();
        for n in 1..=120 {
            let k = spec.cumulant(n).abs();
            let limit = bound.gamma * bound.r.powi(n as i32);
            assert!(k <= limit * (1.0 + 1e-12), "{spec:?} n={n}: {k} > {limit}");
        }
    }
}

proptest! {
    #[test]
    fn brute_force_matches_recursion_on_finite_specs(k in vec(-2.0f64..2.0, 1..8)) {
        let spec = CumulantSpec::Finite { cumulants: k.clone() };
        let brute = moments_from_cumulants_bruteforce(&spec, 10).unwrap();
        let fast = moments_from_cumulants_recursive(&spec, 10);
        let abs = CumulantSpec::Finite { cumulants: k.iter().map(|x| x.abs()).collect() };
        let scale = moments_from_cumulants_recursive(&abs, 10);
        prop_assert!(max_relative_gap(brute.as_slice(), fast.as_slice(), scale.as_slice()) < 1e-10);
    }

    #[test]
    fn cumulant_moment_round_trip(k in vec(-1.5f64..1.5, 12)) {
        let spec = CumulantSpec::Finite { cumulants: k.clone() };
        let m = moments_from_cumulants_recursive(&spec, 12);
        let back = cumulants_from_moments(&m, 12).unwrap().cumulants(12);
        let abs = CumulantSpec::Finite { cumulants: k.iter().map(|x| x.abs()).collect() };
        let scale = moments_from_cumulants_recursive(&abs, 12);
        for (n, (x, y)) in k.iter().zip(&back).enumerate() {
            let s = scale.get(n + 1).unwrap().max(1.0);
            prop_assert!((x - y).abs() < 1e-9 * s, "{} vs {}", x, y);
        }
    }

    #[test]
    fn cumulant_moment_round_trip_high_precision(k in vec(-1.5f64..1.5, 12)) {
        let hp: Vec<HighPrecision> = k.iter().map(|&x| HighPrecision::from_f64(x)).collect();
        let m = moments_from_cumulant_values(&hp, 12);
        let back = cumulant_values_from_moments(&m);
        for (x, y) in k.iter().zip(&back) {
            prop_assert!((x - y.to_f64()).abs() < 1e-9);
        }
    }

    #[test]
    fn shift_changes_only_the_first_cumulant(gamma in -5.0f64..5.0, lambda in 0.1f64..10.0) {
        let base = CumulantSpec::free_poisson(lambda).unwrap();
        let s = shift_first_cumulant(&base, gamma).unwrap();
        prop_assert_eq!(s.cumulant(1), lambda + gamma);
        for n in 2..30 {
            prop_assert_eq!(s.cumulant(n), lambda);
        }
    }
}
