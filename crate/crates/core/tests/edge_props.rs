use noncross::edge::*;
use noncross::freeprob::*;
use noncross::ldp::PmfOnN;
use noncross::sampling::stream_rng;
use rand::Rng;

fn fp(lambda: f64) -> CumulantSpec {
    CumulantSpec::free_poisson(lambda).unwrap()
}

fn solved() -> Vec<CumulantSpec> {
    vec![
        fp(1.0),
        fp(2.5),
        CumulantSpec::semicircle(2.0).unwrap(),
        free_convolve(&fp(1.0), &CumulantSpec::uniform(1.0).unwrap()),
        zeta_series_cumulants(&fp(1.0), 2.0).unwrap(),
        CumulantSpec::Finite { cumulants: vec![1.0, 0.5, 0.3, 0.1] },
        CumulantSpec::LevyKhintchine { alpha: 0.5, atoms: vec![(1.0, 1.0), (0.25, 2.0)] },
    ]
}

#[test]
fn scaling_covariance_in_log_space() {
    for base in [fp(1.0), fp(4.0), CumulantSpec::semicircle(2.0).unwrap()] {
        let log_rho = solve_edge(&base).unwrap().log_rho;
        for c in [0.5, 3.0] {
            let scaled = solve_edge(&dilate(&base, c).unwrap()).unwrap().log_rho;
            assert!((scaled - (log_rho + c.ln())).abs() < 1e-8, "{base:?} c={c}");
        }
    }
}

#[test]
fn shift_covariance() {
    let rho = solve_edge(&fp(1.0)).unwrap().rho;
    for gamma in [-1.0, 2.0] {
        let shifted = solve_edge(&shift_first_cumulant(&fp(1.0), gamma).unwrap()).unwrap().rho;
        assert!((shifted - (rho + gamma)).abs() < 1e-6, "gamma={gamma}");
    }
}

#[test]
fn raising_one_cumulant_never_lowers_the_edge() {
    let base = vec![1.0, 0.5, 0.3, 0.1, 0.05];
    let log_rho = solve_edge(&CumulantSpec::Finite { cumulants: base.clone() }).unwrap().log_rho;
    for j in 0..base.len() {
        for factor in [1.01, 1.5, 4.0] {
            let mut k = base.clone();
            k[j] *= factor;
            let raised = solve_edge(&CumulantSpec::Finite { cumulants: k }).unwrap().log_rho;
            assert!(raised >= log_rho - 1e-9, "k_{} x {factor}: {raised} < {log_rho}", j + 1);
        }
    }
    let poisson = solve_edge(&fp(1.0)).unwrap().log_rho;
    let mut k = fp(1.0).cumulants(400);
    k[6] = 1.5;
    assert!(solve_edge(&CumulantSpec::Finite { cumulants: k }).unwrap().log_rho >= poisson - 1e-9);
}

#[test]
fn maximiser_attains_the_objective_and_perturbations_do_not_exceed_it() {
    let mut rng = stream_rng(7, 0);
    for spec in solved() {
        let result = solve_edge(&spec).unwrap();
        let at_star = edge_objective(&result.p_star, &spec).unwrap();
        assert!((at_star - result.log_rho).abs() < 1e-9, "{spec:?}");
        assert!(result.objective_residual.abs() < 1e-9);

        let (weights, _) = result.p_star.materialize(1e-15, 4096);
        let support: Vec<usize> = (1..=weights.len()).filter(|&n| spec.cumulant(n) > 0.0).collect();
        for _ in 0..200 {
            let len = rng.gen_range(1..=support.len().min(12));
            let mut q = vec![0.0; weights.len()];
            for _ in 0..len {
                q[support[rng.gen_range(0..support.len())] - 1] += rng.gen_range(0.0..1.0);
            }
            let total: f64 = q.iter().sum();
            let s = 10f64.powf(rng.gen_range(-6.0..0.0));
            let mixed: Vec<f64> = weights.iter().zip(&q).map(|(w, x)| (1.0 - s) * w + s * x / total).collect();
            let norm: f64 = mixed.iter().sum();
            let p = PmfOnN::from_weights(mixed.into_iter().map(|w| w / norm).collect()).unwrap();
            let value = edge_objective(&p, &spec).unwrap();
            assert!(value <= result.log_rho + 1e-9, "{spec:?}: {value} > {}", result.log_rho);
        }
    }
}

#[test]
fn moment_growth_stays_below_the_edge() {
    for spec in [
        fp(1.0),
        fp(3.0),
        CumulantSpec::semicircle(2.0).unwrap(),
        free_convolve(&fp(1.0), &CumulantSpec::uniform(1.0).unwrap()),
        zeta_series_cumulants(&fp(1.0), 2.0).unwrap(),
    ] {
        let log_rho = solve_edge(&spec).unwrap().log_rho;
        for p in moment_growth_estimate(&spec, MOMENT_GROWTH_MAX_N).unwrap() {
            assert!(p.rate <= log_rho + 1e-6, "{spec:?} n={}: {} > {log_rho}", p.n, p.rate);
        }
    }
}

#[test]
fn zeta_weighted_poisson_edge_matches_moment_extrapolation() {
    let spec = zeta_series_cumulants(&fp(1.0), 2.0).unwrap();
    let result = solve_edge(&spec).unwrap();
    let points = moment_growth_estimate(&spec, MOMENT_GROWTH_MAX_N).unwrap();
    let a = extrapolate_moment_growth(&points, 100, MOMENT_GROWTH_MAX_N).unwrap();
    assert!((a - result.log_rho).abs() < 1e-4, "{a} vs {}", result.log_rho);
    // Every ζ(2n) exceeds 1, so the edge lies beyond that of free Poisson(1).
    assert!(result.rho > 4.0);
}

#[test]
fn free_poisson_optimum_in_closed_form() {
    for lambda in [1.0, 1.7, 4.0, 16.0] {
        let r = solve_edge(&fp(lambda)).unwrap();
        let s = lambda.sqrt();
        assert!((r.theta_star + (1.0 + s).ln()).abs() < 1e-9);
        assert!((r.m_star - (1.0 + 1.0 / s)).abs() < 1e-9);
        assert!((r.log_rho - 2.0 * (1.0 + s).ln()).abs() < 1e-9);
        // p* is geometric: p_n ∝ λ e^{θ* n}.
        let ratio = r.p_star.weight(2) / r.p_star.weight(1);
        assert!((ratio - 1.0 / (1.0 + s)).abs() < 1e-9);
    }
}

#[test]
fn trace_records_the_scan() {
    let opts = EdgeOptions { trace: true, ..EdgeOptions::default() };
    let r = solve_edge_with(&fp(1.0), &opts).unwrap();
    let trace = r.trace.unwrap();
    assert!(trace.len() >= 3 && trace.len() <= opts.scan_points);
    assert!(trace.windows(2).all(|w| w[0].theta < w[1].theta));
    assert!(trace.iter().all(|t| t.theta < r.diagnostics.theta_max));
    let best = trace.iter().map(|t| t.objective).fold(f64::NEG_INFINITY, f64::max);
    assert!(best <= r.log_rho + 1e-12);
    assert!(solve_edge(&fp(1.0)).unwrap().trace.is_none());
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(solve_edge(&CumulantSpec::Finite { cumulants: vec![1.0, -0.5] }).is_err());
    assert!(solve_edge(&CumulantSpec::uniform(1.0).unwrap()).is_err());
    assert!(solve_edge(&CumulantSpec::Zero).is_err());
}
