//! Browser bindings: draw a uniform non-crossing partition, solve for the support edge of a
//! cumulant specification, and tabulate `(1/n) log m_n`. Every function returns a JSON string.

use noncross::catalan::phi;
use noncross::edge::{moment_growth_estimate, solve_edge, solve_edge_with, EdgeOptions, MOMENT_GROWTH_MAX_N};
use noncross::freeprob::CumulantSpec;
use noncross::sampling::{empirical_stats, sample_one, Sampler};
use serde_json::json;
use wasm_bindgen::prelude::*;

pub const MAX_SAMPLE_N: usize = 5000;
pub const MAX_REJECTION_N: usize = 400;

pub fn sample_partition_json(n: usize, seed: u32, sampler: &str) -> Result<String, String> {
    let sampler: Sampler = sampler.parse().map_err(|e: noncross::Error| e.to_string())?;
    let limit = match sampler {
        Sampler::Rejection => MAX_REJECTION_N,
        Sampler::Cycle => MAX_SAMPLE_N,
    };
    if n == 0 || n > limit {
        return Err(format!("n must be in 1..={limit} for the {sampler} sampler"));
    }
    let record = sample_one(n, sampler, seed as u64, 0).map_err(|e| e.to_string())?;
    let partition = phi(&record.path);
    let stats = empirical_stats(&record.path);
    Ok(json!({
        "n": n,
        "seed": seed,
        "sampler": sampler,
        "path": record.path.to_string(),
        "attempts": record.attempts,
        "blocks": partition.blocks(),
        "counts": stats.counts,
        "sigma": stats.sigma.to_string(),
        "tau": stats.tau.to_string(),
    })
    .to_string())
}

pub fn edge_solve_json(spec_json: &str) -> Result<String, String> {
    let spec = CumulantSpec::from_json(spec_json).map_err(|e| e.to_string())?;
    let opts = EdgeOptions {
        trace: true,
        ..EdgeOptions::default()
    };
    let r = solve_edge_with(&spec, &opts).map_err(|e| e.to_string())?;
    let (weights, _) = r.p_star.materialize(1e-6, 60);
    Ok(json!({
        "rho": r.rho,
        "log_rho": r.log_rho,
        "theta_star": r.theta_star,
        "m_star": r.m_star,
        "p_star": weights,
        "trace": r.trace,
    })
    .to_string())
}

pub fn moment_growth_json(spec_json: &str, n_max: usize) -> Result<String, String> {
    let spec = CumulantSpec::from_json(spec_json).map_err(|e| e.to_string())?;
    if n_max == 0 || n_max > MOMENT_GROWTH_MAX_N {
        return Err(format!("n_max must be in 1..={MOMENT_GROWTH_MAX_N}"));
    }
    let points = moment_growth_estimate(&spec, n_max).map_err(|e| e.to_string())?;
    let log_rho = solve_edge(&spec).ok().map(|r| r.log_rho);
    let rows: Vec<_> = points.iter().map(|p| json!({ "n": p.n, "rate": p.rate })).collect();
    Ok(json!({ "points": rows, "log_rho": log_rho }).to_string())
}

fn js(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

/// `{"path", "blocks", "counts", "sigma", "tau", ...}` for one uniform draw.
#[wasm_bindgen]
pub fn sample_partition(n: usize, seed: u32, sampler: &str) -> Result<String, JsError> {
    js(sample_partition_json(n, seed, sampler))
}

/// `{"rho", "log_rho", "theta_star", "m_star", "p_star", "trace"}`.
#[wasm_bindgen]
pub fn edge_solve(spec_json: &str) -> Result<String, JsError> {
    js(edge_solve_json(spec_json))
}

/// `{"points": [{"n", "rate"}], "log_rho"}`.
#[wasm_bindgen]
pub fn moment_growth(spec_json: &str, n_max: usize) -> Result<String, JsError> {
    js(moment_growth_json(spec_json, n_max))
}
