//! Law-of-large-numbers runs: distance of `λ_n` to Geom(1/2) and the behaviour of `σ_n`, `τ_n`.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ldp::{bounded_lipschitz_distance, PmfOnN};
use crate::sampling::{empirical_stats, sample_one, Sampler};

fn ratio_str<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ratio_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Stream used for replicate `rep` at semilength `n`; independent of the other requested sizes.
pub fn lln_stream(n: usize, rep: usize) -> u64 {
    ((n as u64) << 24) | rep as u64
}

/// One replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlnRep {
    pub n: usize,
    pub rep: usize,
    pub stream: u64,
    #[serde(serialize_with = "ratio_str")]
    pub sigma: Ratio<u64>,
    #[serde(serialize_with = "ratio_str")]
    pub tau: Ratio<u64>,
    pub beta: f64,
    pub attempts: Option<u64>,
}

/// Averages over the successful replicates at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlnPoint {
    pub n: usize,
    pub reps: usize,
    pub failures: usize,
    pub mean_beta: f64,
    pub sd_beta: f64,
    pub mean_sigma: f64,
    pub mean_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlnCurve {
    pub seed: u64,
    pub sampler: Sampler,
    pub points: Vec<LlnPoint>,
    pub reps: Vec<LlnRep>,
    pub warnings: Vec<String>,
}

fn replicate(n: usize, rep: usize, seed: u64, sampler: Sampler, target: &PmfOnN) -> Result<LlnRep> {
    let stream = lln_stream(n, rep);
    let record = sample_one(n, sampler, seed, stream)?;
    let stats = empirical_stats(&record.path);
    Ok(LlnRep {
        n,
        rep,
        stream,
        sigma: stats.sigma,
        tau: stats.tau,
        beta: bounded_lipschitz_distance(&stats.lambda, target)?,
        attempts: record.attempts,
    })
}

/// Runs `reps` replicates at each `n`. Sampling-budget failures are dropped and reported
/// as warnings; other errors abort.
pub fn lln_curve(ns: &[usize], reps: usize, seed: u64, sampler: Sampler) -> Result<LlnCurve> {
    if ns.is_empty() || reps == 0 {
        return Err(Error::Domain("need at least one size and one replicate".into()));
    }
    let target = PmfOnN::geometric_half();
    let mut points = Vec::new();
    let mut all = Vec::new();
    let mut warnings = Vec::new();
    for &n in ns {
        let results: Vec<Result<LlnRep>> = (0..reps)
            .into_par_iter()
            .map(|rep| replicate(n, rep, seed, sampler, &target))
            .collect();
        let mut ok = Vec::new();
        let mut failures = 0;
        for (rep, r) in results.into_iter().enumerate() {
            match r {
                Ok(row) => ok.push(row),
                Err(Error::SamplingBudget { attempts }) => {
                    failures += 1;
                    warnings.push(format!("n={n} rep={rep}: sampling budget of {attempts} attempts exhausted"));
                }
                Err(e) => return Err(e),
            }
        }
        let count = ok.len();
        let mean = |f: &dyn Fn(&LlnRep) -> f64| {
            if count == 0 {
                f64::NAN
            } else {
                ok.iter().map(f).sum::<f64>() / count as f64
            }
        };
        let mean_beta = mean(&|r| r.beta);
        let sd_beta = if count > 1 {
            (ok.iter().map(|r| (r.beta - mean_beta).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        points.push(LlnPoint {
            n,
            reps: count,
            failures,
            mean_beta,
            sd_beta,
            mean_sigma: mean(&|r| ratio_f64(&r.sigma)),
            mean_tau: mean(&|r| ratio_f64(&r.tau)),
        });
        all.extend(ok);
    }
    Ok(LlnCurve {
        seed,
        sampler,
        points,
        reps: all,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_curve_is_reproducible() {
        let a = lln_curve(&[50, 200], 6, 9, Sampler::Cycle).unwrap();
        let b = lln_curve(&[200, 50], 6, 9, Sampler::Cycle).unwrap();
        assert_eq!(a.points[1], b.points[0]);
        assert_eq!(a.points.len(), 2);
        for r in &a.reps {
            assert_eq!(r.sigma * r.tau * Ratio::from_integer(2), Ratio::from_integer(1));
        }
    }

    #[test]
    fn budget_failures_become_warnings() {
        let curve = lln_curve(&[3], 4, 1, Sampler::Rejection).unwrap();
        assert!(curve.warnings.is_empty());
        assert_eq!(curve.points[0].reps, 4);
    }
}
