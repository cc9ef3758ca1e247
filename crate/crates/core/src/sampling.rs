//! Uniform random Dyck paths: the conditioned geometric construction, a cycle-lemma
//! sampler, and the empirical block statistics of a sample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::catalan::{phi, DyckPath, NonCrossingPartition, Step};
use crate::error::{Error, Result};
use crate::ldp::PmfOnN;

/// Default number of attempts before the rejection sampler gives up.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// Deterministic generator for stream `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws from `P(X = m) = 2^-m`, `m >= 1`, by counting leading one bits.
pub fn sample_geometric_half<R: RngCore + ?Sized>(rng: &mut R) -> u64 {
    let mut skipped = 0u64;
    loop {
        let ones = rng.next_u64().leading_ones() as u64;
        if ones < 64 {
            return skipped + ones + 1;
        }
        skipped += 64;
    }
}

/// Record of one run of the conditioned geometric construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionedSampleTrace {
    /// Ascent lengths `X_1..X_r` of the final attempt.
    pub ascents: Vec<u64>,
    /// Descent lengths `Y_1..Y_r` of the final attempt.
    pub descents: Vec<u64>,
    pub r: usize,
    pub accepted: bool,
    pub attempts: u64,
}

/// One attempt: draw `X_1, Y_1, X_2, ...` until the total length reaches `2n`,
/// stopping early once the event `E_n` is impossible.
fn attempt<R: RngCore + ?Sized>(n: u64, rng: &mut R, xs: &mut Vec<u64>, ys: &mut Vec<u64>) -> bool {
    xs.clear();
    ys.clear();
    let (mut up, mut down) = (0u64, 0u64);
    loop {
        let x = sample_geometric_half(rng);
        up += x;
        xs.push(x);
        if up > n {
            return false;
        }
        let y = sample_geometric_half(rng);
        down += y;
        ys.push(y);
        if down > up {
            return false;
        }
        if up + down >= 2 * n {
            return up == n && down == n;
        }
    }
}

/// Single trial of the construction; `true` iff the draw lands in `E_n`.
pub fn acceptance_trial<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> bool {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    attempt(n as u64, rng, &mut xs, &mut ys)
}

/// Uniform Dyck path of semilength `n` by rejection: ascents and descents are i.i.d.
/// geometric(1/2) and the draw is kept on the event `E_n`.
pub fn sample_uniform_dyck_rejection<R: RngCore + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<(DyckPath, ConditionedSampleTrace)> {
    sample_uniform_dyck_rejection_with_budget(n, rng, DEFAULT_MAX_ATTEMPTS)
}

pub fn sample_uniform_dyck_rejection_with_budget<R: RngCore + ?Sized>(
    n: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<(DyckPath, ConditionedSampleTrace)> {
    if n == 0 {
        return Err(Error::Domain("semilength must be positive".into()));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for attempts in 1..=max_attempts {
        if attempt(n as u64, rng, &mut xs, &mut ys) {
            let to_usize = |v: &[u64]| v.iter().map(|&x| x as usize).collect::<Vec<_>>();
            let path = DyckPath::from_runs(&to_usize(&xs), &to_usize(&ys))?;
            let trace = ConditionedSampleTrace {
                r: xs.len(),
                ascents: xs,
                descents: ys,
                accepted: true,
                attempts,
            };
            return Ok((path, trace));
        }
    }
    Err(Error::SamplingBudget {
        attempts: max_attempts,
    })
}

/// Uniform Dyck path of semilength `n` via the cycle lemma: shuffle `n + 1` up and `n` down
/// steps, rotate to the unique sequence whose proper prefixes are all positive, drop its first step.
pub fn sample_uniform_dyck_cycle<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<DyckPath> {
    if n == 0 {
        return Err(Error::Domain("semilength must be positive".into()));
    }
    let mut word: Vec<Step> = std::iter::repeat(Step::Up)
        .take(n + 1)
        .chain(std::iter::repeat(Step::Down).take(n))
        .collect();
    word.shuffle(rng);
    let mut height = 0i64;
    let mut lowest = 0i64;
    let mut start = 0usize;
    for (i, s) in word.iter().enumerate().take(2 * n) {
        height += if *s == Step::Up { 1 } else { -1 };
        if height <= lowest {
            lowest = height;
            start = i + 1;
        }
    }
    word.rotate_left(start);
    debug_assert_eq!(word[0], Step::Up);
    DyckPath::from_steps(&word[1..])
}

/// Which sampler to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    Rejection,
    Cycle,
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sampler::Rejection => "rejection",
            Sampler::Cycle => "cycle",
        })
    }
}

impl FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rejection" => Ok(Sampler::Rejection),
            "cycle" => Ok(Sampler::Cycle),
            other => Err(Error::Validation(format!("unknown sampler {other:?}"))),
        }
    }
}

/// A single sampled path with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub stream: u64,
    pub path: DyckPath,
    pub attempts: Option<u64>,
}

/// Draws with the chosen sampler using stream `stream` of `seed`.
pub fn sample_one(n: usize, sampler: Sampler, seed: u64, stream: u64) -> Result<SampleRecord> {
    let mut rng = stream_rng(seed, stream);
    match sampler {
        Sampler::Cycle => Ok(SampleRecord {
            stream,
            path: sample_uniform_dyck_cycle(n, &mut rng)?,
            attempts: None,
        }),
        Sampler::Rejection => {
            let (path, trace) = sample_uniform_dyck_rejection(n, &mut rng)?;
            Ok(SampleRecord {
                stream,
                path,
                attempts: Some(trace.attempts),
            })
        }
    }
}

/// Samples on streams `first_stream..first_stream + count` in parallel; results are in stream order.
pub fn sample_batch(
    n: usize,
    sampler: Sampler,
    seed: u64,
    first_stream: u64,
    count: usize,
) -> Vec<Result<SampleRecord>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_one(n, sampler, seed, first_stream + i))
        .collect()
}

fn serialize_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact empirical block statistics of one partition of `{1..n}` with `r` blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalStats {
    pub n: usize,
    pub r: usize,
    /// Number of blocks of each size.
    pub counts: BTreeMap<usize, u64>,
    /// `σ_n = n / r`, the mean of `λ_n`.
    #[serde(serialize_with = "serialize_ratio")]
    pub sigma: Ratio<u64>,
    /// `τ_n = r / (2n)`.
    #[serde(serialize_with = "serialize_ratio")]
    pub tau: Ratio<u64>,
    /// `λ_n = (1/r) Σ_j δ_{|V_j|}` as a floating-point measure.
    #[serde(skip)]
    pub lambda: PmfOnN,
}

impl EmpiricalStats {
    fn from_sizes(n: usize, sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        for s in sizes {
            *counts.entry(s).or_insert(0u64) += 1;
        }
        let r: u64 = counts.values().sum();
        debug_assert_eq!(counts.iter().map(|(s, c)| *s as u64 * c).sum::<u64>(), n as u64);
        let lambda = PmfOnN::from_pairs(counts.iter().map(|(&s, &c)| (s, c as f64 / r as f64)))
            .expect("block sizes are positive");
        Self {
            n,
            r: r as usize,
            sigma: Ratio::new(n as u64, r),
            tau: Ratio::new(r, 2 * n as u64),
            counts,
            lambda,
        }
    }

    /// `λ_n` with exact rational weights.
    pub fn lambda_exact(&self) -> BTreeMap<usize, Ratio<u64>> {
        self.counts
            .iter()
            .map(|(&s, &c)| (s, Ratio::new(c, self.r as u64)))
            .collect()
    }
}

/// Statistics of the descents of `path`, equivalently of the blocks of `phi(path)`.
pub fn empirical_stats(path: &DyckPath) -> EmpiricalStats {
    EmpiricalStats::from_sizes(path.semilength(), path.descents())
}

pub fn empirical_stats_of_partition(partition: &NonCrossingPartition) -> EmpiricalStats {
    EmpiricalStats::from_sizes(partition.n(), partition.block_sizes())
}

/// Statistics of `path` computed through the bijection rather than the descents directly.
pub fn empirical_stats_via_phi(path: &DyckPath) -> EmpiricalStats {
    empirical_stats_of_partition(&phi(path))
}

/// Outcome of a chi-square test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn chi_square_sf(statistic: f64, dof: usize) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .sf(statistic)
}

/// Goodness of fit of `counts` to the uniform law on its cells.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquareTest> {
    if counts.len() < 2 {
        return Err(Error::Domain("chi-square needs at least two cells".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Domain("chi-square needs at least one observation".into()));
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = counts.len() - 1;
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
    })
}

/// Two-sample homogeneity test on paired cell counts.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquareTest> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Domain("two-sample chi-square needs equal-length tables of at least two cells".into()));
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Domain("both samples must be non-empty".into()));
    }
    let total = na + nb;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let pooled = (x + y) as f64;
        if pooled == 0.0 {
            continue;
        }
        cells += 1;
        let (ea, eb) = (pooled * na / total, pooled * nb / total);
        statistic += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    let dof = cells.saturating_sub(1).max(1);
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
    })
}
