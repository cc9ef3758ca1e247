use serde::Serialize;

use super::spec::CumulantSpec;
use crate::catalan::{enumerate_dyck_paths_capped, phi, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::precision::{HighPrecision, Scalar};

/// Moments `m_0 = 1, m_1, ..., m_{n_max}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    /// Builds a sequence from `m_0..m_N`; `m_0` must be 1.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            Some(&m0) if m0 == 1.0 => Ok(Self { values }),
            _ => Err(Error::Validation("a moment sequence starts with m_0 = 1".into())),
        }
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Coefficients `P[s][j] = [z^j] M(z)^s`, grown one anti-diagonal `s + j = n` at a time.
struct PowerTable<S> {
    moments: Vec<S>,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> PowerTable<S> {
    fn new() -> Self {
        Self {
            moments: vec![S::one()],
            rows: Vec::new(),
        }
    }

    /// `P[s][n−s]` for `s = 1..=n`; needs `m_0..m_{n−1}`.
    fn diagonal(&mut self, n: usize) -> Vec<S> {
        let mut out = Vec::with_capacity(n);
        for s in 1..=n {
            let j = n - s;
            let value = if j == 0 {
                S::one()
            } else if s == 1 {
                self.moments[j].clone()
            } else {
                let prev = &self.rows[s - 2];
                let mut acc = S::zero();
                for i in 0..=j {
                    if self.moments[i].is_zero() || prev[j - i].is_zero() {
                        continue;
                    }
                    acc = acc + self.moments[i].clone() * prev[j - i].clone();
                }
                acc
            };
            if self.rows.len() < s {
                self.rows.push(Vec::new());
            }
            debug_assert_eq!(self.rows[s - 1].len(), j);
            self.rows[s - 1].push(value.clone());
            out.push(value);
        }
        out
    }
}

/// `m_n = Σ_{s=1}^n k_s [z^{n−s}] M(z)^s`, the coefficient form of `M = 1 + Σ k_s z^s M^s`.
/// `cumulants[s − 1]` is `k_s`; missing entries are zero.
pub fn moments_from_cumulant_values<S: Scalar>(cumulants: &[S], n_max: usize) -> Vec<S> {
    let mut table = PowerTable::<S>::new();
    for n in 1..=n_max {
        let diag = table.diagonal(n);
        let mut m = S::zero();
        for (k, p) in cumulants.iter().zip(&diag) {
            if !k.is_zero() {
                m = m + k.clone() * p.clone();
            }
        }
        table.moments.push(m);
    }
    table.moments
}

/// Inverse of [`moments_from_cumulant_values`]; `moments[0]` is `m_0 = 1`.
pub fn cumulant_values_from_moments<S: Scalar>(moments: &[S]) -> Vec<S> {
    let mut table = PowerTable::<S>::new();
    let mut cumulants: Vec<S> = Vec::with_capacity(moments.len().saturating_sub(1));
    for n in 1..moments.len() {
        let diag = table.diagonal(n);
        let mut k = moments[n].clone();
        for (ks, p) in cumulants.iter().zip(&diag) {
            if !ks.is_zero() {
                k = k - ks.clone() * p.clone();
            }
        }
        cumulants.push(k);
        table.moments.push(moments[n].clone());
    }
    cumulants
}

/// `m_n` as the sum over `NC(n)` of `Π_V k_{|V|}`, by full enumeration.
pub fn moments_from_cumulants_bruteforce(spec: &CumulantSpec, n_max: usize) -> Result<MomentSequence> {
    moments_from_cumulants_bruteforce_capped(spec, n_max, DEFAULT_ENUMERATION_CAP)
}

pub fn moments_from_cumulants_bruteforce_capped(
    spec: &CumulantSpec,
    n_max: usize,
    cap: usize,
) -> Result<MomentSequence> {
    if n_max > cap {
        return Err(Error::Range {
            what: "n_max",
            value: n_max as u64,
            max: cap as u64,
        });
    }
    let k = spec.cumulants(n_max);
    let mut values = vec![1.0];
    for n in 1..=n_max {
        let mut sum = 0.0;
        for path in enumerate_dyck_paths_capped(n, cap)? {
            let partition = phi(&path);
            sum += partition.blocks().iter().map(|b| k[b.len() - 1]).product::<f64>();
        }
        values.push(sum);
    }
    MomentSequence::new(values)
}

/// Moments by the coefficient recursion in `f64`.
pub fn moments_from_cumulants_recursive(spec: &CumulantSpec, n_max: usize) -> MomentSequence {
    let values = moments_from_cumulant_values(&spec.cumulants(n_max), n_max);
    MomentSequence { values }
}

/// Moments by the coefficient recursion in [`HighPrecision`].
pub fn moments_from_cumulants_recursive_hp(spec: &CumulantSpec, n_max: usize) -> Vec<HighPrecision> {
    moments_from_cumulant_values(&spec.cumulants_hp(n_max), n_max)
}

/// Free cumulants `k_1..k_N` of a moment sequence, returned as a finite spec.
pub fn cumulants_from_moments(moments: &MomentSequence, n_max: usize) -> Result<CumulantSpec> {
    if n_max > moments.n_max() {
        return Err(Error::Range {
            what: "n_max",
            value: n_max as u64,
            max: moments.n_max() as u64,
        });
    }
    let k = cumulant_values_from_moments(&moments.values[..=n_max]);
    Ok(CumulantSpec::Finite { cumulants: k })
}
