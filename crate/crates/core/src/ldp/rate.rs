use std::f64::consts::LN_2;

use super::pmf::{xlogx, ExtReal, PmfOnN, Tail};
use crate::error::{Error, Result};

/// Absolute tolerance on mean constraints in [`rate_i1`] and [`rate_j`].
pub const MEAN_TOLERANCE: f64 = 1e-9;

const LN_4: f64 = 2.0 * LN_2;

/// Shannon entropy in nats, `0 log 0 = 0`.
pub fn entropy(p: &PmfOnN) -> Result<f64> {
    p.require_probability()?;
    p.raw_entropy()
        .map(|h| h + 0.0)
        .ok_or_else(|| Error::Domain("entropy is undefined for a tail of unknown shape".into()))
}

/// Relative entropy `H(p | Geom(1/2))`, computed as the direct sum `Σ p_n log(p_n 2^n)`.
pub fn relative_entropy_vs_geom(p: &PmfOnN) -> Result<ExtReal> {
    p.require_probability()?;
    if p.first_moment().is_none() {
        return Ok(ExtReal::PosInfinity);
    }
    let explicit: f64 = p
        .explicit_weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| if w == 0.0 { 0.0 } else { w * (w.ln() + (i + 1) as f64 * LN_2) })
        .sum();
    let tail = match p.tail() {
        Tail::Geometric { first, ratio } if first > 0.0 => {
            // Σ_j a r^j (log a + j log r + (n0 + j) log 2)
            let q = 1.0 - ratio;
            let n0 = p.explicit_len() as f64 + 1.0;
            let mass = first / q;
            let index_moment = first * ratio / (q * q);
            let log_r_term = if ratio == 0.0 { 0.0 } else { ratio.ln() * index_moment };
            first.ln() * mass + log_r_term + LN_2 * (n0 * mass + index_moment)
        }
        _ => 0.0,
    };
    Ok(ExtReal::Finite(explicit + tail))
}

/// `m₁(p) log 2 − H(p)`; equal to [`relative_entropy_vs_geom`] for probability measures with finite mean.
pub fn relative_entropy_vs_geom_identity(p: &PmfOnN) -> Result<ExtReal> {
    p.require_probability()?;
    match (p.mean(), p.raw_entropy()) {
        (Some(m), Some(h)) => Ok(ExtReal::Finite(m * LN_2 - h)),
        _ => Ok(ExtReal::PosInfinity),
    }
}

/// Maximal entropy among laws on `{1, 2, ...}` with mean `m > 1`:
/// `Θ(m) = log(m−1) − m log(1−1/m) = m log m − (m−1) log(m−1)`.
pub fn theta(m: f64) -> Result<f64> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::Domain(format!("theta requires a finite m > 1, got {m}")));
    }
    Ok(theta_unchecked(m))
}

/// `Θ` extended by continuity to `m = 1`.
pub(crate) fn theta_unchecked(m: f64) -> f64 {
    let x = m - 1.0;
    if x <= 0.0 {
        return 0.0;
    }
    m * x.ln_1p() - xlogx(x)
}

/// `log 4 − (1/m) H − (1/m) log(m−1) + log(1−1/m)`, rewritten as `log 4 − (H + Θ(m))/m`.
fn j_value(m: f64, h: f64) -> f64 {
    LN_4 - (h + theta_unchecked(m)) / m
}

/// The joint rate `J(m, μ, t)`; `+∞` off the constraint set `m₁(μ) = m = 1/(2t)`.
pub fn rate_j(m: f64, mu: &PmfOnN, t: f64) -> ExtReal {
    if !mu.is_probability() || !(t > 0.0) || !m.is_finite() || m < 1.0 {
        return ExtReal::PosInfinity;
    }
    let (Some(mean), Some(h)) = (mu.mean(), mu.raw_entropy()) else {
        return ExtReal::PosInfinity;
    };
    if (mean - m).abs() > MEAN_TOLERANCE || (m - 1.0 / (2.0 * t)).abs() > MEAN_TOLERANCE {
        return ExtReal::PosInfinity;
    }
    ExtReal::Finite(j_value(mean, h).max(0.0))
}

/// `J(m₁(μ), μ, 1/(2 m₁(μ)))`.
pub fn rate_j_marginal(mu: &PmfOnN) -> ExtReal {
    match mu.mean() {
        Some(m) if mu.is_probability() => rate_j(m, mu, 1.0 / (2.0 * m)),
        _ => ExtReal::PosInfinity,
    }
}

/// `I₁(x, p) = H(p | Geom(1/2))` when `m₁(p) = x`, else `+∞`.
pub fn rate_i1(x: f64, p: &PmfOnN) -> ExtReal {
    if !p.is_probability() {
        return ExtReal::PosInfinity;
    }
    match p.mean() {
        Some(m) if (m - x).abs() <= MEAN_TOLERANCE => {
            relative_entropy_vs_geom(p).unwrap_or(ExtReal::PosInfinity)
        }
        _ => ExtReal::PosInfinity,
    }
}
