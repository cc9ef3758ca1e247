use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Allowed deviation of the total mass from 1 for a probability measure.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A value in `R ∪ {+∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInfinity => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::PosInfinity) => Some(Ordering::Less),
            (ExtReal::PosInfinity, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::PosInfinity, ExtReal::PosInfinity) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            ExtReal::PosInfinity => s.serialize_str("+inf"),
        }
    }
}

/// Mass beyond the explicit window of a [`PmfOnN`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    None,
    /// Weights `first * ratio^j` at `n = window + 1 + j`.
    Geometric { first: f64, ratio: f64 },
    /// Mass of unknown shape; mean and entropy are undefined.
    Opaque { mass: f64 },
}

/// A finite measure on the positive integers: explicit weights plus an optional tail.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfOnN {
    /// `weights[i]` is the weight of `n = i + 1`.
    weights: Vec<f64>,
    tail: Tail,
    mass: f64,
    first_moment: Option<f64>,
    entropy: Option<f64>,
}

impl PmfOnN {
    /// Finitely supported measure; `weights[i]` is the weight at `i + 1`.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        Self::with_tail(weights, Tail::None)
    }

    pub fn with_tail(mut weights: Vec<f64>, tail: Tail) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Domain(format!("weights must be finite and non-negative, got {bad}")));
        }
        match tail {
            Tail::Geometric { first, ratio } => {
                if !(first.is_finite() && first >= 0.0 && (0.0..1.0).contains(&ratio)) {
                    return Err(Error::Domain(format!(
                        "geometric tail needs first >= 0 and 0 <= ratio < 1, got ({first}, {ratio})"
                    )));
                }
            }
            Tail::Opaque { mass } if !(mass.is_finite() && mass >= 0.0) => {
                return Err(Error::Domain(format!("tail mass must be non-negative, got {mass}")));
            }
            _ => {}
        }
        if matches!(tail, Tail::None) {
            while weights.last() == Some(&0.0) {
                weights.pop();
            }
        }
        let explicit_mass: f64 = weights.iter().sum();
        let explicit_moment: f64 = weights.iter().enumerate().map(|(i, w)| (i + 1) as f64 * w).sum();
        let explicit_entropy: f64 = weights.iter().map(|&w| xlogx(w)).sum::<f64>();
        let n0 = weights.len() as f64 + 1.0;
        let (mass, first_moment, entropy) = match tail {
            Tail::None => (explicit_mass, Some(explicit_moment), Some(-explicit_entropy)),
            Tail::Geometric { first, ratio } => {
                let q = 1.0 - ratio;
                let tail_mass = first / q;
                let tail_moment = first * (n0 / q + ratio / (q * q));
                let index_moment = first * ratio / (q * q);
                let tail_xlogx = if first == 0.0 {
                    0.0
                } else if ratio == 0.0 {
                    first * first.ln()
                } else {
                    first.ln() * tail_mass + ratio.ln() * index_moment
                };
                (
                    explicit_mass + tail_mass,
                    Some(explicit_moment + tail_moment),
                    Some(-(explicit_entropy + tail_xlogx)),
                )
            }
            Tail::Opaque { mass } => (explicit_mass + mass, None, None),
        };
        Ok(Self {
            weights,
            tail,
            mass,
            first_moment,
            entropy,
        })
    }

    /// Builds a measure from `(n, weight)` pairs; repeated `n` accumulate.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut weights = Vec::new();
        for (n, w) in pairs {
            if n == 0 {
                return Err(Error::Domain("support is the positive integers".into()));
            }
            if weights.len() < n {
                weights.resize(n, 0.0);
            }
            weights[n - 1] += w;
        }
        Self::from_weights(weights)
    }

    pub fn point_mass(n: usize) -> Result<Self> {
        Self::from_pairs([(n, 1.0)])
    }

    /// Geometric law `P(n) = q (1-q)^(n-1)` on `{1, 2, ...}`, stored analytically.
    pub fn geometric(success: f64) -> Result<Self> {
        if !(success > 0.0 && success <= 1.0) {
            return Err(Error::Domain(format!("success probability must lie in (0, 1], got {success}")));
        }
        if success == 1.0 {
            return Self::point_mass(1);
        }
        Self::with_tail(Vec::new(), Tail::Geometric {
            first: success,
            ratio: 1.0 - success,
        })
    }

    /// The geometric law of parameter 1/2, `P(n) = 2^-n`.
    pub fn geometric_half() -> Self {
        Self::geometric(0.5).expect("valid parameter")
    }

    /// The geometric law on `{1, 2, ...}` with mean `m >= 1`.
    pub fn geometric_with_mean(m: f64) -> Result<Self> {
        if !(m >= 1.0) || !m.is_finite() {
            return Err(Error::Domain(format!("mean must be finite and >= 1, got {m}")));
        }
        Self::geometric(1.0 / m)
    }

    pub fn weight(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        if let Some(&w) = self.weights.get(n - 1) {
            return w;
        }
        match self.tail {
            Tail::Geometric { first, ratio } => {
                first * ratio.powi((n - 1 - self.weights.len()) as i32)
            }
            _ => 0.0,
        }
    }

    pub fn explicit_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// First moment `Σ n p_n` (unnormalised). `None` when the tail shape is unknown.
    pub fn first_moment(&self) -> Option<f64> {
        self.first_moment
    }

    /// `Σ n p_n / Σ p_n`.
    pub fn mean(&self) -> Option<f64> {
        self.first_moment.map(|m| m / self.mass)
    }

    /// `-Σ p_n log p_n` of the weights as given (no normalisation).
    pub fn raw_entropy(&self) -> Option<f64> {
        self.entropy
    }

    pub fn is_probability(&self) -> bool {
        (self.mass - 1.0).abs() <= MASS_TOLERANCE
    }

    pub fn require_probability(&self) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::Domain(format!("expected a probability measure, mass = {}", self.mass)))
        }
    }

    /// Explicit weights extended through the geometric tail until the remaining tail mass
    /// is at most `tolerance` (or `max_len` entries). Returns the weights and the mass left out.
    pub fn materialize(&self, tolerance: f64, max_len: usize) -> (Vec<f64>, f64) {
        let mut out: Vec<f64> = self.weights.iter().copied().take(max_len).collect();
        let dropped_explicit: f64 = self.weights.iter().skip(max_len).sum();
        let remaining = match self.tail {
            Tail::None => 0.0,
            Tail::Opaque { mass } => mass,
            Tail::Geometric { first, ratio } => {
                let mut w = first;
                let mut rest = first / (1.0 - ratio);
                while rest > tolerance && out.len() < max_len {
                    out.push(w);
                    rest -= w;
                    w *= ratio;
                }
                rest.max(0.0)
            }
        };
        (out, remaining + dropped_explicit)
    }

    /// Mixture `(1-s) self + s other` of two finitely supported measures.
    pub fn mix(&self, other: &PmfOnN, s: f64) -> Result<PmfOnN> {
        if !matches!(self.tail, Tail::None) || !matches!(other.tail, Tail::None) {
            return Err(Error::Domain("mixtures are only formed for finitely supported measures".into()));
        }
        let len = self.weights.len().max(other.weights.len());
        let weights = (1..=len)
            .map(|n| (1.0 - s) * self.weight(n) + s * other.weight(n))
            .collect();
        Self::from_weights(weights)
    }

    /// Largest `n` with explicit weight, ignoring tails.
    pub fn explicit_len(&self) -> usize {
        self.weights.len()
    }
}

impl Serialize for PmfOnN {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PmfOnN", 4)?;
        st.serialize_field("weights", &self.weights)?;
        st.serialize_field("tail", &self.tail)?;
        st.serialize_field("mass", &self.mass)?;
        st.serialize_field("mean", &self.mean())?;
        st.end()
    }
}

pub(crate) fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn geometric_half_closed_forms() {
        let g = PmfOnN::geometric_half();
        assert!((g.mass() - 1.0).abs() < 1e-15);
        assert!((g.mean().unwrap() - 2.0).abs() < 1e-15);
        assert!((g.raw_entropy().unwrap() - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(g.weight(3), 0.125);
    }

    #[test]
    fn analytic_tail_matches_long_explicit_sum() {
        let g = PmfOnN::geometric_with_mean(3.5).unwrap();
        let (w, rest) = g.materialize(1e-300, 100_000);
        let explicit = PmfOnN::from_weights(w).unwrap();
        assert!(rest < 1e-290);
        assert!((explicit.mean().unwrap() - g.mean().unwrap()).abs() < 1e-11);
        assert!((explicit.raw_entropy().unwrap() - g.raw_entropy().unwrap()).abs() < 1e-11);
    }

    #[test]
    fn split_tail_is_consistent() {
        // Explicit prefix followed by a geometric tail equals the pure geometric law.
        let pure = PmfOnN::geometric(0.3).unwrap();
        let prefix: Vec<f64> = (1..=4).map(|n| pure.weight(n)).collect();
        let split = PmfOnN::with_tail(prefix, Tail::Geometric {
            first: pure.weight(5),
            ratio: 0.7,
        })
        .unwrap();
        assert!((split.mass() - 1.0).abs() < 1e-14);
        assert!((split.mean().unwrap() - pure.mean().unwrap()).abs() < 1e-13);
        assert!((split.raw_entropy().unwrap() - pure.raw_entropy().unwrap()).abs() < 1e-13);
    }

    #[test]
    fn opaque_tail_has_no_mean() {
        let p = PmfOnN::with_tail(vec![0.5], Tail::Opaque { mass: 0.5 }).unwrap();
        assert!(p.is_probability());
        assert_eq!(p.mean(), None);
        assert_eq!(p.raw_entropy(), None);
    }

    #[test]
    fn rejects_negative_weights() {
        assert!(PmfOnN::from_weights(vec![0.5, -0.1]).is_err());
        assert!(PmfOnN::from_pairs([(0, 1.0)]).is_err());
        assert!(PmfOnN::geometric(0.0).is_err());
    }

    #[test]
    fn ext_real_ordering() {
        assert!(ExtReal::Finite(1e300) < ExtReal::PosInfinity);
        assert_eq!(serde_json::to_string(&ExtReal::PosInfinity).unwrap(), "\"+inf\"");
    }
}
