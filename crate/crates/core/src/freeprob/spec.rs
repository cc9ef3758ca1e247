use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::moments::cumulant_values_from_moments;
use super::zeta::zeta;
use crate::error::{Error, Result};
use crate::precision::{BigFloat, HighPrecision, Scalar};

/// Number of uniform[-1,1] cumulants obtained by moment inversion; later ones use `2ζ(n)/πⁿ`.
pub const UNIFORM_TABLE_LEN: usize = 256;

/// Working precision of the uniform inversion; the recursion loses about one decimal digit
/// every ten orders and the cumulants decay like `π^-n`.
const UNIFORM_TABLE_BITS: usize = 640;

/// Largest index probed when looking for the first non-zero cumulant.
const SUPPORT_PROBE: usize = 64;

/// `|k_n| <= gamma * r^n` for all `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthBound {
    pub gamma: f64,
    pub r: f64,
}

/// A free cumulant sequence `k_1, k_2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CumulantSpec {
    /// Semicircle law on `[-r, r]`: `k_2 = r²/4`.
    Semicircle { radius: f64 },
    /// Free Poisson law: `k_n = λ`.
    FreePoisson { lambda: f64 },
    /// `δ_c`: `k_1 = c`.
    PointMass { at: f64 },
    /// Uniform law on `[-a, a]`.
    Uniform { half_width: f64 },
    /// `cumulants[n - 1] = k_n`, zero beyond.
    Finite { cumulants: Vec<f64> },
    /// `k_1 = α`, `k_n = Σ w xⁿ⁻²` over atoms `(x, w)`.
    LevyKhintchine { alpha: f64, atoms: Vec<(f64, f64)> },
    /// Free additive convolution: cumulants add.
    Convolution { terms: Vec<CumulantSpec> },
    /// `k_n ↦ cⁿ k_n`.
    Dilation { base: Box<CumulantSpec>, factor: f64 },
    /// `k_1 ↦ k_1 + γ`.
    Shift { base: Box<CumulantSpec>, gamma: f64 },
    /// `k_n ↦ ζ(βn) k_n`.
    ZetaSeries { base: Box<CumulantSpec>, beta: f64 },
    Zero,
}

struct UniformTable {
    f64s: Vec<f64>,
    high: Vec<HighPrecision>,
}

fn uniform_table() -> &'static UniformTable {
    static TABLE: OnceLock<UniformTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        type Wide = BigFloat<UNIFORM_TABLE_BITS>;
        let moments: Vec<Wide> = (0..=UNIFORM_TABLE_LEN)
            .map(|n| {
                if n % 2 == 0 {
                    Wide::from_ratio(1, n as i64 + 1)
                } else {
                    Wide::zero()
                }
            })
            .collect();
        let k = cumulant_values_from_moments(&moments);
        UniformTable {
            f64s: k.iter().map(|x| x.to_f64()).collect(),
            high: k.iter().map(|x| x.convert()).collect(),
        }
    })
}

/// Cumulant `k_n` of uniform[-1,1] for indices past the table: `(−1)^{n/2+1} 2ζ(n)/πⁿ` for even `n`.
fn uniform_tail(n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let sign = if (n / 2) % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * zeta(n as f64).expect("n >= 2") * PI.powi(-(n as i32))
}

impl CumulantSpec {
    pub fn semicircle(radius: f64) -> Result<Self> {
        let s = CumulantSpec::Semicircle { radius };
        s.validate()?;
        Ok(s)
    }

    pub fn free_poisson(lambda: f64) -> Result<Self> {
        let s = CumulantSpec::FreePoisson { lambda };
        s.validate()?;
        Ok(s)
    }

    pub fn uniform(half_width: f64) -> Result<Self> {
        let s = CumulantSpec::Uniform { half_width };
        s.validate()?;
        Ok(s)
    }

    /// Parses and validates a JSON spec.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CumulantSpec =
            serde_json::from_str(text).map_err(|e| Error::Validation(format!("cumulant spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    /// Checks parameter domains recursively.
    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |name: &str, x: f64| {
            if x.is_finite() && x >= 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be finite and non-negative, got {x}")))
            }
        };
        match self {
            CumulantSpec::Semicircle { radius } => finite_nonneg("radius", *radius),
            CumulantSpec::FreePoisson { lambda } => finite_nonneg("lambda", *lambda),
            CumulantSpec::Uniform { half_width } => finite_nonneg("half_width", *half_width),
            CumulantSpec::PointMass { at } if !at.is_finite() => {
                Err(Error::Domain(format!("point mass location must be finite, got {at}")))
            }
            CumulantSpec::Finite { cumulants } => match cumulants.iter().find(|x| !x.is_finite()) {
                Some(x) => Err(Error::Domain(format!("cumulants must be finite, got {x}"))),
                None => Ok(()),
            },
            CumulantSpec::LevyKhintchine { alpha, atoms } => {
                if !alpha.is_finite() {
                    return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
                }
                for &(x, w) in atoms {
                    if !x.is_finite() {
                        return Err(Error::Domain(format!("atom location must be finite, got {x}")));
                    }
                    finite_nonneg("atom mass", w)?;
                }
                Ok(())
            }
            CumulantSpec::Convolution { terms } => terms.iter().try_for_each(|t| t.validate()),
            CumulantSpec::Dilation { base, factor } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return Err(Error::Domain(format!("dilation factor must be positive, got {factor}")));
                }
                base.validate()
            }
            CumulantSpec::Shift { base, gamma } => {
                if !gamma.is_finite() {
                    return Err(Error::Domain(format!("shift must be finite, got {gamma}")));
                }
                base.validate()
            }
            CumulantSpec::ZetaSeries { base, beta } => {
                base.validate()?;
                if !beta.is_finite() {
                    return Err(Error::Domain(format!("beta must be finite, got {beta}")));
                }
                if let Some(n0) = base.first_support_index() {
                    if beta * n0 as f64 <= 1.0 {
                        return Err(Error::Domain(format!(
                            "zeta(beta * {n0}) diverges for beta = {beta}"
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `k_n` for `n >= 1`; `k_0` is reported as 0.
    pub fn cumulant(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self {
            CumulantSpec::Semicircle { radius } => {
                if n == 2 {
                    radius * radius / 4.0
                } else {
                    0.0
                }
            }
            CumulantSpec::FreePoisson { lambda } => *lambda,
            CumulantSpec::PointMass { at } => {
                if n == 1 {
                    *at
                } else {
                    0.0
                }
            }
            CumulantSpec::Uniform { half_width } => {
                let u = if n <= UNIFORM_TABLE_LEN {
                    uniform_table().f64s[n - 1]
                } else {
                    uniform_tail(n)
                };
                if u == 0.0 {
                    0.0
                } else {
                    half_width.powi(n as i32) * u
                }
            }
            CumulantSpec::Finite { cumulants } => cumulants.get(n - 1).copied().unwrap_or(0.0),
            CumulantSpec::LevyKhintchine { alpha, atoms } => {
                if n == 1 {
                    *alpha
                } else {
                    atoms.iter().map(|&(x, w)| w * x.powi(n as i32 - 2)).sum()
                }
            }
            CumulantSpec::Convolution { terms } => terms.iter().map(|t| t.cumulant(n)).sum(),
            CumulantSpec::Dilation { base, factor } => {
                let k = base.cumulant(n);
                if k == 0.0 {
                    0.0
                } else {
                    factor.powi(n as i32) * k
                }
            }
            CumulantSpec::Shift { base, gamma } => {
                if n == 1 {
                    base.cumulant(1) + gamma
                } else {
                    base.cumulant(n)
                }
            }
            CumulantSpec::ZetaSeries { base, beta } => {
                let k = base.cumulant(n);
                if k == 0.0 {
                    0.0
                } else {
                    zeta(beta * n as f64).unwrap_or(f64::INFINITY) * k
                }
            }
            CumulantSpec::Zero => 0.0,
        }
    }

    /// `log k_n`: `−∞` where `k_n = 0`, NaN where `k_n < 0`. Products and sums of positive
    /// terms are combined in log space so that large dilations do not overflow.
    pub fn log_cumulant(&self, n: usize) -> f64 {
        match self {
            CumulantSpec::Dilation { base, factor } => base.log_cumulant(n) + n as f64 * factor.ln(),
            CumulantSpec::ZetaSeries { base, beta } => {
                let lk = base.log_cumulant(n);
                if lk == f64::NEG_INFINITY || lk.is_nan() {
                    lk
                } else {
                    lk + zeta(beta * n as f64).unwrap_or(f64::INFINITY).ln()
                }
            }
            CumulantSpec::Shift { base, .. } if n >= 2 => base.log_cumulant(n),
            CumulantSpec::Uniform { half_width } if n >= 1 && *half_width > 0.0 => {
                let u = Self::Uniform { half_width: 1.0 }.cumulant(n);
                u.ln() + n as f64 * half_width.ln()
            }
            CumulantSpec::Convolution { terms } => {
                let logs: Vec<f64> = terms.iter().map(|t| t.log_cumulant(n)).collect();
                if logs.iter().any(|l| l.is_nan()) {
                    return self.cumulant(n).ln();
                }
                let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if top == f64::NEG_INFINITY {
                    return top;
                }
                top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
            }
            _ => self.cumulant(n).ln(),
        }
    }

    /// `k_1..k_{n_max}`.
    pub fn cumulants(&self, n_max: usize) -> Vec<f64> {
        (1..=n_max).map(|n| self.cumulant(n)).collect()
    }

    /// `k_n` in high precision. Closed forms use the exact `f64` parameters.
    pub fn cumulant_hp(&self, n: usize) -> HighPrecision {
        if n == 0 {
            return HighPrecision::zero();
        }
        match self {
            CumulantSpec::Uniform { half_width } if n <= UNIFORM_TABLE_LEN => {
                let u = uniform_table().high[n - 1].clone();
                if u.is_zero() {
                    u
                } else {
                    HighPrecision::from_f64(*half_width).powi(n as u32) * u
                }
            }
            CumulantSpec::Semicircle { radius } if n == 2 => {
                let r = HighPrecision::from_f64(*radius);
                r.clone() * r / HighPrecision::from_f64(4.0)
            }
            CumulantSpec::LevyKhintchine { atoms, .. } if n >= 2 => atoms.iter().fold(HighPrecision::zero(), |acc, &(x, w)| {
                acc + HighPrecision::from_f64(w) * HighPrecision::from_f64(x).powi(n as u32 - 2)
            }),
            CumulantSpec::Convolution { terms } => terms
                .iter()
                .fold(HighPrecision::zero(), |acc, t| acc + t.cumulant_hp(n)),
            CumulantSpec::Dilation { base, factor } => {
                HighPrecision::from_f64(*factor).powi(n as u32) * base.cumulant_hp(n)
            }
            CumulantSpec::Shift { base, gamma } if n == 1 => base.cumulant_hp(1) + HighPrecision::from_f64(*gamma),
            CumulantSpec::Shift { base, .. } => base.cumulant_hp(n),
            CumulantSpec::ZetaSeries { base, beta } => {
                let k = base.cumulant_hp(n);
                if k.is_zero() {
                    k
                } else {
                    HighPrecision::from_f64(zeta(beta * n as f64).unwrap_or(f64::MAX)) * k
                }
            }
            _ => HighPrecision::from_f64(self.cumulant(n)),
        }
    }

    pub fn cumulants_hp(&self, n_max: usize) -> Vec<HighPrecision> {
        (1..=n_max).map(|n| self.cumulant_hp(n)).collect()
    }

    /// `Some(N)` when `k_n = 0` for every `n > N`; `None` for infinitely many non-zero cumulants.
    pub fn support_len(&self) -> Option<usize> {
        match self {
            CumulantSpec::Semicircle { radius } => Some(if *radius == 0.0 { 0 } else { 2 }),
            CumulantSpec::FreePoisson { lambda } => (*lambda == 0.0).then_some(0),
            CumulantSpec::PointMass { at } => Some(usize::from(*at != 0.0)),
            CumulantSpec::Uniform { half_width } => (*half_width == 0.0).then_some(0),
            CumulantSpec::Finite { cumulants } => {
                Some(cumulants.iter().rposition(|k| *k != 0.0).map_or(0, |i| i + 1))
            }
            CumulantSpec::LevyKhintchine { alpha, atoms } => {
                let charged: Vec<_> = atoms.iter().filter(|(_, w)| *w > 0.0).collect();
                if charged.iter().any(|(x, _)| *x != 0.0) {
                    None
                } else if !charged.is_empty() {
                    Some(2)
                } else {
                    Some(usize::from(*alpha != 0.0))
                }
            }
            CumulantSpec::Convolution { terms } => terms
                .iter()
                .try_fold(0, |acc, t| t.support_len().map(|l| acc.max(l))),
            CumulantSpec::Dilation { base, .. } | CumulantSpec::ZetaSeries { base, .. } => base.support_len(),
            CumulantSpec::Shift { base, .. } => base.support_len().map(|l| l.max(1)),
            CumulantSpec::Zero => Some(0),
        }
    }

    /// Whether `k_n ≠ 0`, i.e. `n ∈ L`.
    pub fn in_support(&self, n: usize) -> bool {
        self.cumulant(n) != 0.0
    }

    /// Smallest `n <= 64` with `k_n ≠ 0`.
    pub fn first_support_index(&self) -> Option<usize> {
        let limit = self.support_len().unwrap_or(SUPPORT_PROBE).min(SUPPORT_PROBE);
        (1..=limit).find(|&n| self.in_support(n))
    }

    /// Geometric bound used to truncate infinite cumulant sequences.
    pub fn growth_bound(&self) -> GrowthBound {
        let plain = |gamma: f64| GrowthBound { gamma, r: 1.0 };
        match self {
            CumulantSpec::Semicircle { radius } => plain(radius * radius / 4.0),
            CumulantSpec::FreePoisson { lambda } => plain(*lambda),
            CumulantSpec::PointMass { at } => plain(at.abs()),
            CumulantSpec::Uniform { half_width } => {
                if *half_width == 0.0 {
                    plain(0.0)
                } else {
                    // |k_{2j}| = 2 ζ(2j) / π^{2j} <= (π²/3) π^{-2j}.
                    GrowthBound {
                        gamma: PI * PI / 3.0,
                        r: half_width / PI,
                    }
                }
            }
            CumulantSpec::Finite { cumulants } => plain(cumulants.iter().fold(0.0, |a, k| a.max(k.abs()))),
            CumulantSpec::LevyKhintchine { alpha, atoms } => {
                let mass: f64 = atoms.iter().map(|(_, w)| w).sum();
                let r = atoms
                    .iter()
                    .filter(|(_, w)| *w > 0.0)
                    .fold(0.0f64, |a, (x, _)| a.max(x.abs()));
                if r == 0.0 {
                    plain(alpha.abs().max(mass))
                } else {
                    GrowthBound {
                        gamma: (alpha.abs() / r).max(mass / (r * r)),
                        r,
                    }
                }
            }
            CumulantSpec::Convolution { terms } => {
                let bounds: Vec<_> = terms.iter().map(|t| t.growth_bound()).collect();
                GrowthBound {
                    gamma: bounds.iter().map(|b| b.gamma).sum(),
                    r: bounds.iter().fold(0.0f64, |a, b| a.max(b.r)).max(f64::MIN_POSITIVE),
                }
            }
            CumulantSpec::Dilation { base, factor } => {
                let b = base.growth_bound();
                GrowthBound {
                    gamma: b.gamma,
                    r: b.r * factor,
                }
            }
            CumulantSpec::Shift { base, gamma } => {
                let b = base.growth_bound();
                GrowthBound {
                    gamma: b.gamma + gamma.abs() / b.r,
                    r: b.r,
                }
            }
            CumulantSpec::ZetaSeries { base, beta } => {
                let b = base.growth_bound();
                let z = base
                    .first_support_index()
                    .map_or(1.0, |n0| zeta(beta * n0 as f64).unwrap_or(f64::INFINITY));
                GrowthBound {
                    gamma: b.gamma * z,
                    r: b.r,
                }
            }
            CumulantSpec::Zero => plain(0.0),
        }
    }
}

/// `a ⊞ b`: cumulants add.
pub fn free_convolve(a: &CumulantSpec, b: &CumulantSpec) -> CumulantSpec {
    CumulantSpec::Convolution {
        terms: vec![a.clone(), b.clone()],
    }
}

/// Dilation `k_n ↦ cⁿ k_n`; the support scales by `c`.
pub fn dilate(a: &CumulantSpec, c: f64) -> Result<CumulantSpec> {
    let s = CumulantSpec::Dilation {
        base: Box::new(a.clone()),
        factor: c,
    };
    s.validate()?;
    Ok(s)
}

/// `k_1 ↦ k_1 + γ`; the support shifts by `γ`.
pub fn shift_first_cumulant(a: &CumulantSpec, gamma: f64) -> Result<CumulantSpec> {
    let s = CumulantSpec::Shift {
        base: Box::new(a.clone()),
        gamma,
    };
    s.validate()?;
    Ok(s)
}

/// Cumulants of the freely infinitely divisible law with drift `alpha` and Lévy–Khintchine
/// measure `Σ w δ_x` over `atoms = [(x, w), ...]`.
pub fn cumulants_from_levy_khintchine(alpha: f64, atoms: &[(f64, f64)]) -> Result<CumulantSpec> {
    let s = CumulantSpec::LevyKhintchine {
        alpha,
        atoms: atoms.to_vec(),
    };
    s.validate()?;
    Ok(s)
}

/// `k_n = ζ(βn) k_n(base)`.
pub fn zeta_series_cumulants(base: &CumulantSpec, beta: f64) -> Result<CumulantSpec> {
    let s = CumulantSpec::ZetaSeries {
        base: Box::new(base.clone()),
        beta,
    };
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn uniform_low_order_cumulants() {
        let u = CumulantSpec::uniform(1.0).unwrap();
        assert_eq!(u.cumulant(1), 0.0);
        assert!((u.cumulant(2) - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(u.cumulant(3), 0.0);
        assert!((u.cumulant(4) + 1.0 / 45.0).abs() < 1e-17);
        // 2^6 B_6 / 6! = 64 / (42 * 720)
        assert!((u.cumulant(6) - 64.0 / 30240.0).abs() < 1e-17);
    }

    #[test]
    fn uniform_table_agrees_with_zeta_form_to_the_end() {
        let u = CumulantSpec::uniform(1.0).unwrap();
        for n in (2..=UNIFORM_TABLE_LEN).step_by(2) {
            let (a, b) = (u.cumulant(n), uniform_tail(n));
            assert!((a - b).abs() <= 1e-14 * b.abs(), "n={n}: {a} vs {b}");
        }
        assert!(u.cumulant(UNIFORM_TABLE_LEN + 2) != 0.0);
    }

    #[test]
    fn uniform_half_width_scales() {
        let u2 = CumulantSpec::uniform(2.0).unwrap();
        assert!((u2.cumulant(2) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(CumulantSpec::Semicircle { radius: 2.0 }.cumulant(2), 1.0);
        assert_eq!(CumulantSpec::Semicircle { radius: 2.0 }.cumulant(4), 0.0);
        assert_eq!(CumulantSpec::FreePoisson { lambda: 3.0 }.cumulant(17), 3.0);
        let lk = cumulants_from_levy_khintchine(1.0, &[(1.0, 1.0)]).unwrap();
        assert!((1..20).all(|n| lk.cumulant(n) == 1.0));
        let sc = cumulants_from_levy_khintchine(0.0, &[(0.0, 1.0)]).unwrap();
        assert_eq!(sc.cumulants(4), vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(sc.support_len(), Some(2));
        let delta = cumulants_from_levy_khintchine(0.4, &[]).unwrap();
        assert_eq!(delta.cumulants(3), vec![0.4, 0.0, 0.0]);
    }

    #[test]
    fn operations() {
        let fp = CumulantSpec::FreePoisson { lambda: 1.0 };
        let sum = free_convolve(&fp, &CumulantSpec::uniform(1.0).unwrap());
        assert_eq!(sum.cumulant(1), 1.0);
        assert!((sum.cumulant(2) - 4.0 / 3.0).abs() < 1e-15);
        assert!((sum.cumulant(4) - 44.0 / 45.0).abs() < 1e-15);
        assert!(sum.cumulants(40).iter().all(|k| *k > 0.0));

        let sc = dilate(&CumulantSpec::Semicircle { radius: 2.0 }, 1.5).unwrap();
        assert!((sc.cumulant(2) - 2.25).abs() < 1e-15);
        assert!(dilate(&fp, 0.0).is_err());

        let delta = shift_first_cumulant(&CumulantSpec::Zero, 2.5).unwrap();
        assert_eq!(delta.cumulants(3), vec![2.5, 0.0, 0.0]);
        assert_eq!(delta.support_len(), Some(1));
    }

    #[test]
    fn zeta_series() {
        let sc = zeta_series_cumulants(&CumulantSpec::Semicircle { radius: 2.0 }, 0.75).unwrap();
        assert!((sc.cumulant(2) - zeta(1.5).unwrap()).abs() < 1e-15);
        assert_eq!(sc.cumulant(3), 0.0);
        let fp = zeta_series_cumulants(&CumulantSpec::FreePoisson { lambda: 2.0 }, 2.0).unwrap();
        assert!((fp.cumulant(1) - 2.0 * PI * PI / 6.0).abs() < 1e-13);
        assert!(zeta_series_cumulants(&CumulantSpec::FreePoisson { lambda: 2.0 }, 1.0).is_err());
        assert!(zeta_series_cumulants(&CumulantSpec::Semicircle { radius: 1.0 }, 0.5).is_err());
    }

    #[test]
    fn growth_bounds_hold() {
        let specs = [
            CumulantSpec::FreePoisson { lambda: 2.0 },
            CumulantSpec::uniform(1.0).unwrap(),
            free_convolve(&CumulantSpec::FreePoisson { lambda: 1.0 }, &CumulantSpec::uniform(1.0).unwrap()),
            cumulants_from_levy_khintchine(0.3, &[(0.5, 2.0), (-0.8, 1.0)]).unwrap(),
            shift_first_cumulant(&dilate(&CumulantSpec::FreePoisson { lambda: 1.0 }, 0.5).unwrap(), 3.0).unwrap(),
            zeta_series_cumulants(&CumulantSpec::FreePoisson { lambda: 1.0 }, 2.0).unwrap(),
        ];
        for s in &specs {
            let b = s.growth_bound();
            for n in 1..=300 {
                assert!(
                    s.cumulant(n).abs() <= b.gamma * b.r.powi(n as i32) * (1.0 + 1e-12),
                    "{s:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn high_precision_matches_f64() {
        let s = free_convolve(&CumulantSpec::FreePoisson { lambda: 1.0 }, &CumulantSpec::uniform(1.0).unwrap());
        for n in 1..=30 {
            assert!((s.cumulant_hp(n).to_f64() - s.cumulant(n)).abs() < 1e-15);
        }
    }

    #[test]
    fn log_cumulants_survive_overflow() {
        let big = dilate(&CumulantSpec::FreePoisson { lambda: 2.0 }, 3.0).unwrap();
        assert!((big.log_cumulant(1000) - (2f64.ln() + 1000.0 * 3f64.ln())).abs() < 1e-10);
        let small = dilate(&CumulantSpec::FreePoisson { lambda: 1.0 }, 0.5).unwrap();
        assert!((small.log_cumulant(2000) + 2000.0 * LN_2).abs() < 1e-9);
        assert!(CumulantSpec::uniform(1.0).unwrap().log_cumulant(4).is_nan());
        assert_eq!(CumulantSpec::uniform(1.0).unwrap().log_cumulant(3), f64::NEG_INFINITY);
        let mix = free_convolve(&CumulantSpec::FreePoisson { lambda: 1.0 }, &CumulantSpec::uniform(1.0).unwrap());
        for n in 1..40 {
            assert!((mix.log_cumulant(n) - mix.cumulant(n).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = zeta_series_cumulants(
            &free_convolve(&CumulantSpec::FreePoisson { lambda: 1.0 }, &CumulantSpec::Zero),
            2.0,
        )
        .unwrap();
        let text = s.to_json();
        assert_eq!(CumulantSpec::from_json(&text).unwrap(), s);
        let parsed = CumulantSpec::from_json(r#"{"kind":"free_poisson","lambda":4}"#).unwrap();
        assert_eq!(parsed, CumulantSpec::FreePoisson { lambda: 4.0 });
        assert!(CumulantSpec::from_json(r#"{"kind":"free_poisson","lambda":-1}"#).is_err());
        assert!(CumulantSpec::from_json(r#"{"kind":"nope"}"#).is_err());
    }
}
