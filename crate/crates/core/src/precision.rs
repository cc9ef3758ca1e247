//! Scalar abstraction so the moment/cumulant recursions can run in `f64` or in
//! a multi-precision binary float.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

/// Number of mantissa bits used by [`HighPrecision`]; about 60 decimal digits.
pub const HIGH_PRECISION_BITS: usize = 200;

/// The default multi-precision scalar.
pub type HighPrecision = BigFloat<HIGH_PRECISION_BITS>;

/// Arithmetic needed by the coefficient recursions.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

type Big = FBig<HalfEven, 2>;

/// Binary float with `BITS` bits of mantissa.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat<const BITS: usize>(Big);

impl<const BITS: usize> BigFloat<BITS> {
    fn wrap(x: Big) -> Self {
        Self(x.with_precision(BITS).value())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::wrap(Big::from(num)) / Self::wrap(Big::from(den))
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        self.0.to_decimal().value().with_precision(digits).value().to_string()
    }

    pub fn ln(&self) -> Self {
        Self::wrap(self.0.ln())
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.0.exp())
    }

    pub fn powi(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    pub fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl<const BITS: usize> fmt::Debug for BigFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl<const BITS: usize> Add for BigFloat<BITS> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::wrap(self.0 + rhs.0)
    }
}

impl<const BITS: usize> Sub for BigFloat<BITS> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::wrap(self.0 - rhs.0)
    }
}

impl<const BITS: usize> Mul for BigFloat<BITS> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::wrap(self.0 * rhs.0)
    }
}

impl<const BITS: usize> Div for BigFloat<BITS> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        Self::wrap(self.0 / rhs.0)
    }
}

impl<const BITS: usize> Neg for BigFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl<const BITS: usize> Scalar for BigFloat<BITS> {
    fn zero() -> Self {
        Self::wrap(Big::ZERO)
    }
    fn one() -> Self {
        Self::wrap(Big::ONE)
    }
    fn from_f64(x: f64) -> Self {
        Self::wrap(Big::try_from(x).expect("finite f64"))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
}

impl<const BITS: usize> BigFloat<BITS> {
    /// Rounds to another working precision.
    pub fn convert<const OTHER: usize>(&self) -> BigFloat<OTHER> {
        BigFloat::<OTHER>::wrap(self.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        let third = HighPrecision::from_ratio(1, 3);
        let text = third.to_decimal_string(30);
        assert!(text.starts_with("0.333333333333333333333333333333"), "{text}");
        assert_eq!(HighPrecision::from_f64(2.5).to_decimal_string(10), "2.5");
    }

    #[test]
    fn third_is_accurate_beyond_f64() {
        let third = HighPrecision::from_ratio(1, 3);
        let residual = third.clone() * HighPrecision::from_f64(3.0) - HighPrecision::one();
        assert!(residual.abs().to_f64() < 1e-55);
    }

    #[test]
    fn ln_exp_round_trip() {
        let x = HighPrecision::from_ratio(7, 5);
        let back = x.ln().exp() - x;
        assert!(back.abs().to_f64() < 1e-50);
        assert!((HighPrecision::from_f64(2.0).ln().to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = HighPrecision::from_ratio(3, 2);
        assert!((x.powi(10).to_f64() - 1.5f64.powi(10)).abs() < 1e-10);
    }
}
