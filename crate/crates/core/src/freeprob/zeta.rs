use crate::error::{Error, Result};

// B_{2j} / (2j)! for j = 1..=7.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

const CUTOFF: usize = 12;

/// Riemann zeta function for real `s > 1`, by Euler–Maclaurin summation (absolute error below 1e-14).
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || s.is_nan() {
        return Err(Error::Domain(format!("zeta(s) diverges for s = {s} <= 1")));
    }
    if s == f64::INFINITY {
        return Ok(1.0);
    }
    let n = CUTOFF as f64;
    let head: f64 = (1..CUTOFF).map(|k| (k as f64).powf(-s)).sum();
    let mut total = head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // Rising factorial s (s+1) ... (s+2j-2) times N^{-s-2j+1}.
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
            power /= n * n;
        }
        total += coeff * rising * power;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn even_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(6.0).unwrap() - PI.powi(6) / 945.0).abs() < 1e-14);
    }

    #[test]
    fn matches_direct_summation() {
        for s in [1.5, 2.5, 3.0, 7.25] {
            let k = 2_000_000usize;
            let direct: f64 = (1..=k).rev().map(|i| (i as f64).powf(-s)).sum();
            // Integral tail plus the first Euler–Maclaurin correction.
            let kf = k as f64;
            let tail = kf.powf(1.0 - s) / (s - 1.0) - 0.5 * kf.powf(-s);
            assert!((zeta(s).unwrap() - (direct + tail)).abs() < 1e-12, "s={s}");
        }
    }

    #[test]
    fn large_arguments_tend_to_one() {
        assert!((zeta(60.0).unwrap() - 1.0).abs() < 1e-17);
        let direct: f64 = (1..=40).rev().map(|k| (k as f64).powi(-20)).sum();
        assert!((zeta(20.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn pole_is_rejected() {
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
    }
}
