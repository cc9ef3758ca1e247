use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::Serialize;

use super::pmf::PmfOnN;
use crate::error::{Error, Result};

/// Truncation settings for [`bounded_lipschitz_distance_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlOptions {
    /// Largest support point kept in the linear program.
    pub n_max: usize,
    /// Maximum combined mass allowed outside the window.
    pub tail_tolerance: f64,
}

impl Default for BlOptions {
    fn default() -> Self {
        Self {
            n_max: 512,
            tail_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlDistance {
    /// LP optimum over the window.
    pub value: f64,
    /// Upper bound on the contribution of the truncated mass.
    pub tail_bound: f64,
    /// Number of support points in the LP.
    pub window: usize,
}

/// Bounded-Lipschitz distance `sup { |∫f dμ − ∫f dν| : ‖f‖_L + ‖f‖_∞ ≤ 1 }` with `d(i, j) = |i − j|`.
pub fn bounded_lipschitz_distance(mu: &PmfOnN, nu: &PmfOnN) -> Result<f64> {
    bounded_lipschitz_distance_with(mu, nu, BlOptions::default()).map(|d| d.value)
}

pub fn bounded_lipschitz_distance_with(mu: &PmfOnN, nu: &PmfOnN, opts: BlOptions) -> Result<BlDistance> {
    let share = opts.tail_tolerance / 4.0;
    let (a, rest_a) = mu.materialize(share, opts.n_max);
    let (b, rest_b) = nu.materialize(share, opts.n_max);
    let tail_bound = rest_a + rest_b;
    if tail_bound > opts.tail_tolerance {
        return Err(Error::Precision {
            tail_bound,
            tolerance: opts.tail_tolerance,
        });
    }
    let window = a.len().max(b.len());
    let diff: Vec<f64> = (0..window)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect();
    if diff.iter().all(|d| *d == 0.0) {
        return Ok(BlDistance {
            value: 0.0,
            tail_bound,
            window,
        });
    }
    Ok(BlDistance {
        value: solve_lp(&diff)?,
        tail_bound,
        window,
    })
}

/// Maximise `Σ f_i d_i` subject to `|f_{i+1} − f_i| ≤ L`, `|f_i| ≤ M`, `L + M ≤ 1`.
/// Replacing `f` by `−f` keeps the feasible set, so the maximum is the supremum of `|Σ f_i d_i|`.
fn solve_lp(diff: &[f64]) -> Result<f64> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let f: Vec<_> = diff.iter().map(|&d| lp.add_var(d, (-1.0, 1.0))).collect();
    let lip = lp.add_var(0.0, (0.0, 1.0));
    let sup = lp.add_var(0.0, (0.0, 1.0));
    lp.add_constraint(&[(lip, 1.0), (sup, 1.0)], ComparisonOp::Le, 1.0);
    for &fi in &f {
        lp.add_constraint(&[(fi, 1.0), (sup, -1.0)], ComparisonOp::Le, 0.0);
        lp.add_constraint(&[(fi, 1.0), (sup, 1.0)], ComparisonOp::Ge, 0.0);
    }
    for w in f.windows(2) {
        lp.add_constraint(&[(w[1], 1.0), (w[0], -1.0), (lip, -1.0)], ComparisonOp::Le, 0.0);
        lp.add_constraint(&[(w[1], 1.0), (w[0], -1.0), (lip, 1.0)], ComparisonOp::Ge, 0.0);
    }
    let solution = lp.solve().map_err(|e| Error::Solver {
        message: format!("bounded-Lipschitz LP: {e}"),
        lo: 0.0,
        hi: 2.0,
    })?;
    Ok(solution.objective().max(0.0))
}
