//! The variational formula for the right edge of the support of a measure with
//! non-negative free cumulants, and the moment-growth cross-check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeprob::{moments_from_cumulant_values, CumulantSpec, GrowthBound};
use crate::ldp::{theta_unchecked, PmfOnN, Tail};
use crate::precision::{HighPrecision, Scalar};

/// Mean tolerance used to decide that `p` sits at the degenerate point `m₁(p) = 1`.
const MEAN_ONE_TOLERANCE: f64 = 1e-15;

/// Largest `n` accepted by [`moment_growth_estimate`].
pub const MOMENT_GROWTH_MAX_N: usize = 200;

/// `(1/m) Σ p_n log(k_n / p_n) + Θ(m)/m` with `m = m₁(p)`.
pub fn edge_objective(p: &PmfOnN, spec: &CumulantSpec) -> Result<f64> {
    p.require_probability()?;
    let weights: Vec<f64> = match p.tail() {
        Tail::None => p.explicit_weights().to_vec(),
        Tail::Geometric { .. } => {
            let (w, rest) = p.materialize(1e-300, 1 << 20);
            if rest > 1e-18 {
                return Err(Error::Precision {
                    tail_bound: rest,
                    tolerance: 1e-18,
                });
            }
            w
        }
        Tail::Opaque { .. } => {
            return Err(Error::Domain("the objective needs the full measure, not an opaque tail".into()))
        }
    };
    let mut mean = 0.0;
    let mut excess = 0.0;
    let mut sum = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let n = i + 1;
        let k = spec.cumulant(n);
        if !(k > 0.0) {
            return Err(Error::Domain(format!("p charges n = {n} where k_n = {k} is not positive")));
        }
        mean += n as f64 * w;
        excess += (n - 1) as f64 * w;
        sum += w * (k.ln() - w.ln());
    }
    if excess <= MEAN_ONE_TOLERANCE {
        let k1 = spec.cumulant(1);
        return Ok(k1.ln());
    }
    Ok(sum / mean + theta_unchecked(1.0 + excess) / mean)
}

/// Settings for [`solve_edge_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeOptions {
    /// Initial number of cumulants for infinite support.
    pub truncation: usize,
    /// Hard limit on the number of cumulants.
    pub max_truncation: usize,
    /// Allowed relative tail mass of `Z(θ)`.
    pub tail_tolerance: f64,
    /// Required `|F′(θ*)|`.
    pub derivative_tolerance: f64,
    /// Iteration budget for each of the golden-section and refinement phases.
    pub max_iterations: usize,
    /// Number of grid points in the initial scan.
    pub scan_points: usize,
    /// Keep the scanned `(θ, F(θ))` pairs in the result.
    pub trace: bool,
}

impl Default for EdgeOptions {
    fn default() -> Self {
        Self {
            truncation: 256,
            max_truncation: 1 << 15,
            tail_tolerance: 1e-12,
            derivative_tolerance: 1e-10,
            max_iterations: 400,
            scan_points: 141,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub theta: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeDiagnostics {
    /// `F′(θ*)`.
    pub derivative: f64,
    /// Final bracket around `θ*`.
    pub bracket: (f64, f64),
    /// Upper end of the admissible tilts (`+∞` for finite support).
    pub theta_max: f64,
    /// Number of cumulants used at `θ*`.
    pub truncation: usize,
    pub iterations: usize,
    /// The maximiser sits at the end of the admissible range.
    pub boundary: bool,
    /// Only one cumulant is non-zero and `F` is constant.
    pub degenerate: bool,
}

/// Output of [`solve_edge`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeResult {
    pub log_rho: f64,
    pub rho: f64,
    pub theta_star: f64,
    pub m_star: f64,
    pub p_star: PmfOnN,
    pub objective_residual: f64,
    pub truncation_tail_bound: f64,
    pub diagnostics: EdgeDiagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
}

/// The tilted family `p_n(θ) = k_n e^{θn} / Z(θ)` evaluated at one `θ`.
#[derive(Debug, Clone, Copy)]
struct Point {
    theta: f64,
    log_z: f64,
    /// `m(θ) − 1`, kept separately to avoid cancellation near `m = 1`.
    excess: f64,
    var: f64,
    f: f64,
    g: f64,
    truncation: usize,
    tail_bound: f64,
}

impl Point {
    fn mean(&self) -> f64 {
        1.0 + self.excess
    }

    /// `F′(θ) = −(Var/m²) (log Z + log(m − 1))`.
    fn derivative(&self) -> f64 {
        if self.var == 0.0 {
            0.0
        } else {
            -(self.var / (self.mean() * self.mean())) * self.g
        }
    }
}

struct Tilt<'a> {
    spec: &'a CumulantSpec,
    opts: &'a EdgeOptions,
    log_k: Vec<f64>,
    finite: bool,
    bound: GrowthBound,
}

impl<'a> Tilt<'a> {
    fn new(spec: &'a CumulantSpec, opts: &'a EdgeOptions) -> Result<Self> {
        let finite_len = spec.support_len();
        let mut tilt = Self {
            spec,
            opts,
            log_k: Vec::new(),
            finite: finite_len.is_some(),
            bound: spec.growth_bound(),
        };
        tilt.extend(finite_len.unwrap_or(opts.truncation))?;
        if tilt.log_k.iter().all(|x| *x == f64::NEG_INFINITY) {
            return Err(Error::Precondition("all cumulants vanish; the support set L is empty".into()));
        }
        if !tilt.finite && tilt.bound.r <= 0.0 {
            return Err(Error::Precondition("growth bound radius must be positive".into()));
        }
        Ok(tilt)
    }

    fn extend(&mut self, len: usize) -> Result<()> {
        for n in self.log_k.len() + 1..=len {
            let log_k = self.spec.log_cumulant(n);
            if log_k.is_nan() {
                let k = self.spec.cumulant(n);
                return Err(Error::Precondition(format!("free cumulant k_{n} = {k} is negative")));
            }
            self.log_k.push(log_k);
        }
        Ok(())
    }

    fn theta_max(&self) -> f64 {
        if self.finite {
            f64::INFINITY
        } else {
            -self.bound.r.ln()
        }
    }

    fn support(&self) -> Vec<usize> {
        (1..=self.log_k.len())
            .filter(|&n| self.log_k[n - 1] > f64::NEG_INFINITY)
            .collect()
    }

    fn sums(&self, theta: f64, len: usize) -> (f64, f64, f64, f64) {
        let amax = self.log_k[..len]
            .iter()
            .enumerate()
            .map(|(i, lk)| lk + theta * (i + 1) as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (i, lk) in self.log_k[..len].iter().enumerate() {
            if *lk == f64::NEG_INFINITY {
                continue;
            }
            let w = (lk + theta * (i + 1) as f64 - amax).exp();
            let j = i as f64;
            s0 += w;
            s1 += j * w;
            s2 += j * j * w;
        }
        (amax, s0, s1, s2)
    }

    fn eval(&mut self, theta: f64) -> Result<Point> {
        let mut len = self.log_k.len();
        let mut tail_bound = 0.0;
        loop {
            let (amax, s0, s1, s2) = self.sums(theta, len);
            let log_z = amax + s0.ln();
            if !self.finite {
                let log_q = self.bound.r.ln() + theta;
                if log_q >= 0.0 {
                    return Err(Error::Domain(format!("tilt {theta} is beyond the radius of convergence")));
                }
                // Σ_{n>N} Γ qⁿ / Z = Γ q^{N+1} / ((1 − q) Z)
                let log_one_minus_q = (-log_q.exp()).ln_1p();
                let log_gamma = self.bound.gamma.ln();
                let log_tail = log_gamma + (len as f64 + 1.0) * log_q - log_one_minus_q - log_z;
                if log_tail > self.opts.tail_tolerance.ln() {
                    let needed = ((self.opts.tail_tolerance.ln() + log_z + log_one_minus_q - log_gamma) / log_q)
                        .ceil()
                        .max(0.0);
                    let target = (needed as usize).max(2 * len);
                    if target > self.opts.max_truncation {
                        return Err(Error::Precision {
                            tail_bound: log_tail.exp(),
                            tolerance: self.opts.tail_tolerance,
                        });
                    }
                    self.extend(target)?;
                    len = target;
                    continue;
                }
                tail_bound = log_tail.exp();
            }
            let excess = s1 / s0;
            let var = (s2 / s0 - excess * excess).max(0.0);
            let m = 1.0 + excess;
            let f = log_z / m - theta + theta_unchecked(m) / m;
            let g = log_z + excess.ln();
            return Ok(Point {
                theta,
                log_z,
                excess,
                var,
                f,
                g,
                truncation: len,
                tail_bound,
            });
        }
    }

    fn pmf(&self, point: &Point) -> Result<PmfOnN> {
        let weights = self.log_k[..point.truncation]
            .iter()
            .enumerate()
            .map(|(i, lk)| {
                if *lk == f64::NEG_INFINITY {
                    0.0
                } else {
                    (lk + point.theta * (i + 1) as f64 - point.log_z).exp()
                }
            })
            .collect();
        PmfOnN::from_weights(weights)
    }
}

/// Solves for `log ρ` with default options.
pub fn solve_edge(spec: &CumulantSpec) -> Result<EdgeResult> {
    solve_edge_with(spec, &EdgeOptions::default())
}

/// Maximises `F(θ) = log Z(θ)/m(θ) − θ + Θ(m(θ))/m(θ)` over admissible tilts.
pub fn solve_edge_with(spec: &CumulantSpec, opts: &EdgeOptions) -> Result<EdgeResult> {
    let mut tilt = Tilt::new(spec, opts)?;
    let support = tilt.support();
    if tilt.finite && support.len() == 1 {
        return degenerate(&tilt, support[0], opts);
    }
    let theta_max = tilt.theta_max();
    let mut trace = Vec::new();

    // Scan.
    let mut span = 10.0;
    let (mut best, mut grid) = scan(&mut tilt, theta_max, span, opts, &mut trace)?;
    let mut widenings = 0;
    while widenings < 12 && best_is_far_end(&grid, best, tilt.finite) {
        span *= 8.0;
        widenings += 1;
        (best, grid) = scan(&mut tilt, theta_max, span, opts, &mut trace)?;
    }
    let lo_idx = best.saturating_sub(1);
    let hi_idx = (best + 1).min(grid.len() - 1);
    let boundary_side = !tilt.finite && best == grid.len() - 1;

    // Golden section on F.
    let (mut a, mut b) = (grid[lo_idx].theta, grid[hi_idx].theta);
    let mut iterations = 0;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = tilt.eval(c)?;
    let mut fd = tilt.eval(d)?;
    while (b - a) > 1e-12 * (1.0 + a.abs().max(b.abs())) && iterations < opts.max_iterations {
        iterations += 1;
        if fc.f >= fd.f {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = tilt.eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = tilt.eval(d)?;
        }
    }
    let golden = if fc.f >= fd.f { fc } else { fd };

    // Refinement: F′ = −(Var/m²) g with g increasing, so θ* is the root of g.
    let (point, bracket, boundary, refine_iters) = refine(&mut tilt, golden, theta_max, opts, boundary_side)?;
    iterations += refine_iters;
    let derivative = point.derivative();
    if !boundary && derivative.abs() >= opts.derivative_tolerance {
        return Err(Error::Solver {
            message: format!("|F'(θ)| = {:e} did not reach {:e}", derivative.abs(), opts.derivative_tolerance),
            lo: bracket.0,
            hi: bracket.1,
        });
    }

    let p_star = tilt.pmf(&point)?;
    let objective = edge_objective(&p_star, spec)?;
    Ok(EdgeResult {
        log_rho: point.f,
        rho: point.f.exp(),
        theta_star: point.theta,
        m_star: point.mean(),
        objective_residual: (objective - point.f).abs().max(f64::EPSILON * point.f.abs()),
        p_star,
        truncation_tail_bound: point.tail_bound,
        diagnostics: EdgeDiagnostics {
            derivative,
            bracket,
            theta_max,
            truncation: point.truncation,
            iterations,
            boundary,
            degenerate: false,
        },
        trace: opts.trace.then_some(trace),
    })
}

fn degenerate(tilt: &Tilt<'_>, j: usize, opts: &EdgeOptions) -> Result<EdgeResult> {
    let log_k = tilt.log_k[j - 1];
    let m = j as f64;
    let log_rho = if j == 1 { log_k } else { log_k / m + theta_unchecked(m) / m };
    let p_star = PmfOnN::point_mass(j)?;
    let objective = edge_objective(&p_star, tilt.spec)?;
    let trace = opts.trace.then(|| {
        (-10..=10)
            .map(|i| TracePoint {
                theta: i as f64,
                objective: log_rho,
            })
            .collect()
    });
    Ok(EdgeResult {
        log_rho,
        rho: log_rho.exp(),
        theta_star: 0.0,
        m_star: m,
        objective_residual: (objective - log_rho).abs(),
        p_star,
        truncation_tail_bound: 0.0,
        diagnostics: EdgeDiagnostics {
            derivative: 0.0,
            bracket: (f64::NEG_INFINITY, f64::INFINITY),
            theta_max: f64::INFINITY,
            truncation: tilt.log_k.len(),
            iterations: 0,
            boundary: false,
            degenerate: true,
        },
        trace,
    })
}

/// Grid of tilts: `θ_max − d` for log-spaced `d ∈ [1e-6, span]`, or `±d` and 0 for finite support.
fn scan(
    tilt: &mut Tilt<'_>,
    theta_max: f64,
    span: f64,
    opts: &EdgeOptions,
    trace: &mut Vec<TracePoint>,
) -> Result<(usize, Vec<Point>)> {
    let count = opts.scan_points.max(5);
    let (lo, hi) = (1e-6f64.ln(), span.ln());
    let ds: Vec<f64> = (0..count)
        .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp())
        .collect();
    let mut thetas: Vec<f64> = if tilt.finite {
        let mut t: Vec<f64> = ds.iter().map(|d| -d).chain([0.0]).chain(ds.iter().copied()).collect();
        t.sort_by(f64::total_cmp);
        t
    } else {
        ds.iter().rev().map(|d| theta_max - d).collect()
    };
    thetas.dedup();
    let mut points = Vec::with_capacity(thetas.len());
    for theta in thetas {
        match tilt.eval(theta) {
            Ok(p) => points.push(p),
            // Too close to the radius of convergence to truncate; later points are closer still.
            Err(Error::Precision { .. }) if !tilt.finite => break,
            Err(e) => return Err(e),
        }
    }
    if points.len() < 3 {
        return Err(Error::Solver {
            message: "too few admissible tilts in the scan".into(),
            lo: theta_max - span,
            hi: theta_max,
        });
    }
    trace.clear();
    trace.extend(points.iter().map(|p| TracePoint {
        theta: p.theta,
        objective: p.f,
    }));
    // Maximum by value, ties to the smaller θ.
    let best = points
        .iter()
        .enumerate()
        .fold(0, |acc, (i, p)| if p.f > points[acc].f { i } else { acc });
    Ok((best, points))
}

fn best_is_far_end(points: &[Point], best: usize, finite: bool) -> bool {
    best == 0 || (finite && best == points.len() - 1)
}

type Refined = (Point, (f64, f64), bool, usize);

fn refine(
    tilt: &mut Tilt<'_>,
    start: Point,
    theta_max: f64,
    opts: &EdgeOptions,
    boundary_side: bool,
) -> Result<Refined> {
    if start.derivative().abs() < opts.derivative_tolerance * 1e-3 {
        return Ok((start, (start.theta, start.theta), false, 0));
    }
    let mut iterations = 0;
    // Bracket the sign change of g.
    let mut step = 1e-9 * (1.0 + start.theta.abs());
    let (mut lo, mut hi) = (start, start);
    if start.g < 0.0 {
        loop {
            iterations += 1;
            let mut next = start.theta + step;
            if next >= theta_max {
                next = start.theta + 0.5 * (theta_max - start.theta);
            }
            match tilt.eval(next) {
                Ok(p) if p.g >= 0.0 => {
                    hi = p;
                    break;
                }
                Ok(p) => lo = p,
                Err(Error::Precision { .. }) | Err(Error::Domain(_)) if boundary_side || lo.theta > start.theta => {
                    return Ok((lo, (lo.theta, theta_max), true, iterations));
                }
                Err(e) => return Err(e),
            }
            if iterations > opts.max_iterations {
                return Ok((lo, (lo.theta, theta_max), true, iterations));
            }
            step *= 4.0;
        }
    } else {
        loop {
            iterations += 1;
            let p = tilt.eval(start.theta - step)?;
            if p.g <= 0.0 {
                lo = p;
                break;
            }
            hi = p;
            if iterations > opts.max_iterations {
                return Err(Error::Solver {
                    message: "could not bracket the stationary point from above".into(),
                    lo: p.theta,
                    hi: start.theta,
                });
            }
            step *= 4.0;
        }
    }
    // Illinois regula falsi on g.
    let mut side = 0i8;
    let (mut glo, mut ghi) = (lo.g, hi.g);
    let mut best = if lo.derivative().abs() < hi.derivative().abs() { lo } else { hi };
    for _ in 0..opts.max_iterations {
        iterations += 1;
        if best.derivative().abs() < opts.derivative_tolerance * 1e-3 || hi.theta - lo.theta <= f64::EPSILON * hi.theta.abs().max(1.0) {
            break;
        }
        let mut theta = hi.theta - ghi * (hi.theta - lo.theta) / (ghi - glo);
        if !(theta > lo.theta && theta < hi.theta) {
            theta = 0.5 * (lo.theta + hi.theta);
        }
        let p = tilt.eval(theta)?;
        if p.derivative().abs() < best.derivative().abs() {
            best = p;
        }
        if p.g < 0.0 {
            lo = p;
            glo = p.g;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = p;
            ghi = p.g;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    Ok((best, (lo.theta, hi.theta), false, iterations))
}

/// Closed-form optimum for the free Poisson law of parameter `λ >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreePoissonReference {
    pub tau_star: f64,
    pub m_star: f64,
    pub theta_star: f64,
    pub log_rho: f64,
}

/// `τ* = √λ / (2(√λ + 1))`, `m* = 1/(2τ*)`, `θ* = −log(1 + √λ)`, `log ρ = 2 log(1 + √λ)`.
pub fn free_poisson_reference(lambda: f64) -> Result<FreePoissonReference> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("the reference requires a finite λ >= 1, got {lambda}")));
    }
    let s = lambda.sqrt();
    let tau_star = s / (2.0 * (s + 1.0));
    Ok(FreePoissonReference {
        tau_star,
        m_star: 1.0 / (2.0 * tau_star),
        theta_star: -s.ln_1p(),
        log_rho: 2.0 * s.ln_1p(),
    })
}

/// `Ψ_λ(τ) = τ log λ + 2τ Θ(1/(2τ))` on `(0, 1/2]`; `log ρ = 2 sup Ψ_λ`.
pub fn free_poisson_psi(lambda: f64, tau: f64) -> f64 {
    tau * lambda.ln() + 2.0 * tau * theta_unchecked(1.0 / (2.0 * tau))
}

/// One row of [`moment_growth_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub moment: f64,
    pub log_moment: f64,
    /// `(1/n) log m_n`.
    pub rate: f64,
}

/// `(n, (1/n) log m_n)` for `n = 1..=n_max` with `m_n > 0`. Falls back to high precision
/// when the moments overflow `f64`.
pub fn moment_growth_estimate(spec: &CumulantSpec, n_max: usize) -> Result<Vec<GrowthPoint>> {
    if n_max > MOMENT_GROWTH_MAX_N {
        return Err(Error::Range {
            what: "n_max",
            value: n_max as u64,
            max: MOMENT_GROWTH_MAX_N as u64,
        });
    }
    let k = spec.cumulants(n_max);
    if let Some((i, x)) = k.iter().enumerate().find(|(_, x)| **x < 0.0) {
        return Err(Error::Precondition(format!("free cumulant k_{} = {x} is negative", i + 1)));
    }
    let moments = moments_from_cumulant_values(&k, n_max);
    let logs: Vec<f64> = if moments.iter().all(|m| m.is_finite()) {
        moments.iter().map(|m| m.ln()).collect()
    } else {
        let hp = moments_from_cumulant_values(&spec.cumulants_hp(n_max), n_max);
        hp.iter()
            .map(|m| if m.is_zero() || m.to_f64() < 0.0 { f64::NEG_INFINITY } else { m.ln().to_f64() })
            .collect()
    };
    Ok((1..=n_max)
        .filter(|&n| logs[n].is_finite() && moments[n] != 0.0)
        .map(|n| GrowthPoint {
            n,
            moment: moments[n],
            log_moment: logs[n],
            rate: logs[n] / n as f64,
        })
        .collect())
}

/// Estimates `lim (1/n) log m_n` by fitting `(1/n) log m_n + (3/2) log(n)/n = a + b/n + c/n²`
/// on rows with `from <= n <= to`; returns `a`. The `n^{-3/2}` correction is the square-root
/// vanishing of the density at the edge.
pub fn extrapolate_moment_growth(points: &[GrowthPoint], from: usize, to: usize) -> Result<f64> {
    let rows: Vec<_> = points.iter().filter(|p| p.n >= from && p.n <= to).collect();
    if rows.len() < 3 {
        return Err(Error::Domain(format!("need at least three rows in [{from}, {to}]")));
    }
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for p in &rows {
        let x = 1.0 / p.n as f64;
        let basis = [1.0, x, x * x];
        let y = p.rate + 1.5 * (p.n as f64).ln() * x;
        for i in 0..3 {
            aty[i] += basis[i] * y;
            for j in 0..3 {
                ata[i][j] += basis[i] * basis[j];
            }
        }
    }
    let solution = solve3(ata, aty).ok_or_else(|| Error::Domain("singular least-squares system".into()))?;
    Ok(solution[0])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for j in col..3 {
                a[row][j] -= factor * a[col][j];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|j| a[row][j] * x[j]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// The printed implicit system for the edge of free Poisson(1) ⊞ uniform[−1,1],
/// with `lambda` the coefficient written in front of `(m−1)/(1−γ)`.
pub fn implicit_system_residual(lambda: f64, gamma: f64, m: f64) -> [f64; 2] {
    let coth = 1.0 / gamma.tanh();
    let r1 = 1.0 / (m - 1.0) - gamma / (1.0 - gamma) - coth;
    let lhs = lambda * (m - 1.0) / (1.0 - gamma) + (m - 1.0) * coth;
    let rhs = (m - 1.0) / gamma
        + (gamma * gamma + (1.0 - gamma).powi(2)) / (m * gamma * (1.0 - gamma).powi(2))
        + gamma / m * (1.0 - coth * coth);
    [r1, lhs - rhs]
}

/// A root `(γ, m)` of the implicit system and the edge `ρ = π(m−1)/(mγ)` it predicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImplicitRoot {
    pub gamma: f64,
    pub m: f64,
    pub rho: f64,
    pub residual: f64,
}

/// Damped Newton from a grid of starting points. Roots with `γ` or `m − 1` below `1e-6`
/// (the degenerate corner) or `γ` within `1e-6` of the pole at 1 are discarded.
pub fn solve_implicit_system(lambda: f64) -> Result<ImplicitRoot> {
    let admissible = |g: f64, m: f64| g > 1e-6 && m > 1.0 + 1e-6 && (g - 1.0).abs() > 1e-6 && g.is_finite() && m.is_finite();
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    let mut best: Option<ImplicitRoot> = None;
    for gi in 1..=30 {
        for mi in 1..=30 {
            let (mut g, mut m) = (0.1 * gi as f64, 1.0 + 0.15 * mi as f64);
            if !admissible(g, m) {
                continue;
            }
            for _ in 0..200 {
                let r = implicit_system_residual(lambda, g, m);
                let nr = norm(r);
                if !nr.is_finite() {
                    break;
                }
                if nr < 1e-13 {
                    break;
                }
                let h = 1e-7;
                let rg = implicit_system_residual(lambda, g + h * g, m);
                let rm = implicit_system_residual(lambda, g, m + h * (m - 1.0));
                let j = [
                    [(rg[0] - r[0]) / (h * g), (rm[0] - r[0]) / (h * (m - 1.0))],
                    [(rg[1] - r[1]) / (h * g), (rm[1] - r[1]) / (h * (m - 1.0))],
                ];
                let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
                if det == 0.0 || !det.is_finite() {
                    break;
                }
                let dg = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
                let dm = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
                let mut t = 1.0;
                let mut moved = false;
                while t > 1e-6 {
                    let (ng, nm) = (g - t * dg, m - t * dm);
                    if admissible(ng, nm) && norm(implicit_system_residual(lambda, ng, nm)) < nr {
                        g = ng;
                        m = nm;
                        moved = true;
                        break;
                    }
                    t *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            let residual = norm(implicit_system_residual(lambda, g, m));
            if admissible(g, m) && residual < 1e-10 && best.is_none_or(|b| residual < b.residual) {
                best = Some(ImplicitRoot {
                    gamma: g,
                    m,
                    rho: std::f64::consts::PI * (m - 1.0) / (m * g),
                    residual,
                });
            }
        }
    }
    best.ok_or_else(|| Error::Solver {
        message: format!("the implicit system with λ = {lambda} has no admissible root"),
        lo: 1e-6,
        hi: 3.0,
    })
}

/// Edge of free Poisson(1) ⊞ uniform[−1,1] from its R-transform: the minimum over `z ∈ (0, 1)` of
/// `K(z) = R(z) + 1/z = 1/(1−z) + coth(z)`. Independent of the tilt solver.
pub fn poisson_uniform_edge_from_r_transform() -> f64 {
    let k = |z: f64| 1.0 / (1.0 - z) + 1.0 / z.tanh();
    let (mut a, mut b) = (1e-6, 1.0 - 1e-6);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - inv_phi * (b - a);
        let d = a + inv_phi * (b - a);
        if k(c) <= k(d) {
            b = d;
        } else {
            a = c;
        }
    }
    k(0.5 * (a + b))
}

/// High-precision `log m_n` for one `n`, used to check the `f64` path.
pub fn log_moment_hp(spec: &CumulantSpec, n: usize) -> f64 {
    let m = moments_from_cumulant_values(&spec.cumulants_hp(n), n);
    let v: &HighPrecision = &m[n];
    if v.is_zero() {
        f64::NEG_INFINITY
    } else {
        v.ln().to_f64()
    }
}
