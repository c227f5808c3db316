//! Smallest degree of an even trigonometric polynomial that tracks
//! `e^{-i t sin^2 theta}` on `|theta| <= theta_M` while staying bounded by one
//! on the whole circle.
//!
//! For each candidate degree `K` a second-order cone program minimizes the
//! window error `max |P - f|` subject to `|P| <= 1`, over coefficients
//! `P(theta) = sum_k a_k cos(k theta)` with complex `a_k`. Constraints start on
//! a coarse grid; the worst violations on the full grid are added until none
//! remain.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SecondOrderConeT, SolverStatus, SupportedConeT};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Points in each of the two full constraint grids.
pub const PROBE_GRID: usize = 65536;
const SEED_POINTS: usize = 256;
const MAX_ROUNDS: usize = 40;
const MAX_DEGREE: usize = 4096;
/// Relative gap between the subset optimum and the full-grid error at which
/// the cutting-plane loop stops.
const GAP_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeResult {
    pub t: f64,
    pub eps: f64,
    pub theta_m: f64,
    pub k_star: usize,
    /// `sqrt(2t) / pi`.
    pub lower_bound: f64,
    /// Whether `1 >= sqrt(eps) >= t Delta >= 8 eps` with `Delta = sin^2 theta_M`.
    pub in_regime: bool,
    /// `(K, certified window error)` for every degree solved.
    pub trace: Vec<(usize, f64)>,
}

impl ProbeResult {
    pub fn meets_lower_bound(&self) -> bool {
        self.k_star as f64 >= self.lower_bound
    }
}

fn target(t: f64, theta: f64) -> Complex64 {
    let s = theta.sin();
    Complex64::from_polar(1.0, -t * s * s)
}

/// Window points on `[0, theta_M]` and circle points on `[0, pi]`; both
/// functions are even, so half-ranges suffice.
struct Grids {
    window: Vec<f64>,
    circle: Vec<f64>,
}

impl Grids {
    fn new(theta_m: f64, n: usize) -> Self {
        let lin = |hi: f64| (0..n).map(|j| hi * j as f64 / (n - 1) as f64).collect::<Vec<_>>();
        Self { window: lin(theta_m), circle: lin(PI) }
    }
}

fn eval(coeffs: &[Complex64], theta: f64) -> Complex64 {
    coeffs.iter().enumerate().map(|(k, a)| a * (k as f64 * theta).cos()).sum()
}

/// Bounds on the minimal window error at one degree.
#[derive(Debug, Clone)]
pub struct WindowFit {
    /// Optimum over the constraint subset: no bounded polynomial does better.
    pub lower: f64,
    /// Full-grid error of the returned polynomial, rescaled so `|P| <= 1` on
    /// the full circle grid.
    pub upper: f64,
    pub coeffs: Vec<Complex64>,
}

/// Local maxima of `vals` above `limit`.
fn peaks(vals: &[f64], limit: f64) -> Vec<usize> {
    let n = vals.len();
    (0..n)
        .filter(|&i| {
            vals[i] > limit && (i == 0 || vals[i] >= vals[i - 1]) && (i + 1 == n || vals[i] >= vals[i + 1])
        })
        .collect()
}

/// Minimal window error at degree `k` over polynomials bounded by one.
pub fn min_window_error(t: f64, theta_m: f64, k: usize) -> Result<WindowFit> {
    let full = Grids::new(theta_m, PROBE_GRID);
    let seed = Grids::new(theta_m, SEED_POINTS.max(4 * (k + 1)));
    let mut window = seed.window;
    let mut circle = seed.circle;
    let mut last = None;
    for _ in 0..MAX_ROUNDS {
        let (lower, coeffs) = solve_socp(t, k, &window, &circle)?;
        let cabs: Vec<f64> = full.circle.par_iter().map(|&th| eval(&coeffs, th).norm()).collect();
        let top = cabs.iter().fold(1.0f64, |m, &v| m.max(v));
        let scaled: Vec<Complex64> = coeffs.iter().map(|a| a / top).collect();
        let werr: Vec<f64> = full.window.par_iter().map(|&th| (eval(&scaled, th) - target(t, th)).norm()).collect();
        let upper = werr.iter().fold(0.0f64, |m, &v| m.max(v));
        let fit = WindowFit { lower, upper, coeffs: scaled };
        if upper - lower <= GAP_TOL * lower.max(1e-6) {
            return Ok(fit);
        }
        let before = window.len() + circle.len();
        window.extend(peaks(&werr, lower).into_iter().map(|i| full.window[i]));
        circle.extend(peaks(&cabs, 1.0).into_iter().map(|i| full.circle[i]));
        last = Some(fit);
        if window.len() + circle.len() == before {
            break;
        }
    }
    last.ok_or_else(|| Error::SolverFailure(format!("no solve at degree {k}")))
}

/// Variables `[Re a_0..a_k, Im a_0..a_k, s]`, minimize `s`.
fn solve_socp(t: f64, k: usize, window: &[f64], circle: &[f64]) -> Result<(f64, Vec<Complex64>)> {
    let nb = k + 1;
    let n = 2 * nb + 1;
    let rows = 3 * (window.len() + circle.len());
    // column-major triplets
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut b = vec![0.0; rows];
    let mut row = 0;
    for (is_window, pts) in [(true, window), (false, circle)] {
        for &th in pts {
            // b - A x = (w0, Re P - Re f, Im P - Im f) in the cone
            if is_window {
                cols[2 * nb].push((row, -1.0));
                let f = target(t, th);
                b[row + 1] = -f.re;
                b[row + 2] = -f.im;
            } else {
                b[row] = 1.0;
            }
            for j in 0..nb {
                let c = (j as f64 * th).cos();
                cols[j].push((row + 1, -c));
                cols[nb + j].push((row + 2, -c));
            }
            row += 3;
        }
    }
    let mut colptr = vec![0];
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    for col in &mut cols {
        col.sort_by_key(|e| e.0);
        for &(r, v) in col.iter() {
            rowval.push(r);
            nzval.push(v);
        }
        colptr.push(rowval.len());
    }
    let a = CscMatrix::new(rows, n, colptr, rowval, nzval);
    let p = CscMatrix::<f64>::zeros((n, n));
    let mut q = vec![0.0; n];
    q[2 * nb] = 1.0;
    let cones: Vec<SupportedConeT<f64>> = (0..rows / 3).map(|_| SecondOrderConeT(3)).collect();
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(500)
        .tol_gap_abs(1e-11)
        .tol_gap_rel(1e-11)
        .tol_feas(1e-11)
        .build()
        .map_err(|e| Error::SolverFailure(format!("{e:?}")))?;
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings).map_err(|e| Error::SolverFailure(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            let x = &solver.solution.x;
            let coeffs = (0..nb).map(|j| Complex64::new(x[j], x[nb + j])).collect();
            Ok((x[2 * nb], coeffs))
        }
        s => Err(Error::SolverFailure(format!("degree {k}: {s:?}"))),
    }
}

/// Smallest `K` with minimal window error at most `eps`, by doubling then
/// bisection; the window error is nonincreasing in `K`.
pub fn min_trig_degree_probe(t: f64, eps: f64, theta_m: f64) -> Result<ProbeResult> {
    if !(t > 0.0 && eps > 0.0 && eps < 1.0 && theta_m > 0.0 && theta_m <= PI / 2.0) {
        return Err(Error::DomainError(format!("probe needs t > 0, eps in (0, 1), theta_M in (0, pi/2]; got {t}, {eps}, {theta_m}")));
    }
    let delta = theta_m.sin().powi(2);
    let in_regime = 1.0 >= eps.sqrt() && eps.sqrt() >= t * delta && t * delta >= 8.0 * eps;
    let mut trace = Vec::new();
    // decided by the full-grid bound when it suffices, else by the subset
    // optimum; a gap straddling eps is reported rather than guessed
    let ok = |k: usize, trace: &mut Vec<(usize, f64)>| -> Result<bool> {
        let fit = min_window_error(t, theta_m, k)?;
        trace.push((k, fit.upper));
        if fit.upper <= eps {
            Ok(true)
        } else if fit.lower > eps {
            Ok(false)
        } else {
            Err(Error::SolverFailure(format!(
                "degree {k}: window error in [{:.6e}, {:.6e}] straddles eps",
                fit.lower, fit.upper
            )))
        }
    };
    let k_star = if ok(0, &mut trace)? {
        0
    } else {
        let mut hi = 1;
        while !ok(hi, &mut trace)? {
            hi *= 2;
            if hi > MAX_DEGREE {
                return Err(Error::SolverFailure(format!("no degree up to {MAX_DEGREE} reaches eps = {eps}")));
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ok(mid, &mut trace)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    trace.sort_by_key(|e| e.0);
    Ok(ProbeResult { t, eps, theta_m, k_star, lower_bound: (2.0 * t).sqrt() / PI, in_regime, trace })
}
