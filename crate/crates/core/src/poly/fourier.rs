//! Low-weight Fourier approximation of a Taylor-series function.
//!
//! Coefficients come from an l1-reweighted least-squares fit on a
//! Chebyshev-density grid over `[-1 + delta', 1 - delta']`. The sup error and
//! the weight are then re-measured on independent grids.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chebyshev::{chebyshev_grid_on, uniform_grid, Certificate};
use super::lp::{solve_lp, LpOutcome};
use super::taylor::TaylorSeries;
use crate::error::{Error, Result};

/// Coarse certification grid size.
pub const CERT_GRID: usize = 4096;
/// Fine grid factor relative to [`CERT_GRID`].
pub const FINE_FACTOR: usize = 10;

/// `sum_{m=-M}^{M} c_m e^{i pi m y / 2}` with `y = x / scale`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigPoly {
    /// `c_m` at index `m + M`.
    pub coeffs: Vec<Complex64>,
    pub m: usize,
    /// Frequency unit in `x`: `pi / (2 scale)`.
    pub base_freq: f64,
    pub scale: f64,
    /// Largest `|m|` with a nonzero coefficient.
    pub bandwidth: usize,
    pub certificates: Option<Certificate>,
}

impl TrigPoly {
    pub fn c(&self, m: isize) -> Complex64 {
        let idx = m + self.m as isize;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[idx as usize]
    }

    /// `||c||_1`.
    pub fn weight(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).sum()
    }

    pub fn eval_y(&self, y: f64) -> Complex64 {
        let theta = FRAC_PI_2 * y;
        let mut s = self.c(0);
        let b = self.bandwidth as isize;
        for m in 1..=b {
            let e = Complex64::from_polar(1.0, m as f64 * theta);
            s += self.c(m) * e + self.c(-m) * e.conj();
        }
        s
    }

    pub fn eval_x(&self, x: f64) -> Complex64 {
        self.eval_y(x / self.scale)
    }

    /// Real form `a_0 + sum a_m cos + sum s_m sin`; returns `(a, s)` with
    /// `s[0] = 0`, valid when `c_{-m} = conj(c_m)`.
    pub fn real_cos_sin(&self) -> (Vec<f64>, Vec<f64>) {
        let b = self.bandwidth;
        let mut a = vec![0.0; b + 1];
        let mut s = vec![0.0; b + 1];
        a[0] = self.c(0).re;
        for m in 1..=b {
            let (p, q) = (self.c(m as isize), self.c(-(m as isize)));
            a[m] = (p + q).re;
            s[m] = (Complex64::new(0.0, 1.0) * (p - q)).re;
        }
        (a, s)
    }

    /// Largest deviation from the conjugate symmetry of a real function.
    pub fn imag_residual(&self) -> f64 {
        (0..=self.bandwidth as isize).map(|m| (self.c(m) - self.c(-m).conj()).norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sym {
    Even,
    Odd,
}

/// Samples of one real, even or odd part of `g` on `[0, h]`.
struct Part {
    sym: Sym,
    ys: Vec<f64>,
    vals: Vec<f64>,
}

fn first_index(sym: Sym) -> usize {
    match sym {
        Sym::Even => 0,
        Sym::Odd => 1,
    }
}

/// `cos(k theta)` or `sin(k theta)` for `k = 0..=m`.
fn harmonics(theta: f64, m: usize, out_cos: &mut [f64], out_sin: &mut [f64]) {
    let (s1, c1) = theta.sin_cos();
    out_cos[0] = 1.0;
    out_sin[0] = 0.0;
    if m == 0 {
        return;
    }
    out_cos[1] = c1;
    out_sin[1] = s1;
    for k in 2..=m {
        out_cos[k] = 2.0 * c1 * out_cos[k - 1] - out_cos[k - 2];
        out_sin[k] = 2.0 * c1 * out_sin[k - 1] - out_sin[k - 2];
    }
}

fn part_basis(sym: Sym, cos: &[f64], sin: &[f64], k: usize) -> f64 {
    match sym {
        Sym::Even => cos[k],
        Sym::Odd => sin[k],
    }
}

/// Fit result for one part: coefficients on `k = first..=m`.
struct PartFit {
    coeffs: Vec<f64>,
    sup_error: f64,
}

fn solve_weighted(part: &Part, m: usize, mu: f64, irls_rounds: usize) -> Option<PartFit> {
    let first = first_index(part.sym);
    let nb = m + 1 - first;
    let n = part.ys.len();
    let sw = (1.0 / n as f64).sqrt();
    // least squares on the sampled design matrix via Householder QR; the
    // normal equations would square its already large condition number
    let mut design = DMatrix::zeros(n + nb, nb);
    let mut cs = vec![0.0; m + 1];
    let mut sn = vec![0.0; m + 1];
    for (row, &y) in part.ys.iter().enumerate() {
        harmonics(FRAC_PI_2 * y, m, &mut cs, &mut sn);
        for i in 0..nb {
            design[(row, i)] = sw * part_basis(part.sym, &cs, &sn, i + first);
        }
    }
    let rhs = DVector::from_fn(n + nb, |i, _| if i < n { sw * part.vals[i] } else { 0.0 });
    let mut d = vec![1.0; nb];
    let mut coeffs = vec![0.0; nb];
    for _ in 0..=irls_rounds {
        let mut sys = design.clone();
        for i in 0..nb {
            sys[(n + i, i)] = (mu * d[i]).sqrt();
        }
        let qr = sys.qr();
        let mut qtb = rhs.clone();
        qr.q_tr_mul(&mut qtb);
        let r = qr.r();
        if r.diagonal().iter().any(|v| v.abs() < 1e-300) {
            return None;
        }
        let sol = r.solve_upper_triangular(&qtb.rows(0, nb).into_owned())?;
        coeffs = sol.iter().copied().collect();
        let top = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let eta = 1e-6 * top.max(1e-300);
        for i in 0..nb {
            d[i] = 1.0 / (coeffs[i].abs() + eta);
        }
    }
    let sup_error = part_error(part, &coeffs, m);
    Some(PartFit { coeffs, sup_error })
}

fn part_error(part: &Part, coeffs: &[f64], m: usize) -> f64 {
    let first = first_index(part.sym);
    part.ys
        .par_iter()
        .zip(part.vals.par_iter())
        .map_init(
            || (vec![0.0; m + 1], vec![0.0; m + 1]),
            |(cs, sn), (&y, &v)| {
                harmonics(FRAC_PI_2 * y, m, cs, sn);
                let mut s = 0.0;
                for (i, c) in coeffs.iter().enumerate() {
                    s += c * part_basis(part.sym, cs, sn, i + first);
                }
                (s - v).abs()
            },
        )
        .reduce(|| 0.0, f64::max)
}

fn sample_part<F: Fn(f64) -> f64>(sym: Sym, f: &F, h: f64, n: usize) -> Part {
    let ys: Vec<f64> = chebyshev_grid_on(-h, h, 2 * n).into_iter().filter(|&y| y >= 0.0).collect();
    let vals = ys
        .iter()
        .map(|&y| match sym {
            Sym::Even => 0.5 * (f(y) + f(-y)),
            Sym::Odd => 0.5 * (f(y) - f(-y)),
        })
        .collect();
    Part { sym, ys, vals }
}

/// Ridge least squares for every bandwidth up to `cap` from one QR: the fit on
/// the first `j` columns uses the leading `j x j` block of `R`.
struct NestedFit {
    part: Part,
    cap: usize,
    r: DMatrix<f64>,
    qtb: DVector<f64>,
}

impl NestedFit {
    fn new(part: Part, cap: usize, mu: f64) -> Option<Self> {
        let first = first_index(part.sym);
        let nb = cap + 1 - first;
        let n = part.ys.len();
        let sw = (1.0 / n as f64).sqrt();
        let mut sys = DMatrix::zeros(n + nb, nb);
        let mut cs = vec![0.0; cap + 1];
        let mut sn = vec![0.0; cap + 1];
        for (row, &y) in part.ys.iter().enumerate() {
            harmonics(FRAC_PI_2 * y, cap, &mut cs, &mut sn);
            for i in 0..nb {
                sys[(row, i)] = sw * part_basis(part.sym, &cs, &sn, i + first);
            }
        }
        for i in 0..nb {
            sys[(n + i, i)] = mu.sqrt();
        }
        let mut qtb = DVector::from_fn(n + nb, |i, _| if i < n { sw * part.vals[i] } else { 0.0 });
        let qr = sys.qr();
        qr.q_tr_mul(&mut qtb);
        let r = qr.r();
        if r.diagonal().iter().any(|v| v.abs() < 1e-300) {
            return None;
        }
        Some(Self { part, cap, r, qtb })
    }

    fn sup_error(&self, m: usize) -> f64 {
        let j = m + 1 - first_index(self.part.sym);
        let r = self.r.view((0, 0), (j, j));
        let sol = r.solve_upper_triangular(&self.qtb.rows(0, j).into_owned());
        sol.map_or(f64::INFINITY, |c| part_error(&self.part, c.as_slice(), m))
    }
}

/// Smallest bandwidth whose ridge fit meets `target`, then an l1-reweighted
/// refit at that bandwidth.
fn fit_part<F: Fn(f64) -> f64>(sym: Sym, f: &F, h: f64, target: f64, m_start: usize, m_max: usize) -> Result<Vec<f64>> {
    // ridge small enough that its bias stays well under the target
    let mu = (0.1 * target).powi(2).min(1e-9);
    let grid_for = |m: usize| (CERT_GRID.max(8 * m)) / 2 + 1;
    let first = first_index(sym);
    if m_max < first {
        return Err(Error::FitFailed { sup_error: f64::INFINITY, target });
    }
    let fits = |nested: &NestedFit, m: usize| nested.sup_error(m) <= 0.5 * target;
    // grow the cap until its full width fits, then bisect the prefixes
    let mut cap = ((1.25 * m_start as f64).ceil() as usize).max(first + 8).min(m_max);
    let nested = loop {
        let nested = NestedFit::new(sample_part(sym, f, h, grid_for(cap)), cap, mu);
        match nested {
            Some(n) if fits(&n, cap) => break n,
            other => {
                if cap >= m_max {
                    let err = other.map_or(f64::INFINITY, |n| n.sup_error(cap));
                    return Err(Error::FitFailed { sup_error: err, target });
                }
                cap = ((cap as f64 * 1.5).ceil() as usize).min(m_max);
            }
        }
    };
    // invariant: fits(hi) and (lo < first or !fits(lo))
    let mut hi = nested.cap;
    let mut lo = first as isize - 1;
    while hi as isize - lo > 1 {
        let mid = ((lo + hi as isize) / 2) as usize;
        if fits(&nested, mid) {
            hi = mid;
        } else {
            lo = mid as isize;
        }
    }
    let mut m = hi;
    loop {
        let part = sample_part(sym, f, h, grid_for(m));
        if let Some(fit) = solve_weighted(&part, m, mu, 6) {
            if fit.sup_error <= 0.75 * target {
                let first = first_index(sym);
                let mut out = vec![0.0; m + 1];
                out[first..].copy_from_slice(&fit.coeffs);
                return Ok(out);
            }
        }
        if m >= m_max {
            let err = solve_weighted(&sample_part(sym, f, h, grid_for(m)), m, mu, 0).map_or(f64::INFINITY, |p| p.sup_error);
            return Err(Error::FitFailed { sup_error: err, target });
        }
        m = ((m as f64 * 1.05).ceil() as usize).max(m + 1).min(m_max);
    }
}

/// Minimum-l1 coefficients at bandwidth `m` with grid error at most `accept`.
/// The interior-point answer can overshoot its error rows by more than the
/// solver tolerance, so the budget is tightened until the measured error fits.
fn lp_part<F: Fn(f64) -> f64>(sym: Sym, f: &F, h: f64, accept: f64, m: usize) -> Result<Option<Vec<f64>>> {
    let first = first_index(sym);
    let nb = m + 1 - first;
    let part = sample_part(sym, f, h, CERT_GRID.max(8 * m) / 2 + 1);
    let n = part.ys.len();
    // variables [a (nb), u (nb)]; rows: a - u <= 0, -a - u <= 0, +-(Phi a - g) <= budget
    let mut g = DMatrix::zeros(2 * nb + 2 * n, 2 * nb);
    for i in 0..nb {
        g[(i, i)] = 1.0;
        g[(i, nb + i)] = -1.0;
        g[(nb + i, i)] = -1.0;
        g[(nb + i, nb + i)] = -1.0;
    }
    let mut cs = vec![0.0; m + 1];
    let mut sn = vec![0.0; m + 1];
    for (j, &y) in part.ys.iter().enumerate() {
        harmonics(FRAC_PI_2 * y, m, &mut cs, &mut sn);
        for i in 0..nb {
            let phi = part_basis(sym, &cs, &sn, i + first);
            g[(2 * nb + j, i)] = phi;
            g[(2 * nb + n + j, i)] = -phi;
        }
    }
    let mut cost = vec![0.0; 2 * nb];
    cost[nb..].iter_mut().for_each(|c| *c = 1.0);
    let mut budget = 0.75 * accept;
    for _ in 0..4 {
        let mut rhs = vec![0.0; 2 * nb + 2 * n];
        for (j, &v) in part.vals.iter().enumerate() {
            rhs[2 * nb + j] = budget + v;
            rhs[2 * nb + n + j] = budget - v;
        }
        match solve_lp(&cost, &g, &rhs)? {
            (LpOutcome::Optimal, x) => {
                if part_error(&part, &x[..nb], m) <= accept {
                    let mut out = vec![0.0; m + 1];
                    out[first..].copy_from_slice(&x[..nb]);
                    return Ok(Some(out));
                }
            }
            (LpOutcome::Infeasible, _) => return Ok(None),
        }
        budget *= 0.5;
    }
    Ok(None)
}

/// Largest bandwidth handed to the l1 linear program.
const LP_BANDWIDTH_LIMIT: usize = 256;

/// Combines part coefficients into `c_m`; returns `(c, ||c||_1, bandwidth)`.
fn assemble(parts: &[(bool, Sym)], fits: &[Vec<f64>], big_m: usize) -> (Vec<Complex64>, f64, usize) {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * big_m + 1];
    let mut bandwidth = 0;
    for (&(is_im, sym), fit) in parts.iter().zip(fits) {
        let unit = if is_im { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
        for (k, &v) in fit.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            bandwidth = bandwidth.max(k);
            let (plus, minus) = match (sym, k) {
                (Sym::Even, 0) => (Complex64::new(v, 0.0), Complex64::new(0.0, 0.0)),
                (Sym::Even, _) => (Complex64::new(0.5 * v, 0.0), Complex64::new(0.5 * v, 0.0)),
                // s sin(theta) = (s / 2i) e^{i theta} - (s / 2i) e^{-i theta}
                (Sym::Odd, _) => (Complex64::new(0.0, -0.5 * v), Complex64::new(0.0, 0.5 * v)),
            };
            coeffs[big_m + k] += unit * plus;
            if k > 0 {
                coeffs[big_m - k] += unit * minus;
            }
        }
    }
    let weight = coeffs.iter().map(|z| z.norm()).sum();
    (coeffs, weight, bandwidth)
}

/// Lemma-style bandwidth `M = 2 ceil((1/delta') ln(12 ||b||_1 / eps))`, at least 0.
pub fn fourier_bandwidth(s: &TaylorSeries, eps: f64) -> usize {
    let v = (s.ln_l1() + (12.0 / eps).ln()) / s.delta_prime();
    if v.is_finite() && v > 0.0 {
        2 * v.ceil() as usize
    } else {
        0
    }
}

/// Fourier approximation of `g` with sup error at most `eps/3` on
/// `[-1 + delta', 1 - delta']` and `||c||_1 <= ||b||_1`.
pub fn fourier_from_taylor(s: &TaylorSeries, eps: f64) -> Result<TrigPoly> {
    if s.truncated_at.is_none() {
        return Err(Error::Invalid("series must be truncated first".into()));
    }
    let dp = s.delta_prime();
    if !(dp > 0.0 && dp < 1.0) {
        return Err(Error::DomainError(format!("delta' = {dp} outside (0, 1)")));
    }
    let h = 1.0 - dp;
    let big_m = fourier_bandwidth(s, eps);
    let target = eps / 3.0;
    let l1_b = s.ln_l1().exp();
    let hint = s.source.map_or(1, |src| (0.95 * src.kappa) as usize);

    let g = |y: f64| s.eval(y);
    let re = |y: f64| g(y).re;
    let im = |y: f64| g(y).im;
    let probe = chebyshev_grid_on(-h, h, 512);
    let max_of = |f: &dyn Fn(f64) -> f64, sym: Sym| {
        probe
            .iter()
            .map(|&y| match sym {
                Sym::Even => 0.5 * (f(y) + f(-y)),
                Sym::Odd => 0.5 * (f(y) - f(-y)),
            })
            .fold(0.0f64, |a, v| a.max(v.abs()))
    };
    let mut parts: Vec<(bool, Sym)> = Vec::new();
    for (is_im, f) in [(false, &re as &dyn Fn(f64) -> f64), (true, &im as &dyn Fn(f64) -> f64)] {
        for sym in [Sym::Even, Sym::Odd] {
            if max_of(f, sym) > 1e-15 {
                parts.push((is_im, sym));
            }
        }
    }
    let part_target = target / parts.len().max(1) as f64;

    let mut fits: Vec<Vec<f64>> = Vec::with_capacity(parts.len());
    for &(is_im, sym) in &parts {
        let f = |y: f64| if is_im { im(y) } else { re(y) };
        fits.push(fit_part(sym, &f, h, part_target, hint, big_m)?);
    }
    let weight_of = |fits: &[Vec<f64>]| assemble(&parts, fits, big_m).1;
    if weight_of(&fits) > l1_b + 1e-9 {
        // least squares overshoots the weight budget; switch to the l1 program
        let mut m = fits.iter().map(|f| f.len() - 1).max().unwrap_or(0).max(1);
        loop {
            if m > LP_BANDWIDTH_LIMIT.min(big_m) {
                return Err(Error::CertificationFailed(format!(
                    "no fit within weight {l1_b} up to bandwidth {}",
                    LP_BANDWIDTH_LIMIT.min(big_m)
                )));
            }
            let mut lp_fits = Vec::with_capacity(parts.len());
            for &(is_im, sym) in &parts {
                let f = |y: f64| if is_im { im(y) } else { re(y) };
                match lp_part(sym, &f, h, 0.9 * part_target, m)? {
                    Some(c) => lp_fits.push(c),
                    None => break,
                }
            }
            if lp_fits.len() == parts.len() && weight_of(&lp_fits) <= l1_b + 1e-9 {
                fits = lp_fits;
                break;
            }
            m = ((m as f64 * 1.5).ceil() as usize).max(m + 1);
        }
    }
    let (coeffs, _, bandwidth) = assemble(&parts, &fits, big_m);
    let mut tp = TrigPoly { coeffs, m: big_m, base_freq: FRAC_PI_2 / (s.r + s.delta), scale: s.r + s.delta, bandwidth, certificates: None };

    let coarse = chebyshev_grid_on(-h, h, CERT_GRID);
    let fine = uniform_grid(-h, h, FINE_FACTOR * CERT_GRID);
    let err = |ys: &[f64]| ys.par_iter().map(|&y| (tp.eval_y(y) - g(y)).norm()).reduce(|| 0.0, f64::max);
    let sup_error = err(&coarse).max(err(&fine));
    if sup_error > target {
        return Err(Error::FitFailed { sup_error, target });
    }
    let weight = tp.weight();
    if weight > l1_b + 1e-9 {
        return Err(Error::CertificationFailed(format!("Fourier weight {weight} exceeds ||b||_1 = {l1_b}")));
    }
    tp.certificates = Some(Certificate { grid_points: coarse.len() + fine.len(), sup_error, weight });
    Ok(tp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::jacobi_anger::TrigKind;
    use crate::poly::taylor::{taylor_trig_square, truncate_taylor};

    #[test]
    fn constant_series() {
        let s = TaylorSeries::from_coeffs(&[Complex64::new(1.0, 0.0)], 0.5, 0.5).unwrap();
        let s = truncate_taylor(&s, 0.1).unwrap();
        let tp = fourier_from_taylor(&s, 0.1).unwrap();
        assert!((tp.c(0) - 1.0).norm() < 1e-8);
        assert!(tp.weight() <= 1.0 + 1e-9);
        assert_eq!(tp.m, fourier_bandwidth(&s, 0.1));
    }

    #[test]
    fn trig_square_fit() {
        let s = taylor_trig_square(10.0, 1.0, TrigKind::Cos, 0.5, 0.5).unwrap();
        let s = truncate_taylor(&s, 1e-3).unwrap();
        let tp = fourier_from_taylor(&s, 1e-3).unwrap();
        let cert = tp.certificates.unwrap();
        assert!(cert.sup_error <= 1e-3 / 3.0);
        assert!(tp.imag_residual() < 1e-12);
    }
}
