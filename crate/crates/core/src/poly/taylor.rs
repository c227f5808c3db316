//! Local Taylor series held in log-magnitude form.
//!
//! `cos(kappa y^2)` has coefficients up to `kappa^{2j}/(2j)!`, which overflow
//! doubles long before `kappa` reaches the sizes used in simulation, so
//! magnitudes are stored as logarithms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jacobi_anger::TrigKind;
use crate::error::{Error, Result};

/// `g(y) = cos(kappa y^2)` or `sin(kappa y^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigSquare {
    pub kind: TrigKind,
    pub kappa: f64,
}

impl TrigSquare {
    pub fn eval(&self, y: f64) -> f64 {
        self.kind.eval(self.kappa * y * y)
    }
}

/// `g(y) = sum_k b_k y^k` with `b_k = a_k (r + delta)^k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaylorSeries {
    /// `ln |b_k|`; `-inf` marks a zero coefficient.
    pub ln_abs: Vec<f64>,
    /// Unit phase of `b_k`.
    pub phase: Vec<Complex64>,
    pub r: f64,
    pub delta: f64,
    /// `ln B` with `B >= sum_k |b_k|` over the full series.
    pub ln_weight_bound: f64,
    /// Closed form of the full series when known.
    pub source: Option<TrigSquare>,
    /// Number of leading coefficients kept by [`truncate_taylor`].
    pub truncated_at: Option<usize>,
    /// Certified bound on the truncation tail over `|y| <= 1 - delta'`.
    pub tail_bound: Option<f64>,
}

fn logsumexp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.filter(|x| x.is_finite()).collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return f64::NEG_INFINITY;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

impl TaylorSeries {
    /// Series with explicit `b_k`; `B` defaults to `sum |b_k|`.
    pub fn from_coeffs(b: &[Complex64], r: f64, delta: f64) -> Result<Self> {
        check_radius(r, delta)?;
        let ln_abs: Vec<f64> = b.iter().map(|z| z.norm().ln()).collect();
        let phase = b.iter().map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(0.0, 0.0) }).collect();
        let ln_weight_bound = logsumexp(ln_abs.iter().copied());
        Ok(Self { ln_abs, phase, r, delta, ln_weight_bound, source: None, truncated_at: None, tail_bound: None })
    }

    pub fn len(&self) -> usize {
        self.ln_abs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_abs.iter().all(|v| !v.is_finite())
    }

    pub fn weight_bound(&self) -> f64 {
        self.ln_weight_bound.exp()
    }

    /// `ln sum_k |b_k|` over the held coefficients.
    pub fn ln_l1(&self) -> f64 {
        logsumexp(self.ln_abs.iter().copied())
    }

    /// `b_k`; may overflow to infinity for large series.
    pub fn b(&self, k: usize) -> Complex64 {
        match self.ln_abs.get(k) {
            Some(&l) if l.is_finite() => self.phase[k] * l.exp(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `a_k = b_k / (r + delta)^k`.
    pub fn a(&self, k: usize) -> Complex64 {
        match self.ln_abs.get(k) {
            Some(&l) if l.is_finite() => self.phase[k] * (l - k as f64 * (self.r + self.delta).ln()).exp(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `delta / (2 (r + delta))`.
    pub fn delta_prime(&self) -> f64 {
        self.delta / (2.0 * (self.r + self.delta))
    }

    /// Held partial sum at `y`.
    pub fn eval_series(&self, y: f64) -> Complex64 {
        let ly = y.abs().ln();
        let mut s = Complex64::new(0.0, 0.0);
        for (k, (&l, &p)) in self.ln_abs.iter().zip(&self.phase).enumerate() {
            if !l.is_finite() {
                continue;
            }
            if k == 0 {
                s += p * l.exp();
                continue;
            }
            if y == 0.0 {
                continue;
            }
            let sign = if y < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            s += p * (sign * (l + k as f64 * ly).exp());
        }
        s
    }

    /// `g(y)`, from the closed form when the series has one.
    pub fn eval(&self, y: f64) -> Complex64 {
        match self.source {
            Some(src) => Complex64::new(src.eval(y), 0.0),
            None => self.eval_series(y),
        }
    }
}

fn check_radius(r: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= r && r <= 1.0) {
        return Err(Error::DomainError(format!("need 0 < delta <= r <= 1, got r = {r}, delta = {delta}")));
    }
    if r + delta > 1.0 + 1e-12 {
        return Err(Error::DomainError(format!("r + delta = {} exceeds 1", r + delta)));
    }
    Ok(())
}

/// Series of `cos(t lambda x^2)` or `sin(t lambda x^2)` in `y = x/(r + delta)`,
/// that is `g(y) = cos(kappa y^2)` with `kappa = t lambda (r + delta)^2`.
/// `B` is `cosh(kappa)` or `sinh(kappa)`, the exact absolute sum.
pub fn taylor_trig_square(t: f64, lambda: f64, kind: TrigKind, r: f64, delta: f64) -> Result<TaylorSeries> {
    check_radius(r, delta)?;
    if !(t >= 0.0 && lambda > 0.0) {
        return Err(Error::DomainError(format!("need t >= 0 and lambda > 0, got t = {t}, lambda = {lambda}")));
    }
    let kappa = t * lambda * (r + delta).powi(2);
    let ln_b = match kind {
        TrigKind::Cos => kappa + (-2.0 * kappa).exp().ln_1p() - std::f64::consts::LN_2,
        TrigKind::Sin if kappa > 0.0 => kappa + (-(-2.0 * kappa).exp()).ln_1p() - std::f64::consts::LN_2,
        TrigKind::Sin => f64::NEG_INFINITY,
    };
    let cutoff = ln_b + (1e-18f64).ln();
    let mut ln_abs = Vec::new();
    let mut phase = Vec::new();
    let ln_kappa = kappa.ln();
    let mut j = 0usize;
    loop {
        let n = match kind {
            TrigKind::Cos => 2 * j,
            TrigKind::Sin => 2 * j + 1,
        };
        let l = if kappa == 0.0 {
            if n == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            n as f64 * ln_kappa - libm::lgamma(n as f64 + 1.0)
        };
        // stop once past the peak and below the relative cutoff
        if (n as f64 > kappa && l < cutoff) || (kappa == 0.0 && n > 0) {
            break;
        }
        let k = 2 * n;
        ln_abs.resize(k + 1, f64::NEG_INFINITY);
        phase.resize(k + 1, Complex64::new(0.0, 0.0));
        ln_abs[k] = l;
        phase[k] = Complex64::new(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        j += 1;
    }
    if ln_abs.is_empty() {
        ln_abs.push(f64::NEG_INFINITY);
        phase.push(Complex64::new(0.0, 0.0));
    }
    Ok(TaylorSeries {
        ln_abs,
        phase,
        r,
        delta,
        ln_weight_bound: ln_b,
        source: Some(TrigSquare { kind, kappa }),
        truncated_at: None,
        tail_bound: None,
    })
}

/// Keeps the first `K = ceil((2(r + delta)/delta) ln(12 B / eps))` coefficients.
pub fn truncate_taylor(s: &TaylorSeries, eps: f64) -> Result<TaylorSeries> {
    let b = s.weight_bound();
    if !(eps > 0.0 && eps < 1.5 * b) {
        return Err(Error::EpsilonRange { eps, lo: 0.0, hi: 1.5 * b });
    }
    let ratio = 2.0 * (s.r + s.delta) / s.delta;
    let k = (ratio * (s.ln_weight_bound + (12.0 / eps).ln())).ceil() as usize;
    let mut out = s.clone();
    if k < out.ln_abs.len() {
        out.ln_abs.truncate(k);
        out.phase.truncate(k);
    }
    out.truncated_at = Some(k);
    out.tail_bound = Some((-(k as f64) / ratio + s.ln_weight_bound).exp());
    Ok(out)
}
