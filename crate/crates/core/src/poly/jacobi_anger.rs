//! Truncated Jacobi-Anger expansions of `cos(tx)` and `sin(tx)`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::bessel::bessel_j_all;
use super::chebyshev::ChebPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Cos,
    Sin,
}

impl TrigKind {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            TrigKind::Cos => x.cos(),
            TrigKind::Sin => x.sin(),
        }
    }
}

/// Root `r >= u` of `(u/r)^r = xi`, i.e. `r ln(r/u) = ln(1/xi)`.
pub fn r_root(u: f64, xi: f64) -> f64 {
    assert!(u > 0.0 && xi > 0.0 && xi < 1.0);
    let l = (1.0 / xi).ln();
    let f = |r: f64| r * (r / u).ln() - l;
    // f(u) < 0 <= f(u + l)
    let (mut lo, mut hi) = (u, u + l);
    let mut r = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fr = f(r);
        if fr.abs() <= 1e-12 * l.max(1.0) {
            break;
        }
        if fr < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let step = r - fr / ((r / u).ln() + 1.0);
        r = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
    }
    r
}

/// `R = floor(r(e|t|/2, 5 eps/4) / 2)`.
pub fn ja_half_degree(t: f64, eps: f64) -> usize {
    (0.5 * r_root(E * t.abs() / 2.0, 1.25 * eps)).floor() as usize
}

/// Degree of the expansion: `2R` for cosine, `2R + 1` for sine.
pub fn ja_degree(t: f64, eps: f64, kind: TrigKind) -> usize {
    let r = 2 * ja_half_degree(t, eps);
    match kind {
        TrigKind::Cos => r,
        TrigKind::Sin => r + 1,
    }
}

fn check_eps(eps: f64, hi: f64) -> Result<()> {
    if !(eps > 0.0 && eps < hi) {
        return Err(Error::EpsilonRange { eps, lo: 0.0, hi });
    }
    Ok(())
}

/// Truncated expansion with sup error at most `eps` on [-1, 1], `eps < 1/e`.
pub fn jacobi_anger(t: f64, eps: f64, kind: TrigKind) -> Result<ChebPoly> {
    check_eps(eps, 1.0 / E)?;
    if t == 0.0 {
        return Err(Error::DomainError("t must be nonzero".into()));
    }
    Ok(expansion(t, ja_half_degree(t, eps), kind))
}

fn expansion(t: f64, r: usize, kind: TrigKind) -> ChebPoly {
    let deg = match kind {
        TrigKind::Cos => 2 * r,
        TrigKind::Sin => 2 * r + 1,
    };
    let j = bessel_j_all(deg, t);
    let mut c = vec![0.0; deg + 1];
    for k in 0..=r {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        match kind {
            TrigKind::Cos => c[2 * k] = if k == 0 { j[0] } else { 2.0 * sign * j[2 * k] },
            TrigKind::Sin => c[2 * k + 1] = 2.0 * sign * j[2 * k + 1],
        }
    }
    let mut p = ChebPoly::new(c);
    // keep the closed-form degree even if the top Bessel value underflows
    p.coeffs.resize(deg + 1, 0.0);
    p
}

/// Expansion at `eps/2` rescaled by `1/(1 + eps/2)`: sup error at most `eps`
/// and `|P| <= 1`, for `eps < 2/e`. `t = 0` gives the exact constants.
pub fn jacobi_anger_normalized(t: f64, eps: f64, kind: TrigKind) -> Result<ChebPoly> {
    check_eps(eps, 2.0 / E)?;
    let mut p = if t == 0.0 {
        ChebPoly::constant(match kind {
            TrigKind::Cos => 1.0,
            TrigKind::Sin => 0.0,
        })
    } else {
        let half = 0.5 * eps;
        expansion(t, ja_half_degree(t, half), kind).scaled(1.0 / (1.0 + half))
    };
    p.normalized = true;
    Ok(p)
}
