//! Even polynomial approximations of the indicator of a symmetric window.
//!
//! The polynomial interpolates `(erf(k(x + c)) - erf(k(x - c))) / 2` with
//! `k = erfcinv(eps/2) / delta`, so each edge falls from `1 - eps/2` to
//! `eps/2` across a band of half-width `delta`.

use rayon::prelude::*;

use super::chebyshev::{chebyshev_grid, interpolate, Certificate, ChebPoly};
use crate::error::{Error, Result};

/// Minimum certification grid size.
pub const RECT_GRID: usize = 8192;
const MAX_NODES: usize = 1 << 14;

/// `z` with `erfc(z) = y`, for `y` in `(0, 1)`.
pub fn erfcinv(y: f64) -> f64 {
    assert!(y > 0.0 && y < 1.0, "erfcinv argument {y} outside (0, 1)");
    let ln_y = y.ln();
    let mut z = (-ln_y).sqrt().max(0.1);
    for _ in 0..100 {
        // Newton on ln erfc(z) - ln y
        let e = libm::erfc(z);
        let g = e.ln() - ln_y;
        let dg = -2.0 / std::f64::consts::PI.sqrt() * (-z * z).exp() / e;
        let step = g / dg;
        z -= step;
        if step.abs() < 1e-15 * z.abs().max(1.0) {
            break;
        }
    }
    z
}

/// Rectangle target `(erf(k(x + c)) - erf(k(x - c))) / 2`.
fn window(k: f64, c: f64, x: f64) -> f64 {
    let (a, b) = (k * (x + c), k * (x - c));
    // write as a difference of erfc tails when both arguments share a sign
    if b >= 0.0 {
        0.5 * (libm::erfc(b) - libm::erfc(a))
    } else if a <= 0.0 {
        0.5 * (libm::erfc(-a) - libm::erfc(-b))
    } else {
        0.5 * (libm::erf(a) - libm::erf(b))
    }
}

/// Grid check of the three window conditions; returns the certificate and
/// whether all of them hold.
fn certify(p: &ChebPoly, center: f64, delta: f64, eps: f64) -> (Certificate, bool) {
    let n = RECT_GRID.max(8 * p.degree());
    let xs = chebyshev_grid(n);
    let (worst, top) = xs
        .par_iter()
        .map(|&x| {
            let v = p.eval(x);
            let ax = x.abs();
            let err = if ax <= center - delta {
                (v - 1.0).abs()
            } else if ax >= center + delta {
                v.abs()
            } else {
                0.0
            };
            (err, v.abs())
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let cert = Certificate { grid_points: xs.len(), sup_error: worst, weight: top };
    (cert, worst <= eps && top <= 1.0 + super::chebyshev::NORMALIZED_TOL)
}

/// Even polynomial with `|P - 1| <= eps` on `|x| <= center - delta`,
/// `|P| <= eps` on `center + delta <= |x| <= 1` and `|P| <= 1` on `[-1, 1]`.
pub fn rectangle_poly(center: f64, delta: f64, eps: f64) -> Result<ChebPoly> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DomainError(format!("rectangle band {delta} outside (0, 1/2)")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::EpsilonRange { eps, lo: 0.0, hi: 0.5 });
    }
    if !(center - delta >= 0.0 && center + delta <= 1.0) {
        return Err(Error::DomainError(format!("window {center} +- {delta} leaves [0, 1]")));
    }
    let k = erfcinv(0.5 * eps) / delta;
    let f = |x: f64| window(k, center, x);

    // grow the node count until the trailing coefficients are negligible
    let tol = eps / 4.0;
    let mut n = 64;
    let coeffs = loop {
        let c = interpolate(f, n);
        let tail: f64 = c[n - n / 8..].iter().map(|v| v.abs()).sum();
        if tail <= 1e-3 * tol || n >= MAX_NODES {
            break c;
        }
        n *= 2;
    };
    // smallest even degree whose discarded tail is within eps/4
    let mut suffix = vec![0.0; coeffs.len() + 1];
    for j in (0..coeffs.len()).rev() {
        suffix[j] = suffix[j + 1] + if j % 2 == 0 { coeffs[j].abs() } else { 0.0 };
    }
    let mut degree = (0..coeffs.len()).step_by(2).find(|&d| suffix[d + 1] <= tol).unwrap_or(coeffs.len() - 1);

    let build = |degree: usize| {
        let c: Vec<f64> =
            (0..=degree.min(coeffs.len() - 1)).map(|j| if j % 2 == 0 { coeffs[j] } else { 0.0 }).collect();
        ChebPoly::new(c).scaled(1.0 / (1.0 + tol))
    };
    for attempt in 0..2 {
        let mut p = build(degree);
        let (cert, ok) = certify(&p, center, delta, eps);
        if ok {
            p.normalized = true;
            p.certificates = Some(cert);
            return Ok(p);
        }
        if attempt == 1 {
            return Err(Error::CertificationFailed(format!(
                "rectangle at degree {degree}: window error {:.3e}, max |P| {:.12}",
                cert.sup_error, cert.weight
            )));
        }
        degree *= 2;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev::Parity;

    #[test]
    fn erfcinv_inverts() {
        for &y in &[0.9, 0.5, 1e-3, 1e-12, 1e-200] {
            let z = erfcinv(y);
            assert!((libm::erfc(z) / y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn window_conditions() {
        let p = rectangle_poly(0.5, 0.2, 0.1).unwrap();
        assert_eq!(p.parity, Parity::Even);
        assert!((p.eval(0.0) - 1.0).abs() <= 0.1);
        assert!(p.eval(1.0).abs() <= 0.1 && p.eval(-1.0).abs() <= 0.1);
    }
}
