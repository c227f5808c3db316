//! Polynomials for `cos(t lambda x^2)` and `sin(t lambda x^2)` that are accurate
//! on the low-energy window `|x| <= sqrt(Gamma / lambda)` and bounded by one on
//! `[-1, 1]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chebyshev::{chebyshev_grid, chebyshev_grid_on, Certificate, ChebPoly, NORMALIZED_TOL};
use super::fourier::fourier_from_taylor;
use super::jacobi_anger::{jacobi_anger, TrigKind};
use super::rectangle::rectangle_poly;
use super::taylor::{taylor_trig_square, truncate_taylor};
use crate::error::{Error, Result};

/// How a polynomial was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Fourier series of Jacobi-Anger cosines times a rectangle mask.
    Masked,
    /// Window covers `[-1, 1]`: `cos(a + a T_2)` expanded directly.
    FullWindow,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolutionPoly {
    pub kind: TrigKind,
    pub poly: ChebPoly,
    pub route: Route,
    /// `||c||_1` of the Fourier stage (1 on the full-window route).
    pub fourier_weight: f64,
    pub fourier_bandwidth: usize,
    pub mask_degree: usize,
}

impl EvolutionPoly {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolutionPolys {
    pub cos: EvolutionPoly,
    pub sin: EvolutionPoly,
    /// Window half-width `sqrt(Gamma / lambda)`.
    pub window: f64,
    pub t: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub eps: f64,
}

/// Both evolution polynomials, each within `2 eps` of its target on the window.
pub fn low_energy_evolution_polys(t: f64, lambda: f64, gamma: f64, eps: f64) -> Result<EvolutionPolys> {
    if !(lambda > 0.0 && gamma > 0.0 && gamma <= lambda * (1.0 + 1e-12)) {
        return Err(Error::DomainError(format!("need 0 < Gamma <= lambda, got Gamma = {gamma}, lambda = {lambda}")));
    }
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::EpsilonRange { eps, lo: 0.0, hi: 0.1 });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::DomainError(format!("need t >= 0, got {t}")));
    }
    let gamma = gamma.min(lambda);
    let r = (gamma / lambda).sqrt();
    let (cos, sin) = rayon::join(
        || evolution_poly(t, lambda, r, eps, TrigKind::Cos),
        || evolution_poly(t, lambda, r, eps, TrigKind::Sin),
    );
    Ok(EvolutionPolys { cos: cos?, sin: sin?, window: r, t, lambda, gamma, eps })
}

/// `cos` or `sin` of `t lambda x^2` on `|x| <= r`, error at most `2 eps`.
pub fn evolution_poly(t: f64, lambda: f64, r: f64, eps: f64, kind: TrigKind) -> Result<EvolutionPoly> {
    let target = |x: f64| kind.eval(t * lambda * x * x);
    let mut out = if 2.0 * r > 1.0 {
        full_window(t * lambda, eps, kind)?
    } else {
        masked(t, lambda, r, eps, kind)?
    };
    out.poly = out.poly.scaled(1.0 / (1.0 + eps));
    let cert = certify(&out.poly, r, &target)?;
    if cert.sup_error > 2.0 * eps {
        return Err(Error::CertificationFailed(format!(
            "{kind:?} polynomial window error {:.3e} exceeds {:.3e}",
            cert.sup_error,
            2.0 * eps
        )));
    }
    out.poly.normalized = true;
    out.poly.certificates = Some(cert);
    Ok(out)
}

/// Boundedness on `[-1, 1]` and window error on `[-r, r]`.
fn certify(p: &ChebPoly, r: f64, target: &(dyn Fn(f64) -> f64 + Sync)) -> Result<Certificate> {
    let n = 8192usize.max(8 * p.degree());
    let top = p.max_abs_on_grid(n);
    if top > 1.0 + NORMALIZED_TOL {
        return Err(Error::UnnormalizedPolynomial { max_abs: top });
    }
    let xs = chebyshev_grid_on(-r, r, n);
    let err = xs.par_iter().map(|&x| (p.eval(x) - target(x)).abs()).reduce(|| 0.0, f64::max);
    Ok(Certificate { grid_points: n + 2, sup_error: err, weight: top })
}

/// `cos(tl x^2) = cos(a) cos(a T_2) - sin(a) sin(a T_2)` with `a = tl/2`, and
/// `sin(tl x^2) = sin(a) cos(a T_2) + cos(a) sin(a T_2)`; unscaled, within
/// `eps` of the target on all of `[-1, 1]`.
fn full_window(tl: f64, eps: f64, kind: TrigKind) -> Result<EvolutionPoly> {
    let a = 0.5 * tl;
    let poly = if a == 0.0 {
        ChebPoly::constant(kind.eval(0.0))
    } else {
        let pc = jacobi_anger(a, 0.5 * eps, TrigKind::Cos)?.compose_t2();
        let ps = jacobi_anger(a, 0.5 * eps, TrigKind::Sin)?.compose_t2();
        let (wc, ws) = match kind {
            TrigKind::Cos => (a.cos(), -a.sin()),
            TrigKind::Sin => (a.sin(), a.cos()),
        };
        pc.scaled(wc).add(&ps.scaled(ws))
    };
    let mut poly = poly;
    poly.parity = super::chebyshev::detect_parity(&poly.coeffs);
    Ok(EvolutionPoly { kind, poly, route: Route::FullWindow, fourier_weight: 1.0, fourier_bandwidth: 0, mask_degree: 0 })
}

/// Fourier-Jacobi-Anger series times a rectangle mask, unscaled; error at
/// most `eps` on the window and `|Q| <= 1 + eps` on `[-1, 1]`.
fn masked(t: f64, lambda: f64, r: f64, eps: f64, kind: TrigKind) -> Result<EvolutionPoly> {
    let delta = r;
    let series = taylor_trig_square(t, lambda, kind, r, delta)?;
    let b = series.weight_bound();
    // a series this small is approximated by zero within eps/3
    let (smooth, weight, bandwidth) = if b < eps / 3.0 {
        (ChebPoly::constant(0.0), 0.0, 0)
    } else {
        let series = truncate_taylor(&series, eps)?;
        let fourier = fourier_from_taylor(&series, eps)?;
        let w = fourier.certificates.map_or(fourier.weight(), |c| c.weight);
        let xi = (eps / (3.0 * w.max(1.0))).min(0.25);
        let (a, s) = fourier.real_cos_sin();
        if s.iter().any(|v| v.abs() > 1e-12 * w) || fourier.imag_residual() > 1e-12 * w {
            return Err(Error::CertificationFailed("Fourier fit of an even real function has odd or imaginary terms".into()));
        }
        let terms: Vec<ChebPoly> = (1..a.len())
            .into_par_iter()
            .filter(|&m| a[m] != 0.0)
            .map(|m| jacobi_anger(fourier.base_freq * m as f64, xi, TrigKind::Cos).map(|p| p.scaled(a[m])))
            .collect::<Result<_>>()?;
        let mut sum = ChebPoly::constant(a[0]);
        for p in &terms {
            sum = sum.add(p);
        }
        (sum, w, fourier.bandwidth)
    };
    if smooth.coeffs.iter().all(|&c| c == 0.0) {
        return Ok(EvolutionPoly {
            kind,
            poly: ChebPoly::constant(0.0),
            route: Route::Masked,
            fourier_weight: weight,
            fourier_bandwidth: bandwidth,
            mask_degree: 0,
        });
    }
    // plateau on [-r, r], below xi past r + delta/2 where the Fourier fit ends
    let xi = eps / (3.0 * weight.max(1.0 + eps));
    let mask = rectangle_poly(r + 0.25 * delta, 0.25 * delta, xi)?;
    let mut poly = smooth.mul(&mask);
    poly.parity = super::chebyshev::detect_parity(&poly.coeffs);
    Ok(EvolutionPoly {
        kind,
        poly,
        route: Route::Masked,
        fourier_weight: weight,
        fourier_bandwidth: bandwidth,
        mask_degree: mask.degree(),
    })
}

/// Grid sup of `|p(x) - f(x)|` over `[-r, r]`, at 8x the degree.
pub fn window_error(p: &ChebPoly, r: f64, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    let n = 8192usize.max(8 * p.degree());
    chebyshev_grid_on(-r, r, n).par_iter().map(|&x| (p.eval(x) - f(x)).abs()).reduce(|| 0.0, f64::max)
}

/// Grid sup of `|p|` on `[-1, 1]`.
pub fn sup_abs(p: &ChebPoly) -> f64 {
    let n = 8192usize.max(8 * p.degree());
    chebyshev_grid(n).par_iter().map(|&x| p.eval(x).abs()).reduce(|| 0.0, f64::max)
}
