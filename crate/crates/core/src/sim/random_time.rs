//! Ground-state projection by evolving for a uniformly random time.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::operator::{self, Operator, StateVector};

/// Minimum number of quadrature nodes on `[0, T_max]`.
pub const QUADRATURE_POINTS: usize = 4096;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomTimeOutcome {
    pub alpha: f64,
    /// `alpha N` with `N` the dimension.
    pub t_max: f64,
    pub quadrature_points: usize,
    /// `<phi_0| N(rho) |phi_0>`.
    pub success_prob: f64,
    /// `<x| N(rho) |x>` for the requested basis state.
    pub marked_prob: Option<f64>,
    /// `sup_{j >= 1} |Phi(lambda_j - lambda_0)|` of the exact uniform law.
    pub sup_phi: f64,
    /// `8 / alpha`.
    pub bound_8_over_alpha: f64,
    /// `2 sqrt(sum_{j >= 1} |Phi(lambda_j) c_0 c_j^*|^2)`, exact law.
    pub trace_bound: f64,
    /// Trace norm of the ground/excited coherences left in `N(rho)`.
    pub coherence_trace_norm: f64,
}

/// Characteristic function of `T ~ U[0, t_max]`: `(e^{i w t_max} - 1)/(i w t_max)`.
fn phi_uniform(w: f64, t_max: f64) -> Complex64 {
    let z = w * t_max;
    if z.abs() < 1e-12 {
        return Complex64::new(1.0, 0.0);
    }
    (Complex64::from_polar(1.0, z) - 1.0) / Complex64::new(0.0, z)
}

/// Averages `e^{-iTH} rho e^{iTH}` over `T` uniform on `[0, alpha N]` with a
/// midpoint rule; the node count grows past [`QUADRATURE_POINTS`] when the
/// spectral width would alias.
pub fn random_time_projection(h: &Operator, psi: &StateVector, alpha: f64, marked: Option<usize>) -> Result<RandomTimeOutcome> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::DomainError(format!("alpha = {alpha} must be positive")));
    }
    let n = h.dim();
    if psi.dim() != n {
        return Err(Error::DimMismatch { expected: (n, 1), found: (psi.dim(), 1) });
    }
    if let Some(x) = marked {
        if x >= n {
            return Err(Error::DomainError(format!("marked index {x} outside [0, {n})")));
        }
    }
    let d = operator::spectral_decompose(h)?;
    let ev = &d.eigenvalues;
    let width = ev[n - 1] - ev[0];
    let gap = if n > 1 { ev[1] - ev[0] } else { f64::INFINITY };
    if gap <= 1e-10 * width.max(1.0) {
        return Err(Error::DegenerateGroundState { gap });
    }
    let t_max = alpha * n as f64;
    let points = QUADRATURE_POINTS.max((2.0 * width * t_max / std::f64::consts::PI).ceil() as usize);
    let step = t_max / points as f64;
    // weights w(omega) = mean_m e^{-i omega T_m}, T_m = (m + 1/2) step
    let weight = |omega: f64| -> Complex64 {
        let s: Complex64 = (0..points).map(|m| Complex64::from_polar(1.0, -omega * (m as f64 + 0.5) * step)).sum();
        s / points as f64
    };
    let coeffs: CVector = d.eigenvectors.adjoint() * psi.amplitudes();
    // rho'_{jk} = c_j c_k^* w(lambda_j - lambda_k); a table over distinct
    // eigenvalue pairs is O(n^2 points), so sum in the eigenbasis directly
    let mut w = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..=j {
            let v = if j == k { Complex64::new(1.0, 0.0) } else { weight(ev[j] - ev[k]) };
            w[j * n + k] = v;
            w[k * n + j] = v.conj();
        }
    }
    let rho_eig = |j: usize, k: usize| coeffs[j] * coeffs[k].conj() * w[j * n + k];
    let success_prob = rho_eig(0, 0).re;
    let marked_prob = marked.map(|x| {
        let row = d.eigenvectors.row(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                acc += row[j] * rho_eig(j, k) * row[k].conj();
            }
        }
        acc.re
    });
    let c0 = coeffs[0];
    let sup_phi = (1..n).map(|j| phi_uniform(ev[j] - ev[0], t_max).norm()).fold(0.0, f64::max);
    let trace_bound = 2.0 * (1..n).map(|j| (phi_uniform(ev[j] - ev[0], t_max) * c0 * coeffs[j].conj()).norm_sqr()).sum::<f64>().sqrt();
    let coherence_trace_norm = 2.0 * (1..n).map(|j| rho_eig(j, 0).norm_sqr()).sum::<f64>().sqrt();
    Ok(RandomTimeOutcome {
        alpha,
        t_max,
        quadrature_points: points,
        success_prob,
        marked_prob,
        sup_phi,
        bound_8_over_alpha: 8.0 / alpha,
        trace_bound,
        coherence_trace_norm,
    })
}
