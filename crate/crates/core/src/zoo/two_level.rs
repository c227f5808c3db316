//! Two-level family `H_theta = diag(sin^2 theta, sin^2 theta_M)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gapamp::GapAmpHamiltonian;
use crate::linalg::{c, CMatrix, CVector};
use crate::operator::StateVector;

/// `H = A^dagger A` with `A = diag(sin theta, sin theta_M)` and `lambda = 1`.
pub fn two_level_theta(theta: f64, theta_max: f64) -> Result<GapAmpHamiltonian> {
    if !(0.0..=theta_max).contains(&theta) || theta_max > FRAC_PI_2 + 1e-15 {
        return Err(Error::DomainError(format!(
            "need 0 <= theta <= theta_M <= pi/2, got theta = {theta}, theta_M = {theta_max}"
        )));
    }
    let a = CMatrix::from_diagonal(&CVector::from_vec(vec![c(theta.sin()), c(theta_max.sin())]));
    GapAmpHamiltonian::single(1.0, a)
}

/// Low-energy cutoff `sin^2 theta_M`.
pub fn two_level_delta(theta_max: f64) -> f64 {
    theta_max.sin().powi(2)
}

/// `(|0> + |1>)/sqrt(2)`.
pub fn plus_state() -> StateVector {
    StateVector::uniform(2)
}

/// `<0| exp(-itH_theta) |+> = e^{-it sin^2 theta} / sqrt(2)`.
pub fn reference_amplitude(theta: f64, t: f64) -> Complex64 {
    Complex64::from_polar(0.5_f64.sqrt(), -t * theta.sin().powi(2))
}
