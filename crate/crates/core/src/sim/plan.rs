//! Choice of the amplified cutoff `Gamma` and the resulting degree estimate.

use serde::{Deserialize, Serialize};

use super::constants::constants;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Gamma = Delta`.
    TimeDominated,
    /// `Gamma = ln(1/eps)/t`.
    Intermediate,
    /// `Gamma = lambda`.
    ErrorDominated,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::TimeDominated => "time_dominated",
            Regime::Intermediate => "intermediate",
            Regime::ErrorDominated => "error_dominated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimPlan {
    pub t: f64,
    pub delta: f64,
    pub lambda: f64,
    pub eps: f64,
    pub gamma: f64,
    pub regime: Regime,
    /// Per-polynomial degree from the frozen calibration.
    pub predicted_degree: usize,
}

fn validate(t: f64, delta: f64, lambda: f64, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonRange { eps, lo: 0.0, hi: 1.0 });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::DomainError(format!("lambda = {lambda} must be positive")));
    }
    if !(delta > 0.0 && delta <= lambda) {
        return Err(Error::DomainError(format!("need 0 < Delta <= lambda, got Delta = {delta}, lambda = {lambda}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::DomainError(format!("t = {t} must be finite and nonnegative")));
    }
    if t * delta < eps {
        return Err(Error::PreconditionViolated(format!(
            "t Delta = {:e} < eps = {eps:e}; the identity already simulates to accuracy eps",
            t * delta
        )));
    }
    Ok(())
}

/// `ceil(c1 t sqrt(lambda Gamma) + c2 sqrt(lambda/Gamma) ln(1/eps))`.
pub fn predicted_degree(t: f64, lambda: f64, gamma: f64, eps: f64) -> usize {
    let k = &constants().degree;
    (k.c1 * t * (lambda * gamma).sqrt() + k.c2 * (lambda / gamma).sqrt() * (1.0 / eps).ln()).ceil() as usize
}

/// `Gamma = max(Delta, min(lambda, ln(1/eps)/t))`, labelled by the active bound.
pub fn choose_gamma(t: f64, delta: f64, lambda: f64, eps: f64) -> Result<SimPlan> {
    validate(t, delta, lambda, eps)?;
    let free = (1.0 / eps).ln() / t;
    let (gamma, regime) = if free <= delta {
        (delta, Regime::TimeDominated)
    } else if free >= lambda {
        (lambda, Regime::ErrorDominated)
    } else {
        (free, Regime::Intermediate)
    };
    Ok(SimPlan { t, delta, lambda, eps, gamma, regime, predicted_degree: predicted_degree(t, lambda, gamma, eps) })
}

/// Plan with a caller-chosen `Gamma` in `[Delta, lambda]`; the regime is the
/// one [`choose_gamma`] would report.
pub fn plan_with_gamma(t: f64, delta: f64, lambda: f64, eps: f64, gamma: f64) -> Result<SimPlan> {
    let base = choose_gamma(t, delta, lambda, eps)?;
    if !(gamma >= delta && gamma <= lambda) {
        return Err(Error::DomainError(format!("Gamma = {gamma} outside [Delta, lambda] = [{delta}, {lambda}]")));
    }
    Ok(SimPlan { gamma, predicted_degree: predicted_degree(t, lambda, gamma, eps), ..base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_regimes() {
        let p = choose_gamma(100.0, 1.0, 10.0, 1e-2).unwrap();
        assert_eq!((p.gamma, p.regime), (1.0, Regime::TimeDominated));
        let p = choose_gamma(10.0, 1e-3, 100.0, 1e-6).unwrap();
        assert_eq!(p.regime, Regime::Intermediate);
        assert!((p.gamma - 1e6f64.ln() / 10.0).abs() < 1e-12);
        let p = choose_gamma(0.1, 0.5, 1.0, 1e-6).unwrap();
        assert_eq!((p.gamma, p.regime), (1.0, Regime::ErrorDominated));
    }

    #[test]
    fn rejects_short_times() {
        assert!(matches!(choose_gamma(1e-4, 1.0, 1.0, 1e-3), Err(Error::PreconditionViolated(_))));
    }
}
