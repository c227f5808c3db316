//! Grover search Hamiltonians and their squared, tensor-sum forms.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::gapamp::{GapAmpHamiltonian, GapAmpTerm};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::operator::{self, Operator, StateVector};

/// Largest materialized dimension `N^K` for the tensor-sum family.
pub const MATERIALIZE_LIMIT: usize = 4096;

fn check(n: usize, x: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::DomainError(format!("N = {n} must be a power of two >= 2")));
    }
    if x >= n {
        return Err(Error::DomainError(format!("marked index {x} outside [0, {n})")));
    }
    Ok(())
}

/// `H_x = (1 + 1/sqrt(N)) I - |x><x| - |s><s|`.
pub fn grover_hamiltonian(n: usize, x: usize) -> Result<Operator> {
    check(n, x)?;
    let s = 1.0 / (n as f64).sqrt();
    let m = CMatrix::from_fn(n, n, |i, j| {
        let mut v = -1.0 / n as f64;
        if i == j {
            v += 1.0 + s;
            if i == x {
                v -= 1.0;
            }
        }
        c(v)
    });
    Operator::psd(m)
}

/// `1 + 1/sqrt(N)`, the norm of `H_x`.
pub fn grover_norm(n: usize) -> f64 {
    1.0 + 1.0 / (n as f64).sqrt()
}

/// Time at which `e^{-itH_x}` maps `|s>` to `|x>`.
pub fn grover_transfer_time(n: usize) -> f64 {
    std::f64::consts::FRAC_PI_2 * (n as f64).sqrt()
}

/// Time at which `e^{-itH_x^2}` maps `|s>` to `|x>`.
pub fn squared_transfer_time(n: usize) -> f64 {
    std::f64::consts::FRAC_PI_4 * n as f64
}

/// `sum_k I (x) ... (x) H_{x_k}^2 (x) ... (x) I` with factors
/// `A_k = H_{x_k} / (1 + 1/sqrt(N))` and weights `(1 + 1/sqrt(N))^2`.
///
/// Dynamics are evaluated factor by factor; the `N^K` matrix is only built on
/// request.
#[derive(Debug)]
pub struct GroverGaFamily {
    n: usize,
    marked: Vec<usize>,
    propagators: RwLock<HashMap<(usize, u64), Arc<Operator>>>,
}

impl GroverGaFamily {
    pub fn new(n: usize, marked: Vec<usize>) -> Result<Self> {
        if marked.is_empty() {
            return Err(Error::DomainError("K must be at least 1".into()));
        }
        for &x in &marked {
            check(n, x)?;
        }
        Ok(Self { n, marked, propagators: RwLock::new(HashMap::new()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn factor_lambda(&self) -> f64 {
        grover_norm(self.n).powi(2)
    }

    pub fn lambda(&self) -> f64 {
        self.k() as f64 * self.factor_lambda()
    }

    /// `4K/N`, the top of the spectrum reached by `|s>^{(x) K}`.
    pub fn delta(&self) -> f64 {
        4.0 * self.k() as f64 / self.n as f64
    }

    pub fn factor_a(&self, k: usize) -> CMatrix {
        let h = grover_hamiltonian(self.n, self.marked[k]).expect("validated");
        h.into_matrix() / c(grover_norm(self.n))
    }

    /// `exp(-i t H_{x_k}^2)`, memoized.
    pub fn factor_propagator(&self, k: usize, t: f64) -> Arc<Operator> {
        let key = (self.marked[k], t.to_bits());
        if let Some(u) = self.propagators.read().expect("cache lock").get(&key) {
            return Arc::clone(u);
        }
        let mut cache = self.propagators.write().expect("cache lock");
        let u = cache.entry(key).or_insert_with(|| {
            let h = grover_hamiltonian(self.n, self.marked[k]).expect("validated");
            let d = operator::spectral_decompose(&h).expect("hermitian");
            let h2 = d.apply_function(|x| c(x * x));
            let h2 = Operator::hermitian(h2).expect("hermitian square");
            Arc::new(operator::exact_evolution(&h2, t).expect("hermitian"))
        });
        Arc::clone(u)
    }

    /// Evolves a product state factor by factor.
    pub fn evolve_product(&self, factors: &[StateVector], t: f64) -> Result<Vec<CVector>> {
        if factors.len() != self.k() {
            return Err(Error::DimMismatch { expected: (self.k(), self.n), found: (factors.len(), self.n) });
        }
        Ok(factors.iter().enumerate().map(|(k, psi)| self.factor_propagator(k, t).apply(psi)).collect())
    }

    pub fn full_dim(&self) -> Result<usize> {
        let mut d: usize = 1;
        for _ in 0..self.k() {
            d = d.checked_mul(self.n).filter(|&v| v <= MATERIALIZE_LIMIT).ok_or(Error::TooLarge {
                gprime: self.n.saturating_pow(self.k() as u32),
                limit: MATERIALIZE_LIMIT,
            })?;
        }
        Ok(d)
    }

    /// Materialized gap-amplifiable form on `C^{N^K}`.
    pub fn to_gap_amp(&self) -> Result<GapAmpHamiltonian> {
        let dim = self.full_dim()?;
        let mut terms = Vec::with_capacity(self.k());
        for k in 0..self.k() {
            let left = self.n.pow(k as u32);
            let right = dim / (left * self.n);
            let a = linalg::kron(&linalg::kron(&CMatrix::identity(left, left), &self.factor_a(k)), &CMatrix::identity(right, right));
            terms.push(GapAmpTerm { lambda: self.factor_lambda(), a });
        }
        GapAmpHamiltonian::from_terms(terms, Some(self.lambda()))
    }

    /// `|s>^{(x) K}` on the materialized space.
    pub fn uniform_state(&self) -> Result<StateVector> {
        Ok(StateVector::uniform(self.full_dim()?))
    }

    /// `|x_1 ... x_K>` on the materialized space.
    pub fn marked_state(&self) -> Result<StateVector> {
        let dim = self.full_dim()?;
        let index = self.marked.iter().fold(0, |acc, &x| acc * self.n + x);
        Ok(StateVector::basis(dim, index))
    }
}
