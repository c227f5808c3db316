//! Gap-amplifiable Hamiltonians `H = sum_l lambda_l A_l^dagger A_l`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::Operator;

/// Audit tolerance for `H = sum lambda_l A_l^dagger A_l` and `||A_l|| <= 1`.
pub const AUDIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GapAmpTerm {
    pub lambda: f64,
    /// `M x N` factor; may be rectangular.
    pub a: CMatrix,
}

#[derive(Debug, Clone)]
pub struct GapAmpHamiltonian {
    pub lambda: f64,
    pub terms: Vec<GapAmpTerm>,
    /// Stacked `sum_l sqrt(lambda_l / lambda) |l> (x) A_l`, when built.
    pub assembled_a: Option<CMatrix>,
    pub h: Operator,
}

impl GapAmpHamiltonian {
    /// Builds `H` from the terms and audits it. `lambda` defaults to the sum
    /// of the term weights.
    pub fn from_terms(terms: Vec<GapAmpTerm>, lambda: Option<f64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Invalid("no terms".into()));
        }
        let n = terms[0].a.ncols();
        let mut h = CMatrix::zeros(n, n);
        for (index, term) in terms.iter().enumerate() {
            if term.a.ncols() != n {
                return Err(Error::ShapeMismatch { index, expected: (term.a.nrows(), n), found: term.a.shape() });
            }
            if !(term.lambda > 0.0) {
                return Err(Error::DomainError(format!("term weight {} must be positive", term.lambda)));
            }
            let norm = linalg::spectral_norm(&term.a);
            if norm > 1.0 + AUDIT_TOL {
                return Err(Error::NormExceeded { norm });
            }
            h += linalg::matmul(&term.a.adjoint(), &term.a) * linalg::c(term.lambda);
        }
        let total: f64 = terms.iter().map(|t| t.lambda).sum();
        let lambda = lambda.unwrap_or(total);
        if lambda < total * (1.0 - 1e-12) {
            return Err(Error::DomainError(format!("lambda {lambda} below the term sum {total}")));
        }
        // exact hermitian symmetrization removes rounding asymmetry
        let h = (&h + h.adjoint()) * linalg::c(0.5);
        let h = Operator::psd(h)?;
        Ok(Self { lambda, terms, assembled_a: None, h })
    }

    /// Single-factor form `H = lambda A^dagger A`.
    pub fn single(lambda: f64, a: CMatrix) -> Result<Self> {
        Self::from_terms(vec![GapAmpTerm { lambda, a }], Some(lambda))
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `max |H - sum lambda_l A_l^dagger A_l|`.
    pub fn audit(&self) -> f64 {
        let n = self.dim();
        let mut sum = CMatrix::zeros(n, n);
        for t in &self.terms {
            sum += linalg::matmul(&t.a.adjoint(), &t.a) * linalg::c(t.lambda);
        }
        linalg::max_abs_diff(&sum, self.h.matrix())
    }

    /// Stacked factor with `lambda A^dagger A = H`.
    pub fn stacked_a(&self) -> CMatrix {
        if let Some(a) = &self.assembled_a {
            return a.clone();
        }
        let rows: usize = self.terms.iter().map(|t| t.a.nrows()).sum();
        let mut out = CMatrix::zeros(rows, self.dim());
        let mut r = 0;
        for t in &self.terms {
            let w = (t.lambda / self.lambda).sqrt();
            out.view_mut((r, 0), t.a.shape()).copy_from(&(&t.a * linalg::c(w)));
            r += t.a.nrows();
        }
        out
    }
}
