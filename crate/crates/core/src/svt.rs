//! Polynomial transforms of block-encoded operators with query accounting.
//!
//! Polynomials are applied through the spectral or singular value
//! decomposition of the encoded block; the degree is charged as the number of
//! encoding uses. [`walk_chebyshev`] builds `T_k` by literally multiplying the
//! walk operator `k` times and checks it against the spectral route.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::BlockEncoding;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::poly::chebyshev::{clenshaw, ChebPoly, Parity};

/// Oblivious amplitude amplification rounds charged per LCU combination.
pub const AMPLIFICATION_FACTOR: usize = 3;
/// Self-inverse tolerance for walk operators.
pub const SELF_INVERSE_TOL: f64 = 1e-10;
/// Agreement required between the walk and the spectral Chebyshev value.
pub const WALK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    /// Controlled encoding (or inverse) applications.
    pub encoding_uses: usize,
    pub degree_cos: usize,
    pub degree_sin: usize,
    pub amplification_factor: usize,
    pub notes: String,
}

impl QueryLedger {
    /// Ledger of a single polynomial of the given degree.
    pub fn single(degree: usize) -> Self {
        Self { encoding_uses: degree, degree_cos: 0, degree_sin: 0, amplification_factor: AMPLIFICATION_FACTOR, notes: String::new() }
    }

    /// `amplification_factor * (degree_cos + degree_sin)`.
    pub fn combined(degree_cos: usize, degree_sin: usize) -> Self {
        Self {
            encoding_uses: AMPLIFICATION_FACTOR * (degree_cos + degree_sin),
            degree_cos,
            degree_sin,
            amplification_factor: AMPLIFICATION_FACTOR,
            notes: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(&note.into());
        self
    }
}

/// Decomposition of an encoded block, reused across polynomials.
#[derive(Debug, Clone)]
pub enum SvtContext {
    /// Square hermitian block: eigenvalues and eigenvectors.
    Hermitian { values: Vec<f64>, vectors: CMatrix },
    /// General block `A = U diag(s) V^dagger` (thin factors).
    Singular { u: CMatrix, s: Vec<f64>, v: CMatrix, rows: usize, cols: usize },
}

impl SvtContext {
    /// Decomposes the raw block `U[row_sub, col_sub]` of `be`.
    pub fn from_encoding(be: &BlockEncoding) -> Self {
        Self::from_block(&be.raw_block())
    }

    pub fn from_block(a: &CMatrix) -> Self {
        let (rows, cols) = a.shape();
        let scale = a.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        if rows == cols && linalg::max_asymmetry(a) <= 1e-12 * scale {
            let h = (a + a.adjoint()) * c(0.5);
            let (values, vectors) = linalg::hermitian_eigen(&h);
            return SvtContext::Hermitian { values, vectors };
        }
        let svd = a.clone().svd(true, true);
        let u = svd.u.expect("left vectors requested");
        let v = svd.v_t.expect("right vectors requested").adjoint();
        let s = svd.singular_values.iter().copied().collect();
        SvtContext::Singular { u, s, v, rows, cols }
    }

    /// Eigenvalues (hermitian) or singular values.
    pub fn spectrum(&self) -> &[f64] {
        match self {
            SvtContext::Hermitian { values, .. } => values,
            SvtContext::Singular { s, .. } => s,
        }
    }

    /// `p(block)` under the parity convention of the singular value transform.
    pub fn apply(&self, p: &ChebPoly) -> Result<(CMatrix, QueryLedger)> {
        check_admissible(p)?;
        Ok((self.apply_unchecked(&p.coeffs, p.parity), QueryLedger::single(p.degree())))
    }

    /// Applies Chebyshev coefficients without the admissibility checks.
    pub fn apply_unchecked(&self, coeffs: &[f64], parity: Parity) -> CMatrix {
        match self {
            SvtContext::Hermitian { values, vectors } => {
                let d: Vec<Complex64> = values.iter().map(|&x| c(clenshaw(coeffs, x))).collect();
                linalg::conjugate_diagonal(vectors, &d)
            }
            SvtContext::Singular { u, s, v, cols, .. } => {
                let ps: Vec<Complex64> = s.iter().map(|&x| c(clenshaw(coeffs, x))).collect();
                match parity {
                    Parity::Odd => {
                        // U p(S) V^dagger
                        let mut us = u.clone();
                        for (j, mut col) in us.column_iter_mut().enumerate() {
                            col *= ps[j];
                        }
                        linalg::matmul(&us, &v.adjoint())
                    }
                    _ => {
                        // V p(S) V^dagger + p(0) (I - V V^dagger)
                        let p0 = c(clenshaw(coeffs, 0.0));
                        let shifted: Vec<Complex64> = ps.iter().map(|&x| x - p0).collect();
                        let mut vs = v.clone();
                        for (j, mut col) in vs.column_iter_mut().enumerate() {
                            col *= shifted[j];
                        }
                        let mut out = linalg::matmul(&vs, &v.adjoint());
                        for i in 0..*cols {
                            out[(i, i)] += p0;
                        }
                        out
                    }
                }
            }
        }
    }
}

fn check_admissible(p: &ChebPoly) -> Result<()> {
    p.require_definite_parity()?;
    p.check_normalized()?;
    Ok(())
}

/// `p` applied to the block of `be`; one encoding use per degree.
pub fn apply_svt(be: &BlockEncoding, p: &ChebPoly) -> Result<(CMatrix, QueryLedger)> {
    check_admissible(p)?;
    let out = SvtContext::from_encoding(be).apply_unchecked(&p.coeffs, p.parity);
    Ok((out, QueryLedger::single(p.degree())))
}

/// `Pi (R U)^k Pi` on the encoding subspace, with `R = 2 Pi - I`, checked
/// against `T_k` of the block.
pub fn walk_chebyshev(be: &BlockEncoding, k: usize) -> Result<CMatrix> {
    if !be.is_square_block() {
        return Err(Error::Invalid("walk needs row and column subspaces to coincide".into()));
    }
    let deviation = be.self_inverse_deviation();
    if deviation > SELF_INVERSE_TOL {
        return Err(Error::NotSelfInverse { deviation });
    }
    let u = be.unitary();
    let q = be.dim();
    let sub = be.row_sub();
    let mut inside = vec![false; q];
    for &i in sub {
        inside[i] = true;
    }
    // columns of Pi as the starting block, then k walk steps
    let mut x = CMatrix::zeros(q, sub.len());
    for (j, &i) in sub.iter().enumerate() {
        x[(i, j)] = c(1.0);
    }
    for _ in 0..k {
        x = linalg::matmul(u, &x);
        for (i, mut row) in x.row_iter_mut().enumerate() {
            if !inside[i] {
                row.neg_mut();
            }
        }
    }
    let walked = CMatrix::from_fn(sub.len(), sub.len(), |a, b| x[(sub[a], b)]);
    let block = be.raw_block();
    let ctx = SvtContext::from_block(&block);
    let parity = if k % 2 == 0 { Parity::Even } else { Parity::Odd };
    let tk = ctx.apply_unchecked(&ChebPoly::basis(k).coeffs, parity);
    let gap = linalg::max_abs_diff(&walked, &tk);
    if gap > WALK_TOL {
        return Err(Error::CertificationFailed(format!("walk and T_{k} differ by {gap:.3e}")));
    }
    Ok(walked)
}

/// `cos_part - i sin_part`, charged `3 (d_cos + d_sin)` encoding uses.
pub fn lcu_combine_evolution(
    cos_part: &CMatrix,
    sin_part: &CMatrix,
    ledger_cos: &QueryLedger,
    ledger_sin: &QueryLedger,
) -> Result<(CMatrix, QueryLedger)> {
    if cos_part.shape() != sin_part.shape() {
        return Err(Error::DimMismatch { expected: cos_part.shape(), found: sin_part.shape() });
    }
    let out = cos_part - sin_part * Complex64::new(0.0, 1.0);
    let mut ledger = QueryLedger::combined(ledger_cos.encoding_uses, ledger_sin.encoding_uses);
    for note in [&ledger_cos.notes, &ledger_sin.notes] {
        if !note.is_empty() {
            ledger = ledger.with_note(note.clone());
        }
    }
    Ok((out, ledger))
}
