//! Block encodings and the conversions between them.
//!
//! A [`BlockEncoding`] stores a unitary together with the row and column
//! index lists that pick out the encoded block, so registers of any size are
//! supported. Constructions that need a particular layout first permute the
//! unitary so the block occupies the leading rows and columns.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gapamp::{GapAmpHamiltonian, GapAmpTerm};
use crate::linalg::{self, c, CMatrix, CVector, ONE, ZERO};
use crate::operator::Operator;

pub const UNITARY_TOL: f64 = 1e-10;

/// `scale * U[row_sub, col_sub]`.
#[derive(Debug, Clone, Serialize)]
pub struct BlockEncoding {
    unitary: Operator,
    row_sub: Vec<usize>,
    col_sub: Vec<usize>,
    scale: f64,
    /// Base-oracle applications consumed by one application of `unitary`.
    #[serde(default = "one")]
    oracle_queries: usize,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
struct BlockEncodingDoc {
    unitary: Operator,
    row_sub: Vec<usize>,
    col_sub: Vec<usize>,
    scale: f64,
    #[serde(default = "one")]
    oracle_queries: usize,
}

impl<'de> Deserialize<'de> for BlockEncoding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = BlockEncodingDoc::deserialize(d)?;
        let mut be = BlockEncoding::new(doc.unitary.into_matrix(), doc.row_sub, doc.col_sub, doc.scale)
            .map_err(serde::de::Error::custom)?;
        be.oracle_queries = doc.oracle_queries;
        Ok(be)
    }
}

fn check_sub(sub: &[usize], q: usize) -> Result<()> {
    if sub.is_empty() || sub.len() > q || sub.windows(2).any(|w| w[0] >= w[1]) || sub.iter().any(|&i| i >= q) {
        return Err(Error::Invalid(format!("index list must be strictly increasing within [0, {q})")));
    }
    Ok(())
}

impl BlockEncoding {
    /// Validates unitarity, the index lists and the norm bound.
    pub fn new(unitary: CMatrix, row_sub: Vec<usize>, col_sub: Vec<usize>, scale: f64) -> Result<Self> {
        let q = unitary.nrows();
        if unitary.ncols() != q {
            return Err(Error::DimMismatch { expected: (q, q), found: unitary.shape() });
        }
        let deviation = linalg::unitarity_deviation(&unitary);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        check_sub(&row_sub, q)?;
        check_sub(&col_sub, q)?;
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::DomainError(format!("scale {scale} must be positive")));
        }
        Ok(Self::raw(unitary, row_sub, col_sub, scale, 1))
    }

    /// Leading `rows x cols` block.
    pub fn leading(unitary: CMatrix, rows: usize, cols: usize, scale: f64) -> Result<Self> {
        Self::new(unitary, (0..rows).collect(), (0..cols).collect(), scale)
    }

    fn raw(unitary: CMatrix, row_sub: Vec<usize>, col_sub: Vec<usize>, scale: f64, oracle_queries: usize) -> Self {
        let unitary = Operator::new(unitary).expect("square unitary");
        Self { unitary, row_sub, col_sub, scale, oracle_queries }
    }

    pub fn unitary(&self) -> &CMatrix {
        self.unitary.matrix()
    }

    pub fn row_sub(&self) -> &[usize] {
        &self.row_sub
    }

    pub fn col_sub(&self) -> &[usize] {
        &self.col_sub
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn oracle_queries(&self) -> usize {
        self.oracle_queries
    }

    /// Ambient dimension `Q`.
    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn block_shape(&self) -> (usize, usize) {
        (self.row_sub.len(), self.col_sub.len())
    }

    pub fn is_square_block(&self) -> bool {
        self.row_sub == self.col_sub
    }

    /// Same unitary, reinterpreted with unit scale.
    pub fn with_unit_scale(&self) -> Self {
        Self { scale: 1.0, ..self.clone() }
    }

    /// `U[row_sub, col_sub]` without the scale.
    pub fn raw_block(&self) -> CMatrix {
        let u = self.unitary();
        CMatrix::from_fn(self.row_sub.len(), self.col_sub.len(), |i, j| u[(self.row_sub[i], self.col_sub[j])])
    }

    pub fn unitarity_deviation(&self) -> f64 {
        linalg::unitarity_deviation(self.unitary())
    }

    pub fn self_inverse_deviation(&self) -> f64 {
        linalg::max_asymmetry(self.unitary())
    }

    /// Permutes the unitary so the block occupies the leading rows and columns.
    pub fn canonical(&self) -> Self {
        let q = self.dim();
        let order = |sub: &[usize]| {
            let mut inside = vec![false; q];
            for &i in sub {
                inside[i] = true;
            }
            let mut perm = sub.to_vec();
            perm.extend((0..q).filter(|&i| !inside[i]));
            perm
        };
        let rows = order(&self.row_sub);
        let cols = order(&self.col_sub);
        let u = self.unitary();
        let permuted = CMatrix::from_fn(q, q, |i, j| u[(rows[i], cols[j])]);
        Self::raw(permuted, (0..self.row_sub.len()).collect(), (0..self.col_sub.len()).collect(), self.scale, self.oracle_queries)
    }

    /// Pads the ambient space to a power of two with identity action.
    pub fn padded_pow2(&self) -> Self {
        let q = self.dim();
        let target = linalg::next_pow2(q);
        if target == q {
            return self.clone();
        }
        let id = CMatrix::identity(target - q, target - q);
        let u = linalg::direct_sum(&[self.unitary(), &id]);
        Self::raw(u, self.row_sub.clone(), self.col_sub.clone(), self.scale, self.oracle_queries)
    }

    /// Embeds the ambient space into `dim >= Q` with identity action.
    fn padded_to(&self, dim: usize) -> Self {
        let q = self.dim();
        if dim == q {
            return self.clone();
        }
        let id = CMatrix::identity(dim - q, dim - q);
        let u = linalg::direct_sum(&[self.unitary(), &id]);
        Self::raw(u, self.row_sub.clone(), self.col_sub.clone(), self.scale, self.oracle_queries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("encoding serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))
    }
}

/// `scale * U[row_sub, col_sub]`. Rectangular blocks are returned as plain
/// matrices.
pub fn extract_block(be: &BlockEncoding) -> CMatrix {
    be.raw_block() * c(be.scale)
}

/// `max |extract_block(be) - target|`.
pub fn verify_block_encoding(be: &BlockEncoding, target: &CMatrix) -> Result<f64> {
    if target.shape() != be.block_shape() {
        return Err(Error::DimMismatch { expected: be.block_shape(), found: target.shape() });
    }
    Ok(linalg::max_abs_diff(&extract_block(be), target))
}

/// `I (+) U`.
pub fn controlled(u: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(u.nrows(), u.ncols());
    linalg::direct_sum(&[&id, u])
}

/// Unit-scale encoding `[[A, sqrt(I - A A^dagger)], [sqrt(I - A^dagger A), -A^dagger]]`.
pub fn unitary_dilation(a: &CMatrix) -> Result<BlockEncoding> {
    let norm = linalg::spectral_norm(a);
    if norm > 1.0 + UNITARY_TOL {
        return Err(Error::NormExceeded { norm });
    }
    let (m, n) = a.shape();
    let left = CMatrix::identity(m, m) - linalg::matmul(a, &a.adjoint());
    let right = CMatrix::identity(n, n) - linalg::matmul(&a.adjoint(), a);
    let mut u = CMatrix::zeros(m + n, m + n);
    u.view_mut((0, 0), (m, n)).copy_from(a);
    u.view_mut((0, n), (m, m)).copy_from(&linalg::psd_sqrt(&left));
    u.view_mut((m, 0), (n, n)).copy_from(&linalg::psd_sqrt(&right));
    u.view_mut((m, n), (n, m)).copy_from(&(-a.adjoint()));
    Ok(BlockEncoding::raw(u, (0..m).collect(), (0..n).collect(), 1.0, 1))
}

/// Linear combination of unitaries `H = sum beta_l U_l`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LcuSpec {
    pub betas: Vec<f64>,
    pub unitaries: Vec<Operator>,
}

impl LcuSpec {
    pub fn new(betas: Vec<f64>, unitaries: Vec<Operator>) -> Result<Self> {
        let spec = Self { betas, unitaries };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() || self.betas.len() != self.unitaries.len() {
            return Err(Error::Invalid("LCU needs matching, nonempty betas and unitaries".into()));
        }
        if let Some(b) = self.betas.iter().find(|&&b| !(b > 0.0)) {
            return Err(Error::DomainError(format!("LCU weight {b} must be positive")));
        }
        let n = self.unitaries[0].dim();
        for (index, u) in self.unitaries.iter().enumerate() {
            if u.dim() != n {
                return Err(Error::ShapeMismatch { index, expected: (n, n), found: (u.dim(), u.dim()) });
            }
            let deviation = u.unitarity_deviation();
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(())
    }

    pub fn beta_sum(&self) -> f64 {
        self.betas.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }

    /// `sum beta_l U_l`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut h = CMatrix::zeros(n, n);
        for (b, u) in self.betas.iter().zip(&self.unitaries) {
            h += u.matrix() * c(*b);
        }
        h
    }
}

/// `PREPARE^dagger SELECT PREPARE` on a power-of-two ancilla register.
pub fn lcu_to_block_encoding(lcu: &LcuSpec) -> Result<BlockEncoding> {
    lcu.validate()?;
    let beta = lcu.beta_sum();
    let l = lcu.betas.len();
    let lp = linalg::next_pow2(l);
    let n = lcu.dim();
    let mut amp = CVector::zeros(lp);
    for (k, b) in lcu.betas.iter().enumerate() {
        amp[k] = c((b / beta).sqrt());
    }
    let prep = linalg::complete_unitary(&amp);
    let id = CMatrix::identity(n, n);
    let select = |k: usize| if k < l { lcu.unitaries[k].matrix() } else { &id };
    // block (a, b) of PREP^dagger SELECT PREP is sum_k conj(P[k,a]) P[k,b] U_k
    let mut u = CMatrix::zeros(lp * n, lp * n);
    for a in 0..lp {
        for b in 0..lp {
            let mut blk = CMatrix::zeros(n, n);
            for k in 0..lp {
                let w = prep[(k, a)].conj() * prep[(k, b)];
                if w != ZERO {
                    blk += select(k) * w;
                }
            }
            u.view_mut((a * n, b * n), (n, n)).copy_from(&blk);
        }
    }
    Ok(BlockEncoding::raw(u, (0..n).collect(), (0..n).collect(), beta, 1))
}

fn hadamard_conjugate(inner: [[&CMatrix; 2]; 2]) -> CMatrix {
    // (H (x) I) [[B00, B01], [B10, B11]] (H (x) I)
    let q = inner[0][0].nrows();
    let mut out = CMatrix::zeros(2 * q, 2 * q);
    for a in 0..2 {
        for b in 0..2 {
            let mut blk = CMatrix::zeros(q, q);
            for x in 0..2 {
                for y in 0..2 {
                    let sign = if (a * x + y * b) % 2 == 0 { 0.5 } else { -0.5 };
                    blk += inner[x][y] * c(sign);
                }
            }
            out.view_mut((a * q, b * q), (q, q)).copy_from(&blk);
        }
    }
    out
}

/// Block encoding of `A = ((T^dagger + I)/2) Pi` from a unit-scale encoding
/// `T` of `H' = (H - E)/lambda`. Returns `(V, F)` with `H - F = 2 lambda A^dagger A`
/// and `F = E - lambda`.
pub fn a_from_block_encoded_t(t: &BlockEncoding, lambda: f64, energy_shift: f64) -> Result<(BlockEncoding, f64)> {
    if (t.scale - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(format!("T must have unit scale, found {}", t.scale)));
    }
    if !t.is_square_block() {
        return Err(Error::Invalid("T must encode a square block on a single subspace".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::DomainError(format!("lambda {lambda} must be positive")));
    }
    let deviation = t.unitarity_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let q = t.dim();
    let id = CMatrix::identity(q, q);
    let zero = CMatrix::zeros(q, q);
    let t_dag = t.unitary().adjoint();
    let v = hadamard_conjugate([[&t_dag, &zero], [&zero, &id]]);
    let be = BlockEncoding::raw(v, (0..q).collect(), t.col_sub.clone(), 1.0, t.oracle_queries);
    Ok((be, energy_shift - lambda))
}

/// Block encoding of `H' = A^dagger A - I` from a unit-scale encoding `V` of `A`,
/// as `T = (I_2 (x) V)^dagger Vt (I_2 (x) V)` with
/// `Vt = |+><+| (x) (-I) + |-><-| (x) U_{P'}`.
///
/// `lambda` only fixes the interpretation `H' = (H - lambda)/lambda` for
/// `H = lambda A^dagger A`.
pub fn t_from_block_encoded_a(v: &BlockEncoding, lambda: f64) -> Result<BlockEncoding> {
    if !(lambda > 0.0) {
        return Err(Error::DomainError(format!("lambda {lambda} must be positive")));
    }
    let norm = linalg::spectral_norm(&extract_block(v));
    if norm > 1.0 + UNITARY_TOL {
        return Err(Error::NormExceeded { norm });
    }
    if (v.scale - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(format!("V must have unit scale, found {}", v.scale)));
    }
    let v = v.canonical();
    let q = v.dim();
    let m = v.row_sub.len();
    let vm = v.unitary();
    let vd = vm.adjoint();
    // Vt blocks are diagonal: (0,0) = (1,1) = P' - I and (0,1) = (1,0) = -P'
    let outside: Vec<Complex64> = (0..q).map(|i| if i < m { ZERO } else { -ONE }).collect();
    let inside: Vec<Complex64> = (0..q).map(|i| if i < m { -ONE } else { ZERO }).collect();
    let sandwich = |d: &[Complex64]| {
        let mut scaled = vm.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            row *= d[i];
        }
        linalg::matmul(&vd, &scaled)
    };
    let diag = sandwich(&outside);
    let off = sandwich(&inside);
    let mut u = CMatrix::zeros(2 * q, 2 * q);
    u.view_mut((0, 0), (q, q)).copy_from(&diag);
    u.view_mut((q, q), (q, q)).copy_from(&diag);
    u.view_mut((0, q), (q, q)).copy_from(&off);
    u.view_mut((q, 0), (q, q)).copy_from(&off);
    let n = v.col_sub.len();
    Ok(BlockEncoding::raw(u, (0..n).collect(), (0..n).collect(), 1.0, 2 * v.oracle_queries))
}

/// Block encoding of `H_SGA / sqrt(lambda) = |0><1| (x) A^dagger + |1><0| (x) A`,
/// with `A` zero-padded to a square of power-of-two size `M'`.
///
/// The returned unitary is hermitian, so it is self-inverse. Its block sits
/// on indices `a * 2Q + i` for `a` in `{0, 1}` and `i < M'`.
pub fn sga_block_encoding(v: &BlockEncoding) -> Result<BlockEncoding> {
    let mut v = v.canonical().padded_pow2();
    let (m, n) = v.block_shape();
    let mp = linalg::next_pow2(m.max(n));
    if mp > m {
        // I_2 (x) V adds zero rows from the second copy
        let q = v.dim();
        let u = linalg::direct_sum(&[v.unitary(), v.unitary()]);
        let mut rows: Vec<usize> = (0..m).collect();
        rows.extend(q..q + (mp - m));
        v = BlockEncoding::raw(u, rows, v.col_sub.clone(), v.scale, v.oracle_queries).canonical();
    }
    let q = v.dim();
    debug_assert!(q >= mp && q.is_power_of_two());
    let vm = v.unitary();
    let vd = vm.adjoint();
    // U_{P''} = 2P'' - I with P'' onto the first N coordinates
    let sign = |i: usize| if i < n { 1.0 } else { -1.0 };
    let mut up_vd = vd.clone();
    for (i, mut row) in up_vd.row_iter_mut().enumerate() {
        row *= c(sign(i));
    }
    let mut v_up = vm.clone();
    for (j, mut col) in v_up.column_iter_mut().enumerate() {
        col *= c(sign(j));
    }
    let w = [[&up_vd, &vd], [&v_up, vm]];
    // block (a, b; 1 - a, b') = (W[a][0] + (-1)^(b + b') W[a][1]) / 2
    let mut u = CMatrix::zeros(4 * q, 4 * q);
    for a in 0..2 {
        let plus = (w[a][0] + w[a][1]) * c(0.5);
        let minus = (w[a][0] - w[a][1]) * c(0.5);
        for b in 0..2 {
            for bp in 0..2 {
                let blk = if (b + bp) % 2 == 0 { &plus } else { &minus };
                u.view_mut((a * 2 * q + b * q, (1 - a) * 2 * q + bp * q), (q, q)).copy_from(blk);
            }
        }
    }
    let mut sub: Vec<usize> = (0..mp).collect();
    sub.extend(2 * q..2 * q + mp);
    Ok(BlockEncoding::raw(u, sub.clone(), sub, v.scale, 2 * v.oracle_queries))
}

/// Direct assembly of `|0><1| (x) A^dagger + |1><0| (x) A` for square `A`.
pub fn sga_matrix(a: &CMatrix) -> CMatrix {
    let (m, n) = a.shape();
    let mp = linalg::next_pow2(m.max(n));
    let mut padded = CMatrix::zeros(mp, mp);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let mut h = CMatrix::zeros(2 * mp, 2 * mp);
    h.view_mut((0, mp), (mp, mp)).copy_from(&padded.adjoint());
    h.view_mut((mp, 0), (mp, mp)).copy_from(&padded);
    h
}

/// Gap-amplifiable Hamiltonian together with a single encoding of its
/// stacked factor.
#[derive(Debug, Clone)]
pub struct AmplifiedEncoding {
    pub hamiltonian: GapAmpHamiltonian,
    pub encoding: BlockEncoding,
}

/// Combines `(lambda_l, V_l)` into one encoding of
/// `A = sum_l sqrt(lambda_l / lambda) |l> (x) A_l` with `lambda = sum lambda_l`.
///
/// Unit-scale inputs are used as given; other inputs are replaced by the
/// unitary dilation of their encoded block.
pub fn assemble_gap_amplifiable(terms: &[(f64, BlockEncoding)]) -> Result<AmplifiedEncoding> {
    if terms.is_empty() {
        return Err(Error::Invalid("no terms".into()));
    }
    let (m, n) = terms[0].1.block_shape();
    let mut factors = Vec::with_capacity(terms.len());
    let mut encodings = Vec::with_capacity(terms.len());
    for (index, (lambda_l, be)) in terms.iter().enumerate() {
        if be.block_shape() != (m, n) {
            return Err(Error::ShapeMismatch { index, expected: (m, n), found: be.block_shape() });
        }
        if !(*lambda_l > 0.0) {
            return Err(Error::DomainError(format!("term weight {lambda_l} must be positive")));
        }
        let a = extract_block(be);
        let unit = if (be.scale - 1.0).abs() <= 1e-12 { be.canonical() } else { unitary_dilation(&a)? };
        factors.push(GapAmpTerm { lambda: *lambda_l, a });
        encodings.push(unit);
    }
    let lambda: f64 = terms.iter().map(|(l, _)| l).sum();
    let l = terms.len();
    let lp = linalg::next_pow2(l);
    let q = linalg::next_pow2(encodings.iter().map(|e| e.dim()).max().unwrap_or(1));
    let encodings: Vec<BlockEncoding> = encodings.iter().map(|e| e.padded_to(q)).collect();

    let mut amp = CVector::zeros(lp);
    for (k, (lambda_l, _)) in terms.iter().enumerate() {
        amp[k] = c((lambda_l / lambda).sqrt());
    }
    let g = linalg::complete_unitary(&amp);
    let id = CMatrix::identity(q, q);
    // V = W (G (x) I) with W = sum_l |l><l| (x) V_l; block (k, b) is G[k, b] V_k
    let mut u = CMatrix::zeros(lp * q, lp * q);
    for k in 0..lp {
        let vk = if k < l { encodings[k].unitary() } else { &id };
        for b in 0..lp {
            let w = g[(k, b)];
            if w != ZERO {
                u.view_mut((k * q, b * q), (q, q)).copy_from(&(vk * w));
            }
        }
    }
    let rows: Vec<usize> = (0..l).flat_map(|k| (0..m).map(move |i| k * q + i)).collect();
    let encoding = BlockEncoding::raw(u, rows, (0..n).collect(), 1.0, 1);

    let mut hamiltonian = GapAmpHamiltonian::from_terms(factors, Some(lambda))?;
    hamiltonian.assembled_a = Some(extract_block(&encoding));
    Ok(AmplifiedEncoding { hamiltonian, encoding })
}
