//! Dense operators, states and the exact spectral oracle.
//!
//! Everything approximate in the crate is checked against the quantities
//! computed here: full eigendecompositions, `exp(-itH)` built from them and
//! spectral projectors onto `[0, cutoff]`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};

/// Structural symmetry tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Spectral tolerance used for PSD checks, unitarity and reconstruction.
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Projections with smaller norm are treated as empty.
pub const EMPTY_PROJECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFlags {
    pub hermitian: bool,
    pub psd: bool,
}

/// Square complex matrix with verified structural flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: CMatrix,
    flags: OperatorFlags,
}

impl Operator {
    /// Wraps a square matrix without asserting any structure.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimMismatch {
                expected: (entries.nrows(), entries.nrows()),
                found: entries.shape(),
            });
        }
        Ok(Self { entries, flags: OperatorFlags::default() })
    }

    /// Wraps a matrix and verifies hermiticity.
    pub fn hermitian(entries: CMatrix) -> Result<Self> {
        let mut op = Self::new(entries)?;
        op.verify_hermitian()?;
        Ok(op)
    }

    /// Wraps a matrix and verifies it is hermitian and positive semidefinite.
    pub fn psd(entries: CMatrix) -> Result<Self> {
        let mut op = Self::hermitian(entries)?;
        op.verify_psd()?;
        Ok(op)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&d| c(d)));
        let mut op = Self::new(CMatrix::from_diagonal(&v)).expect("nonempty diagonal");
        op.flags.hermitian = true;
        op.flags.psd = diag.iter().all(|&d| d >= -SPECTRAL_TOL);
        op
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: CMatrix::identity(dim, dim), flags: OperatorFlags { hermitian: true, psd: true } }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: CMatrix::zeros(dim, dim), flags: OperatorFlags { hermitian: true, psd: true } }
    }

    pub fn verify_hermitian(&mut self) -> Result<()> {
        let asym = linalg::max_asymmetry(&self.entries);
        if asym > HERMITIAN_TOL {
            self.flags.hermitian = false;
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        self.flags.hermitian = true;
        Ok(())
    }

    pub fn verify_psd(&mut self) -> Result<()> {
        let decomp = spectral_decompose(self)?;
        let min = decomp.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -SPECTRAL_TOL {
            self.flags.psd = false;
            return Err(Error::DomainError(format!("minimum eigenvalue {min:e} is negative")));
        }
        self.flags.psd = true;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    pub fn is_hermitian(&self) -> bool {
        self.flags.hermitian
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.adjoint(), flags: self.flags }
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        Operator { entries: linalg::matmul(&self.entries, &other.entries), flags: OperatorFlags::default() }
    }

    pub fn scale(&self, s: f64) -> Operator {
        let flags = OperatorFlags { hermitian: self.flags.hermitian, psd: self.flags.psd && s >= 0.0 };
        Operator { entries: &self.entries * c(s), flags }
    }

    pub fn apply(&self, psi: &StateVector) -> CVector {
        &self.entries * psi.amplitudes()
    }

    /// `<psi|self|psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Complex64 {
        psi.amplitudes().dotc(&self.apply(psi))
    }

    pub fn unitarity_deviation(&self) -> f64 {
        linalg::unitarity_deviation(&self.entries)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        linalg::max_abs_diff(&self.entries, &other.entries)
    }

    pub fn spectral_norm(&self) -> f64 {
        linalg::spectral_norm(&self.entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&OperatorDoc::from(self)).expect("operator serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OperatorDoc = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        Operator::try_from(doc)
    }
}

/// Wire form: `{dim, entries: [[re, im], ...] row-major, flags}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
    pub flags: OperatorFlags,
}

impl From<&Operator> for OperatorDoc {
    fn from(op: &Operator) -> Self {
        let n = op.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = op.entries[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorDoc { dim: n, entries, flags: op.flags }
    }
}

impl TryFrom<OperatorDoc> for Operator {
    type Error = Error;

    fn try_from(doc: OperatorDoc) -> Result<Self> {
        let n = doc.dim;
        if n == 0 || doc.entries.len() != n * n {
            return Err(Error::DimMismatch { expected: (n, n), found: (doc.entries.len(), 1) });
        }
        let entries = CMatrix::from_fn(n, n, |i, j| {
            let [re, im] = doc.entries[i * n + j];
            Complex64::new(re, im)
        });
        let mut op = Operator::new(entries)?;
        if doc.flags.hermitian {
            op.verify_hermitian()?;
        }
        op.flags.psd = doc.flags.psd;
        Ok(op)
    }
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = OperatorDoc::deserialize(d)?;
        Operator::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Unit-norm complex state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Accepts amplitudes whose norm is 1 within 1e-12.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < EMPTY_PROJECTION_TOL {
            return Err(Error::EmptyProjection { norm });
        }
        Ok(Self { amplitudes: amplitudes / c(norm) })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0);
        Self { amplitudes: v }
    }

    /// Equal superposition over all basis states.
    pub fn uniform(dim: usize) -> Self {
        Self { amplitudes: CVector::from_element(dim, c(1.0 / (dim as f64).sqrt())) }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q f(Lambda) Q^dagger`.
    pub fn apply_function<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        linalg::conjugate_diagonal(&self.eigenvectors, &d)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_function(c)
    }

    /// Projector onto eigenvectors selected by `keep`.
    pub fn projector<F: Fn(f64) -> bool>(&self, keep: F) -> CMatrix {
        self.apply_function(|x| if keep(x) { c(1.0) } else { c(0.0) })
    }

    pub fn reconstruction_error(&self, original: &CMatrix) -> f64 {
        let r = self.reconstruct();
        let diff = &r - original;
        linalg::spectral_norm(&diff)
    }

    pub fn orthonormality_error(&self) -> f64 {
        linalg::unitarity_deviation(&self.eigenvectors)
    }
}

fn require_hermitian(h: &Operator) -> Result<()> {
    if !h.flags.hermitian {
        return Err(Error::NotHermitian { asymmetry: linalg::max_asymmetry(&h.entries) });
    }
    let asym = linalg::max_asymmetry(&h.entries);
    if asym > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(())
}

pub fn spectral_decompose(h: &Operator) -> Result<SpectralDecomp> {
    require_hermitian(h)?;
    let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(&h.entries);
    Ok(SpectralDecomp { eigenvalues, eigenvectors })
}

/// `exp(-i t H)` from the full spectrum.
pub fn exact_evolution(h: &Operator, t: f64) -> Result<Operator> {
    let decomp = spectral_decompose(h)?;
    Ok(evolution_from(&decomp, t))
}

pub fn evolution_from(decomp: &SpectralDecomp, t: f64) -> Operator {
    let u = decomp.apply_function(|x| Complex64::from_polar(1.0, -t * x));
    Operator { entries: u, flags: OperatorFlags::default() }
}

/// Eigenvalues within this slack of the cutoff count as inside it.
pub fn cutoff_slack(decomp: &SpectralDecomp) -> f64 {
    let scale = decomp.eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    SPECTRAL_TOL * scale
}

/// Projector onto eigenvectors with eigenvalue at most `cutoff`.
pub fn low_energy_projector(h: &Operator, cutoff: f64) -> Result<Operator> {
    if cutoff.is_nan() || cutoff < 0.0 {
        return Err(Error::DomainError(format!("cutoff {cutoff} must be nonnegative")));
    }
    let decomp = spectral_decompose(h)?;
    Ok(projector_from(&decomp, cutoff))
}

pub fn projector_from(decomp: &SpectralDecomp, cutoff: f64) -> Operator {
    let slack = cutoff_slack(decomp);
    let p = decomp.projector(|x| x <= cutoff + slack);
    Operator { entries: p, flags: OperatorFlags { hermitian: true, psd: true } }
}

/// Normalized `Pi_cutoff psi`.
pub fn project_to_low_energy(psi: &StateVector, h: &Operator, cutoff: f64) -> Result<StateVector> {
    let p = low_energy_projector(h, cutoff)?;
    StateVector::normalized(p.apply(psi))
}

/// `||(1 - Pi_cutoff) psi||`.
pub fn leakage(psi: &StateVector, decomp: &SpectralDecomp, cutoff: f64) -> f64 {
    let slack = cutoff_slack(decomp);
    let coeffs = decomp.eigenvectors.adjoint() * psi.amplitudes();
    decomp
        .eigenvalues
        .iter()
        .zip(coeffs.iter())
        .filter(|(&x, _)| x > cutoff + slack)
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grover(n: usize, x: usize) -> Operator {
        let s = 1.0 / (n as f64).sqrt();
        let m = CMatrix::from_fn(n, n, |i, j| {
            let mut v = -1.0 / n as f64;
            if i == j {
                v += 1.0 + s;
            }
            if i == x && j == x {
                v -= 1.0;
            }
            c(v)
        });
        Operator::hermitian(m).unwrap()
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let d = spectral_decompose(&Operator::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(d.eigenvalues.len(), 3);
        for (got, want) in d.eigenvalues.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn grover_four_spectrum() {
        let d = spectral_decompose(&grover(4, 1)).unwrap();
        for (got, want) in d.eigenvalues.iter().zip([0.0, 1.0, 1.5, 1.5]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn unflagged_operator_is_rejected() {
        let op = Operator::new(CMatrix::identity(2, 2)).unwrap();
        assert!(matches!(spectral_decompose(&op), Err(Error::NotHermitian { .. })));
        let bad = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(Operator::hermitian(bad), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn zero_generator_and_phase_flip() {
        let u = exact_evolution(&Operator::zeros(3), 2.7).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(3)) < 1e-15);
        let u = exact_evolution(&Operator::from_real_diagonal(&[0.0, 1.0]), PI).unwrap();
        let want = Operator::from_real_diagonal(&[1.0, -1.0]);
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn grover_transfer_at_quarter_period() {
        let n = 16;
        let h = grover(n, 5);
        let u = exact_evolution(&h, PI / 2.0 * 4.0).unwrap();
        let out = u.apply(&StateVector::uniform(n));
        assert!((out[5].norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn projector_rank_and_containment() {
        let p = low_energy_projector(&Operator::from_real_diagonal(&[0.0, 1.0, 2.0]), 0.5).unwrap();
        assert!(p.max_abs_diff(&Operator::from_real_diagonal(&[1.0, 0.0, 0.0])) < 1e-15);

        let h = grover(16, 3);
        let p = low_energy_projector(&h, 0.5).unwrap();
        let trace: f64 = (0..16).map(|i| p.matrix()[(i, i)].re).sum();
        assert!((trace - 2.0).abs() < 1e-10);
        let s = StateVector::uniform(16);
        assert!((p.apply(&s) - s.amplitudes()).norm() < 1e-10);
        let pp = p.mul(&p);
        assert!(pp.max_abs_diff(&p) < 1e-10);
    }

    #[test]
    fn projection_edge_cases() {
        let h = Operator::from_real_diagonal(&[0.0, 1.0, 2.0]);
        let psi = StateVector::basis(3, 0);
        let out = project_to_low_energy(&psi, &h, 0.5).unwrap();
        assert!((out.amplitudes() - psi.amplitudes()).norm() < 1e-15);
        let orth = StateVector::basis(3, 2);
        assert!(matches!(project_to_low_energy(&orth, &h, 0.5), Err(Error::EmptyProjection { .. })));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m = CMatrix::from_fn(3, 3, |i, j| Complex64::new(0.1 * i as f64 + 1.0 / 3.0, (j as f64).sqrt() * 1e-17));
        let op = Operator::new(m).unwrap();
        let back = Operator::from_json(&op.to_json()).unwrap();
        for (a, b) in op.matrix().iter().zip(back.matrix().iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
