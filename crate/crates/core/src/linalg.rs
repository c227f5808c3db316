//! Dense kernels shared by the operator and encoding layers.
//!
//! nalgebra's generic complex product does not reach the tuned real gemm
//! path, so complex products are split into four real products here.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Complex matrix product routed through real gemm.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    if a.nrows() * a.ncols() * b.ncols() < 32 * 32 * 32 {
        return a * b;
    }
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let a_real = ai.iter().all(|&x| x == 0.0);
    let b_real = bi.iter().all(|&x| x == 0.0);
    match (a_real, b_real) {
        (true, true) => (&ar * &br).map(c),
        (true, false) => {
            let re = &ar * &br;
            let im = &ar * &bi;
            re.zip_map(&im, Complex64::new)
        }
        (false, true) => {
            let re = &ar * &br;
            let im = &ai * &br;
            re.zip_map(&im, Complex64::new)
        }
        (false, false) => {
            let re = &ar * &br - &ai * &bi;
            let im = &ar * &bi + &ai * &br;
            re.zip_map(&im, Complex64::new)
        }
    }
}

/// `a * diag(d) * a^dagger` for a unitary-column matrix `a`.
pub fn conjugate_diagonal(a: &CMatrix, d: &[Complex64]) -> CMatrix {
    let mut scaled = a.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= d[j];
    }
    matmul(&scaled, &a.adjoint())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a hermitian matrix with ascending eigenvalues.
/// Real symmetric input takes the real solver.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let (values, vectors) = if is_real(m) {
        let eig = SymmetricEigen::new(m.map(|z| z.re));
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors.map(c))
    } else {
        let eig = SymmetricEigen::new(m.clone());
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |r, k| vectors[(r, order[k])]);
    (sorted_values, sorted_vectors)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = if m.nrows() >= m.ncols() {
        matmul(&m.adjoint(), m)
    } else {
        matmul(m, &m.adjoint())
    };
    let (vals, _) = hermitian_eigen(&gram);
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Deviation of `u^dagger u` from the identity, in max-abs entry norm.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let g = matmul(&u.adjoint(), u);
    max_abs_diff(&g, &CMatrix::identity(u.nrows(), u.ncols()))
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[&CMatrix]) -> CMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut k) = (0, 0);
    for b in blocks {
        out.view_mut((r, k), b.shape()).copy_from(*b);
        r += b.nrows();
        k += b.ncols();
    }
    out
}

/// Hermitian square root of a PSD matrix; negative rounding noise is clipped.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d: Vec<Complex64> = vals.iter().map(|&v| c(v.max(0.0).sqrt())).collect();
    conjugate_diagonal(&vecs, &d)
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Orthonormal completion of the given first column by Gram-Schmidt against
/// the standard basis in index order.
pub fn complete_unitary(first: &CVector) -> CMatrix {
    let n = first.len();
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    cols.push(first.normalize());
    let mut e = 0;
    while cols.len() < n && e < n {
        let mut v = CVector::zeros(n);
        v[e] = ONE;
        // two passes keep the basis orthonormal to rounding
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / c(norm));
        }
        e += 1;
    }
    CMatrix::from_columns(&cols)
}
