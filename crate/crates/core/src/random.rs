//! Seeded random matrices for instance generation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary via QR with phase correction.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    (&g + g.adjoint()) * c(0.5)
}

/// `U diag(singular) W^dagger` with Haar `U`, `W`; `singular.len() <= min(rows, cols)`.
pub fn with_singular_values<R: Rng>(rows: usize, cols: usize, singular: &[f64], rng: &mut R) -> CMatrix {
    assert!(singular.len() <= rows.min(cols));
    let u = haar_unitary(rows, rng);
    let w = haar_unitary(cols, rng);
    let mut s = CMatrix::zeros(rows, cols);
    for (k, &v) in singular.iter().enumerate() {
        s[(k, k)] = c(v);
    }
    linalg::matmul(&linalg::matmul(&u, &s), &w.adjoint())
}

/// Real orthogonal matrix, for instances that should stay on the real solver.
pub fn orthogonal<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q.map(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary_and_seeded() {
        let a = haar_unitary(6, &mut rng(7));
        let b = haar_unitary(6, &mut rng(7));
        assert!(linalg::unitarity_deviation(&a) < 1e-13);
        assert_eq!(a, b);
    }

    #[test]
    fn prescribed_singular_values() {
        let a = with_singular_values(5, 3, &[0.9, 0.5, 0.1], &mut rng(1));
        let s = linalg::singular_values(&a);
        for (got, want) in s.iter().zip([0.9, 0.5, 0.1]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
