//! Real Chebyshev series on [-1, 1].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient magnitudes below this count as structural zeros.
pub const PARITY_TOL: f64 = 1e-12;
/// Admissible excess of `|P|` over 1 for normalized polynomials.
pub const NORMALIZED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Grid sup-norm record attached to an emitted polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Certificate {
    pub grid_points: usize,
    pub sup_error: f64,
    /// Max `|P|` over the full interval.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebPoly {
    pub coeffs: Vec<f64>,
    pub parity: Parity,
    pub normalized: bool,
    #[serde(default)]
    pub certificates: Option<Certificate>,
}

impl ChebPoly {
    /// Builds a polynomial and infers its parity from the coefficients.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        let parity = detect_parity(&coeffs);
        Self { coeffs, parity, normalized: false, certificates: None }
    }

    pub fn constant(v: f64) -> Self {
        Self::new(vec![v])
    }

    /// `T_k`.
    pub fn basis(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Clenshaw recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x)
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        if xs.len() * self.coeffs.len() < 1 << 16 {
            xs.iter().map(|&x| self.eval(x)).collect()
        } else {
            xs.par_iter().map(|&x| self.eval(x)).collect()
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut p = Self::new(self.coeffs.iter().map(|c| c * s).collect());
        p.parity = self.parity;
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) + other.coeffs.get(k).copied().unwrap_or(0.0))
            .collect();
        Self::new(c)
    }

    /// Product via `T_m T_n = (T_{m+n} + T_{|m-n|})/2`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.coeffs, &other.coeffs);
        let mut c = vec![0.0; a.len() + b.len() - 1];
        for (m, &am) in a.iter().enumerate() {
            if am == 0.0 {
                continue;
            }
            for (n, &bn) in b.iter().enumerate() {
                if bn == 0.0 {
                    continue;
                }
                let h = 0.5 * am * bn;
                c[m + n] += h;
                c[m.abs_diff(n)] += h;
            }
        }
        Self::new(c)
    }

    /// `P(T_2(x)) = P(2x^2 - 1)`, using `T_k(T_2(x)) = T_{2k}(x)`.
    pub fn compose_t2(&self) -> Self {
        let mut c = vec![0.0; 2 * self.coeffs.len() - 1];
        for (k, &v) in self.coeffs.iter().enumerate() {
            c[2 * k] = v;
        }
        Self::new(c)
    }

    /// Declared parity must match the coefficient zero pattern.
    pub fn require_definite_parity(&self) -> Result<Parity> {
        match detect_parity(&self.coeffs) {
            Parity::Mixed => Err(Error::MixedParity),
            p => Ok(p),
        }
    }

    /// Max `|P|` on a Chebyshev grid of `points` nodes plus the endpoints.
    pub fn max_abs_on_grid(&self, points: usize) -> f64 {
        let xs = chebyshev_grid(points);
        self.eval_many(&xs).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Rejects polynomials exceeding 1 on the standard 2048-node grid
    /// (or a grid at 16x the degree when that is larger).
    pub fn check_normalized(&self) -> Result<f64> {
        let points = (16 * self.degree()).max(2048);
        let max_abs = self.max_abs_on_grid(points);
        if max_abs > 1.0 + NORMALIZED_TOL {
            return Err(Error::UnnormalizedPolynomial { max_abs });
        }
        Ok(max_abs)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            basis: &'static str,
            #[serde(flatten)]
            poly: &'a ChebPoly,
        }
        serde_json::to_string(&Doc { basis: "chebyshev", poly: self }).expect("polynomial serializes")
    }
}

pub fn detect_parity(coeffs: &[f64]) -> Parity {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    let tol = PARITY_TOL * scale;
    let even = coeffs.iter().skip(1).step_by(2).all(|c| c.abs() <= tol);
    let odd = coeffs.iter().step_by(2).all(|c| c.abs() <= tol);
    match (even, odd) {
        (true, _) => Parity::Even,
        (false, true) => Parity::Odd,
        _ => Parity::Mixed,
    }
}

pub fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    let x2 = 2.0 * x;
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + x2 * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + x * b1 - b2
}

/// `cos(pi (j + 1/2) / n)` for `j < n`, plus the endpoints `+-1`, ascending.
pub fn chebyshev_grid(n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|j| -(std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos()).collect();
    xs.insert(0, -1.0);
    xs.push(1.0);
    xs
}

/// Chebyshev-density grid on `[a, b]`.
pub fn chebyshev_grid_on(a: f64, b: f64, n: usize) -> Vec<f64> {
    chebyshev_grid(n).into_iter().map(|x| 0.5 * (a + b) + 0.5 * (b - a) * x).collect()
}

/// Uniform grid with `n >= 2` points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
}

/// Interpolant through the `n` first-kind Chebyshev nodes, degree `n - 1`.
pub fn interpolate<F: Fn(f64) -> f64 + Sync>(f: F, n: usize) -> Vec<f64> {
    let values: Vec<f64> =
        (0..n).into_par_iter().map(|j| f((std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())).collect();
    // cos(pi k (2j + 1) / (2n)) from a table indexed mod 4n
    let table: Vec<f64> = (0..4 * n).map(|i| (std::f64::consts::PI * i as f64 / (2 * n) as f64).cos()).collect();
    (0..n)
        .into_par_iter()
        .map(|k| {
            let mut s = 0.0;
            for (j, v) in values.iter().enumerate() {
                s += v * table[(k * (2 * j + 1)) % (4 * n)];
            }
            let c = 2.0 * s / n as f64;
            if k == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}
