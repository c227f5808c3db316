//! Feynman-Kitaev clock Hamiltonians and Gaussian wavepackets on the clock
//! chain.
//!
//! A circuit `U = U_G ... U_1` on `n` qubits is padded with `c1 G` identities
//! before and `(c2 - 1) G` after, giving `G' = (c1 + c2) G` steps `V_x`. After
//! conjugating by the history-state map the clock Hamiltonian acts as the
//! periodic tight-binding chain `H_FP = (I - X)^dagger (I - X)` on `G'` sites,
//! which is where all dynamics run. History states `|h_j> = V_j ... V_1 |0>`
//! are built only to decode the computational register.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gapamp::GapAmpHamiltonian;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::operator::{Operator, StateVector};

/// Largest chain length handled.
pub const MAX_GPRIME: usize = 4096;
/// Largest register size accepted for circuits.
pub const MAX_QUBITS: usize = 6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateDoc {
    pub name: String,
    pub qubits: Vec<usize>,
    /// Row-major `[re, im]` entries for gates not built in.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn builtin(name: &str) -> Option<CMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let real = |n: usize, v: &[f64]| CMatrix::from_row_iterator(n, n, v.iter().map(|&x| c(x)));
    Some(match name.to_ascii_uppercase().as_str() {
        "I" => CMatrix::identity(2, 2),
        "H" => real(2, &[h, h, h, -h]),
        "X" => real(2, &[0.0, 1.0, 1.0, 0.0]),
        "Z" => real(2, &[1.0, 0.0, 0.0, -1.0]),
        "T" => CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])),
        "CNOT" | "CX" => real(4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]),
        _ => return None,
    })
}

/// `gate` acting on `qubits` of an `n`-qubit register; qubit 0 is the most
/// significant bit and `qubits[0]` the most significant gate input.
pub fn embed_gate(gate: &CMatrix, qubits: &[usize], n: usize) -> Result<CMatrix> {
    let k = qubits.len();
    if gate.shape() != (1 << k, 1 << k) {
        return Err(Error::DimMismatch { expected: (1 << k, 1 << k), found: gate.shape() });
    }
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k || qubits.iter().any(|&q| q >= n) {
        return Err(Error::Invalid(format!("gate qubits {qubits:?} invalid for {n} qubits")));
    }
    let dim = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let sub = |i: usize| qubits.iter().fold(0, |acc, &q| (acc << 1) | usize::from(i & bit(q) != 0));
    let mask: usize = qubits.iter().map(|&q| bit(q)).sum();
    let place = |rest: usize, s: usize| {
        qubits.iter().enumerate().fold(rest, |acc, (j, &q)| if s >> (k - 1 - j) & 1 == 1 { acc | bit(q) } else { acc })
    };
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !mask;
        let sc = sub(col);
        for sr in 0..(1 << k) {
            out[(place(rest, sr), col)] = gate[(sr, sc)];
        }
    }
    Ok(out)
}

/// JSON gate list `[{name, qubits, matrix?}]` to full-register unitaries.
pub fn parse_circuit(json: &str, n: usize) -> Result<Vec<Operator>> {
    let docs: Vec<GateDoc> = serde_json::from_str(json).map_err(|e| Error::Invalid(format!("circuit: {e}")))?;
    docs.iter().map(|g| gate_operator(g, n)).collect()
}

pub fn gate_operator(doc: &GateDoc, n: usize) -> Result<Operator> {
    let m = match (&doc.matrix, builtin(&doc.name)) {
        (Some(rows), _) => {
            let d = rows.len();
            if rows.iter().any(|r| r.len() != d) {
                return Err(Error::Invalid(format!("gate {} matrix is not square", doc.name)));
            }
            CMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))
        }
        (None, Some(m)) => m,
        (None, None) => return Err(Error::Invalid(format!("unknown gate {} without a matrix", doc.name))),
    };
    Operator::new(embed_gate(&m, &doc.qubits, n)?)
}

#[derive(Debug, Clone)]
pub struct ClockSpec {
    pub n_qubits: usize,
    pub gates: Vec<Operator>,
    pub c1: usize,
    pub c2: usize,
}

impl ClockSpec {
    pub fn new(n_qubits: usize, gates: Vec<Operator>, c1: usize, c2: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::DomainError(format!("{n_qubits} qubits outside 1..={MAX_QUBITS}")));
        }
        if gates.is_empty() {
            return Err(Error::DomainError("circuit has no gates".into()));
        }
        for (k, v) in [("c1", c1), ("c2", c2)] {
            if v < 2 || v % 2 != 0 {
                return Err(Error::DomainError(format!("{k} = {v} must be even and at least 2")));
            }
        }
        let dim = 1 << n_qubits;
        for (index, g) in gates.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::ShapeMismatch { index, expected: (dim, dim), found: (g.dim(), g.dim()) });
            }
            let deviation = g.unitarity_deviation();
            if deviation > 1e-10 {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { n_qubits, gates, c1, c2 })
    }

    /// `G` identity gates.
    pub fn identity_circuit(n_qubits: usize, g: usize, c1: usize, c2: usize) -> Result<Self> {
        Self::new(n_qubits, vec![Operator::identity(1 << n_qubits); g], c1, c2)
    }

    pub fn g(&self) -> usize {
        self.gates.len()
    }

    pub fn gprime(&self) -> usize {
        (self.c1 + self.c2) * self.g()
    }

    pub fn register_dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// `V_x` for `1 <= x <= G'`; `None` for identities.
    pub fn step(&self, x: usize) -> Option<&Operator> {
        let g = self.g();
        let start = self.c1 * g;
        (x > start && x <= start + g).then(|| &self.gates[x - start - 1])
    }

    /// `U_G ... U_1`.
    pub fn circuit_unitary(&self) -> CMatrix {
        let d = self.register_dim();
        self.gates.iter().fold(CMatrix::identity(d, d), |acc, g| linalg::matmul(g.matrix(), &acc))
    }
}

/// Periodic tight-binding chain of a clock.
#[derive(Debug, Clone)]
pub struct ClockChain {
    pub spec: ClockSpec,
    /// `2I - X - X^dagger` on `G'` sites.
    pub h: Operator,
}

/// Cyclic shift `X|x> = |x+1 mod n>`.
pub fn cyclic_shift(n: usize) -> CMatrix {
    let mut x = CMatrix::zeros(n, n);
    for i in 0..n {
        x[((i + 1) % n, i)] = c(1.0);
    }
    x
}

/// Tight-binding chain for `spec`.
pub fn clock_hamiltonian(spec: &ClockSpec) -> Result<ClockChain> {
    let gp = spec.gprime();
    if gp > MAX_GPRIME {
        return Err(Error::TooLarge { gprime: gp, limit: MAX_GPRIME });
    }
    let x = cyclic_shift(gp);
    let m = CMatrix::identity(gp, gp) * c(2.0) - &x - x.adjoint();
    Ok(ClockChain { spec: spec.clone(), h: Operator::psd(m)? })
}

impl ClockChain {
    pub fn gprime(&self) -> usize {
        self.spec.gprime()
    }

    /// `2 (1 - cos(2 pi k / G'))`, ascending.
    pub fn closed_form_eigenvalues(&self) -> Vec<f64> {
        let gp = self.gprime();
        let mut v: Vec<f64> =
            (0..gp).map(|k| 2.0 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / gp as f64).cos())).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `H_FP = 4 A^dagger A` with `A = (I - X)/2`.
    pub fn ga_form(&self) -> Result<GapAmpHamiltonian> {
        let gp = self.gprime();
        let a = (CMatrix::identity(gp, gp) - cyclic_shift(gp)) * c(0.5);
        GapAmpHamiltonian::single(4.0, a)
    }

    /// `|h_j> = V_j ... V_1 |0...0>` for `j = 0..G'`.
    pub fn history_states(&self) -> Vec<CVector> {
        let mut h0 = CVector::zeros(self.spec.register_dim());
        h0[0] = c(1.0);
        self.history_states_from(&h0)
    }

    /// `V_j ... V_1 |start>` for `j = 0..G'`.
    pub fn history_states_from(&self, start: &CVector) -> Vec<CVector> {
        let mut h = start.clone();
        let mut out = Vec::with_capacity(self.gprime());
        out.push(h.clone());
        for x in 1..self.gprime() {
            if let Some(v) = self.spec.step(x) {
                h = v.matrix() * &h;
            }
            out.push(h.clone());
        }
        out
    }

    /// Clock Hamiltonian on register (x) clock, index `s G' + x`.
    pub fn full_hamiltonian(&self) -> Result<Operator> {
        let gp = self.gprime();
        let d = self.spec.register_dim();
        if gp * d > MAX_GPRIME {
            return Err(Error::TooLarge { gprime: gp * d, limit: MAX_GPRIME });
        }
        let id = CMatrix::identity(d, d);
        let mut h = CMatrix::zeros(d * gp, d * gp);
        for x in 1..=gp {
            let (to, from) = (x % gp, x - 1);
            let v = self.spec.step(x).map_or(&id, |o| o.matrix());
            for a in 0..d {
                h[(a * gp + to, a * gp + to)] += c(1.0);
                h[(a * gp + from, a * gp + from)] += c(1.0);
                for b in 0..d {
                    h[(a * gp + to, b * gp + from)] -= v[(a, b)];
                    h[(b * gp + from, a * gp + to)] -= v[(a, b)].conj();
                }
            }
        }
        Operator::hermitian(h)
    }

    /// `sum_j psi_j |h_j> (x) |j>` in the index order of [`Self::full_hamiltonian`].
    pub fn lift(&self, chain_state: &CVector) -> CVector {
        let gp = self.gprime();
        let d = self.spec.register_dim();
        let hist = self.history_states();
        let mut out = CVector::zeros(d * gp);
        for (j, h) in hist.iter().enumerate() {
            for a in 0..d {
                out[a * gp + j] = h[a] * chain_state[j];
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WavepacketSpec {
    pub x0: usize,
    pub sigma_hat: f64,
    pub p0_hat: f64,
}

impl WavepacketSpec {
    /// Centered at `x0 = c1 G / 2`.
    pub fn centered(spec: &ClockSpec, sigma_hat: f64, p0_hat: f64) -> Self {
        Self { x0: spec.c1 * spec.g() / 2, sigma_hat, p0_hat }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_hat * self.x0 as f64
    }

    pub fn p0(&self) -> f64 {
        self.p0_hat / self.x0 as f64
    }
}

#[derive(Debug, Clone)]
pub struct Wavepacket {
    /// Amplitudes on the `G'` chain sites.
    pub state: StateVector,
    pub eta: f64,
    /// `sum_x |psi(x) - psi(x-1)|^2`, periodic.
    pub energy: f64,
}

/// `psi(x) = eta exp(-(x - x0)^2 / 2 sigma^2 + i p0 x)` on `0..=c1 G`.
pub fn gaussian_wavepacket(wp: &WavepacketSpec, spec: &ClockSpec) -> Result<Wavepacket> {
    let end = spec.c1 * spec.g();
    if wp.x0 == 0 || wp.x0 > end {
        return Err(Error::DomainError(format!("x0 = {} outside (0, {end}]", wp.x0)));
    }
    if !(wp.sigma_hat > 0.0 && wp.sigma_hat.is_finite() && wp.p0_hat.is_finite()) {
        return Err(Error::DomainError(format!("need sigma_hat > 0 and finite p0_hat, got {} and {}", wp.sigma_hat, wp.p0_hat)));
    }
    let (x0, sigma, p0) = (wp.x0 as f64, wp.sigma(), wp.p0());
    let gauss = |x: f64, s2: f64| (-(x - x0).powi(2) / s2).exp();
    let eta = (0..=end).map(|x| gauss(x as f64, sigma * sigma)).sum::<f64>().powf(-0.5);
    let gp = spec.gprime();
    let mut v = CVector::zeros(gp);
    for x in 0..=end {
        let xf = x as f64;
        v[x] = Complex64::from_polar(eta * gauss(xf, 2.0 * sigma * sigma), p0 * xf);
    }
    let energy = (0..gp).map(|x| (v[x] - v[(x + gp - 1) % gp]).norm_sqr()).sum();
    Ok(Wavepacket { state: StateVector::new(v)?, eta, energy })
}
