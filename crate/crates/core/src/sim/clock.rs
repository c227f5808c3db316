//! Propagation of a wavepacket through a clock-encoded circuit.
//!
//! The chain is evolved with the exact tight-binding propagator on the line,
//! `<x| e^{-itH} |y> = e^{-2it} i^{x-y} J_{x-y}(2t)`, which is the periodic
//! `G'`-site chain unwrapped. A site `s = j + w G'` decodes to the register
//! state `V_j ... V_1 U^w |0>`: each forward crossing of the periodic
//! boundary leaves the whole circuit applied once more, each backward
//! crossing undoes it, which the bare `G'`-site picture cannot record.
//! Packets that never reach the boundary see exactly the periodic chain.
//! The map from line sites to (clock site, register) intertwines the two
//! Hamiltonians, so amplitudes landing on the same clock site from different
//! windings add coherently.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::operator;
use crate::poly::bessel::bessel_j_all;
use crate::zoo::clock::{clock_hamiltonian, gaussian_wavepacket, ClockSpec, WavepacketSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClockOutcome {
    /// `1/2 || U|0><0|U^dagger - rho_n(t) ||_1`.
    pub trace_distance: f64,
    /// `<0| U^dagger rho_n(t) U |0>`.
    pub circuit_fidelity: f64,
    pub t: f64,
    pub gprime: usize,
    /// `<psi|H_FP|psi>` of the initial chain state.
    pub initial_energy: f64,
    /// Weight that reached past the final padding or before the start.
    pub wrapped_weight: f64,
}

/// Line amplitudes `phi(s, t)` for an initial state on sites `0..len`,
/// returned with the first site index.
fn evolve_on_line(init: &CVector, t: f64) -> (i64, Vec<Complex64>) {
    let len = init.len() as i64;
    let reach = (2.0 * t + 12.0 * (2.0 * t).cbrt() + 40.0).ceil() as i64;
    let jn = bessel_j_all(reach as usize, 2.0 * t);
    let kernel = |m: i64| -> Complex64 {
        let k = m.unsigned_abs() as usize;
        if k > reach as usize {
            return c(0.0);
        }
        // J_{-k} = (-1)^k J_k and i^m
        let j = if m < 0 && k % 2 == 1 { -jn[k] } else { jn[k] };
        Complex64::i().powi((m.rem_euclid(4)) as i32) * j
    };
    let start = -reach;
    let total = (len + 2 * reach) as usize;
    let global = Complex64::from_polar(1.0, -2.0 * t);
    let mut out = vec![c(0.0); total];
    for (y, &a) in init.iter().enumerate() {
        if a == c(0.0) {
            continue;
        }
        for (idx, o) in out.iter_mut().enumerate() {
            let s = start + idx as i64;
            let m = s - y as i64;
            if m.abs() <= reach {
                *o += global * kernel(m) * a;
            }
        }
    }
    (start, out)
}

/// Trace distance to `U|0>` and circuit fidelity after time `t = t_hat x0^2`.
///
/// With `delta_fraction = f`, the packet is first projected onto the chain
/// eigenvalues at most `f / G^2`.
pub fn clock_propagation_fidelity(
    spec: &ClockSpec,
    wp: &WavepacketSpec,
    t_hat: f64,
    delta_fraction: Option<f64>,
) -> Result<ClockOutcome> {
    if !(t_hat >= 0.0 && t_hat.is_finite()) {
        return Err(Error::DomainError(format!("t_hat = {t_hat} must be nonnegative")));
    }
    let chain = clock_hamiltonian(spec)?;
    let packet = gaussian_wavepacket(wp, spec)?;
    let mut init = packet.state.clone();
    if let Some(f) = delta_fraction {
        if !(f > 0.0) {
            return Err(Error::DomainError(format!("Delta fraction {f} must be positive")));
        }
        let cutoff = f / (spec.g() as f64).powi(2);
        init = operator::project_to_low_energy(&init, &chain.h, cutoff)?;
    }
    let initial_energy = chain.h.expectation(&init).re;
    let t = t_hat * (wp.x0 as f64).powi(2);
    let gp = spec.gprime() as i64;
    let (start, amps) = evolve_on_line(init.amplitudes(), t);

    let d = spec.register_dim();
    let u = spec.circuit_unitary();
    // register amplitude at each clock site, summed coherently over windings
    let mut at_site = vec![CVector::zeros(d); gp as usize];
    let mut wrapped = 0.0;
    let mut winding_cache: Vec<(i64, Vec<CVector>)> = Vec::new();
    for (idx, a) in amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p < 1e-300 {
            continue;
        }
        let s = start + idx as i64;
        let (w, j) = (s.div_euclid(gp), s.rem_euclid(gp) as usize);
        if w != 0 {
            wrapped += p;
        }
        let states = match winding_cache.iter().position(|(k, _)| *k == w) {
            Some(i) => &winding_cache[i].1,
            None => {
                let mut zero = CVector::zeros(d);
                zero[0] = c(1.0);
                winding_cache.push((w, chain.history_states_from(&(matrix_power(&u, w) * zero))));
                &winding_cache.last().expect("just pushed").1
            }
        };
        at_site[j] += &states[j] * *a;
    }
    let rho = at_site.iter().fold(CMatrix::zeros(d, d), |acc, v| acc + v * v.adjoint());
    let mut target = CVector::zeros(d);
    target[0] = c(1.0);
    let target = &u * target;
    let circuit_fidelity = target.dotc(&(&rho * &target)).re;
    let diff = &target * target.adjoint() - &rho;
    let (vals, _) = linalg::hermitian_eigen(&((&diff + diff.adjoint()) * c(0.5)));
    let trace_distance = 0.5 * vals.iter().map(|v| v.abs()).sum::<f64>();
    Ok(ClockOutcome { trace_distance, circuit_fidelity, t, gprime: spec.gprime(), initial_energy, wrapped_weight: wrapped })
}

fn matrix_power(u: &CMatrix, w: i64) -> CMatrix {
    let base = if w < 0 { u.adjoint() } else { u.clone() };
    let n = u.nrows();
    let mut out = CMatrix::identity(n, n);
    for _ in 0..w.unsigned_abs() {
        out = &base * out;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_propagator_matches_periodic_chain() {
        let spec = ClockSpec::identity_circuit(1, 4, 2, 6).unwrap();
        let chain = clock_hamiltonian(&spec).unwrap();
        let wp = WavepacketSpec::centered(&spec, 0.5, 2.0);
        let psi = gaussian_wavepacket(&wp, &spec).unwrap().state;
        let t = 3.0;
        let exact = operator::exact_evolution(&chain.h, t).unwrap().apply(&psi);
        let (start, amps) = evolve_on_line(psi.amplitudes(), t);
        let gp = spec.gprime() as i64;
        let mut folded = vec![c(0.0); gp as usize];
        for (idx, a) in amps.iter().enumerate() {
            folded[(start + idx as i64).rem_euclid(gp) as usize] += a;
        }
        let err = folded.iter().zip(exact.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn winding_decode_matches_full_clock_hamiltonian() {
        let gates = crate::zoo::clock::parse_circuit(r#"[{"name":"H","qubits":[0]},{"name":"CNOT","qubits":[0,1]}]"#, 2).unwrap();
        let spec = ClockSpec::new(2, gates, 2, 2).unwrap();
        let chain = clock_hamiltonian(&spec).unwrap();
        let full = chain.full_hamiltonian().unwrap();
        // leftward packet crosses the boundary well before t = 4
        for p0_hat in [-3.0, 3.0] {
            let wp = WavepacketSpec::centered(&spec, 0.4, p0_hat);
            let psi = gaussian_wavepacket(&wp, &spec).unwrap().state;
            let t_hat = 4.0 / (wp.x0 as f64).powi(2);
            let out = clock_propagation_fidelity(&spec, &wp, t_hat, None).unwrap();
            let lifted = crate::operator::StateVector::new(chain.lift(psi.amplitudes())).unwrap();
            let evolved = operator::exact_evolution(&full, 4.0).unwrap().apply(&lifted);
            // register marginal of the full-space state
            let gp = spec.gprime();
            let d = spec.register_dim();
            let rho = CMatrix::from_fn(d, d, |a, b| (0..gp).map(|x| evolved[a * gp + x] * evolved[b * gp + x].conj()).sum());
            let u0 = spec.circuit_unitary().column(0).into_owned();
            let fid = u0.dotc(&(&rho * &u0)).re;
            assert!((fid - out.circuit_fidelity).abs() < 1e-10, "{fid} vs {}", out.circuit_fidelity);
        }
    }
}
