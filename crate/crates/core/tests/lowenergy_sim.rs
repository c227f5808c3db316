use lowensim_core::encoding::{t_from_block_encoded_a, unitary_dilation};
use lowensim_core::linalg::{self, c, CMatrix};
use lowensim_core::operator::{Operator, StateVector};
use lowensim_core::random;
use lowensim_core::sim::*;
use lowensim_core::zoo::expander::psi1_state;
use lowensim_core::zoo::*;
use lowensim_core::Error;

#[test]
fn regime_examples() {
    let p = choose_gamma(100.0, 1.0, 10.0, 1e-2).unwrap();
    assert_eq!(p.regime, Regime::TimeDominated);
    assert_eq!(p.gamma, 1.0);
    let p = choose_gamma(10.0, 1e-3, 100.0, 1e-6).unwrap();
    assert_eq!(p.regime, Regime::Intermediate);
    assert!((p.gamma - 1e6f64.ln() / 10.0).abs() < 1e-12);
    assert!((p.gamma - 1.38).abs() < 0.01);
    let p = choose_gamma(0.01, 0.5, 1.0, 1e-6).unwrap();
    assert_eq!(p.regime, Regime::ErrorDominated);
    assert_eq!(p.gamma, 1.0);
    assert!(matches!(choose_gamma(1e-3, 1e-3, 1.0, 1e-2), Err(Error::PreconditionViolated(_))));
}

#[test]
fn predicted_degree_uses_frozen_constants() {
    let k = constants();
    let (t, lambda, gamma, eps) = (30.0f64, 1.0f64, 0.05f64, 1e-4f64);
    let want = (k.degree.c1 * t * (lambda * gamma).sqrt() + k.degree.c2 * (lambda / gamma).sqrt() * (1.0 / eps).ln()).ceil();
    assert_eq!(predicted_degree(t, lambda, gamma, eps), want as usize);
}

#[test]
fn zero_hamiltonian_is_identity() {
    let a = CMatrix::zeros(3, 3);
    let input = SimInput::V { encoding: unitary_dilation(&a).unwrap(), lambda: 1.0 };
    let psi = StateVector::uniform(3);
    let r = simulate_low_energy(&input, 7.0, 0.1, 1e-3, &psi, SimOptions::default()).unwrap();
    assert!((r.overlap - 1.0).abs() < 1e-3);
    assert!(r.overlap <= 1.0 + 1e-9);
}

#[test]
fn grover_sixteen_reaches_marked_state() {
    let n = 16;
    let fam = GroverGaFamily::new(n, vec![11]).unwrap();
    let input = SimInput::from_gap_amp(&fam.to_gap_amp().unwrap()).unwrap();
    let psi = fam.uniform_state().unwrap();
    let eps = 1e-3;
    let t = std::f64::consts::PI * n as f64 / 4.0;
    let opts = SimOptions { gamma_override: Some(fam.delta()), ..Default::default() };
    let r = simulate_low_energy(&input, t, fam.delta(), eps, &psi, opts).unwrap();
    assert!(r.overlap >= 0.999, "{}", r.overlap);
    assert!(r.meets_guarantee());
    let out = &r.operator * psi.amplitudes();
    let marked = fam.marked_state().unwrap();
    assert!(out.dotc(marked.amplitudes()).norm() >= 1.0 - eps);
    assert_eq!(r.ledger.encoding_uses, 3 * (r.ledger.degree_cos + r.ledger.degree_sin));
}

#[test]
fn leakage_policy() {
    let n = 16;
    let fam = GroverGaFamily::new(n, vec![2]).unwrap();
    let input = SimInput::from_gap_amp(&fam.to_gap_amp().unwrap()).unwrap();
    let t = 10.0;
    // |s> plus a small excited component
    let mut v = fam.uniform_state().unwrap().amplitudes().clone();
    v[5] += c(1e-4);
    v[6] -= c(1e-4);
    let psi = StateVector::normalized(v).unwrap();
    let strict = simulate_low_energy(&input, t, fam.delta(), 1e-2, &psi, SimOptions::default());
    assert!(matches!(strict, Err(Error::StateNotLowEnergy { .. })));
    let opts = SimOptions { allow_leakage: true, ..Default::default() };
    let r = simulate_low_energy(&input, t, fam.delta(), 1e-2, &psi, opts).unwrap();
    assert!(r.leakage > 1e-8 && r.leakage < 1e-2);
    assert!((r.guarantee - (1.0 - 1e-2 - 2.0 * r.leakage)).abs() < 1e-15);
    assert!(r.meets_guarantee());
}

#[test]
fn v_and_t_entry_points_agree() {
    let mut r = random::rng(31);
    let a = random::with_singular_values(4, 4, &[0.9, 0.5, 0.12, 0.05], &mut r);
    let lambda = 2.0;
    let v = unitary_dilation(&a).unwrap();
    let t_enc = t_from_block_encoded_a(&v, lambda).unwrap();
    let h = Operator::psd(linalg::matmul(&a.adjoint(), &a) * c(lambda)).unwrap();
    let d = lowensim_core::operator::spectral_decompose(&h).unwrap();
    let delta = 0.03;
    let psi = StateVector::normalized(d.eigenvectors.column(0) + d.eigenvectors.column(1) * c(0.5)).unwrap();
    let (time, eps) = (40.0, 1e-6);
    let rv = simulate_low_energy(&SimInput::V { encoding: v.clone(), lambda }, time, delta, eps, &psi, SimOptions::default()).unwrap();
    let rt = simulate_low_energy(
        &SimInput::T { encoding: t_enc, lambda, energy_shift: lambda },
        time,
        delta,
        eps,
        &psi,
        SimOptions::default(),
    )
    .unwrap();
    // both approximate the same evolution on the low-energy state
    assert!(rv.residual_norm <= eps && rt.residual_norm <= eps);
    let (ov, ot) = (&rv.operator * psi.amplitudes(), &rt.operator * psi.amplitudes());
    assert!((ov - ot).norm() <= 2.0 * eps);
    // T costs two V queries per use and doubles the effective lambda
    assert_eq!(rt.queries_per_use, 2 * rv.queries_per_use);
    assert_eq!(rt.plan.lambda, 2.0 * rv.plan.lambda);
}

#[test]
fn baseline_qsp_cases() {
    let mut r = random::rng(4);
    let h = random::hermitian(8, &mut r);
    let lambda = linalg::spectral_norm(&h);
    let be = unitary_dilation(&(&h * c(1.0 / lambda))).unwrap();
    let psi = StateVector::uniform(8);
    let zero = baseline_qsp(&be, 0.0, lambda, 1e-4, &psi).unwrap();
    assert!((zero.overlap - 1.0).abs() < 1e-4);
    let t = 30.0 / lambda;
    let eps = 1e-4;
    let rep = baseline_qsp(&be, t, lambda, eps, &psi).unwrap();
    assert!(rep.overlap >= 1.0 - eps);
    let closed = std::f64::consts::E * 30.0 / 2.0 + (1.0 / eps).ln();
    let deg = rep.ledger.degree_cos.max(rep.ledger.degree_sin) as f64;
    assert!(deg <= 2.0 * closed && deg >= closed / 2.0, "{deg} vs {closed}");
    let d1 = baseline_qsp(&be, 50.0 / lambda, lambda, eps, &psi).unwrap();
    let d2 = baseline_qsp(&be, 100.0 / lambda, lambda, eps, &psi).unwrap();
    let ratio = d2.ledger.encoding_uses as f64 / d1.ledger.encoding_uses as f64;
    assert!((1.8..=2.2).contains(&ratio), "{ratio}");
}

#[test]
fn random_time_cases() {
    let g = Graph::random_regular(16, 3, 7).unwrap();
    let e = expander_ga_hamiltonian(&g, 0).unwrap();
    let phi0 = StateVector::new(e.decomp.eigenvectors.column(0).into_owned()).unwrap();
    let fixed = random_time_projection(e.operator(), &phi0, 3.0, None).unwrap();
    assert!((fixed.success_prob - 1.0).abs() < 1e-10);
    let psi = psi1_state(16, 0);
    let mut last = f64::INFINITY;
    for alpha in [16.0, 64.0, 256.0] {
        let out = random_time_projection(e.operator(), &psi, alpha, Some(0)).unwrap();
        assert!(out.trace_bound <= last);
        assert!(out.sup_phi <= out.bound_8_over_alpha);
        last = out.trace_bound;
        if alpha == 64.0 {
            assert!(out.marked_prob.unwrap() >= 1.0 / 16.0);
        }
    }
}

#[test]
fn clock_identity_and_reversal() {
    let spec = ClockSpec::identity_circuit(2, 4, 4, 4).unwrap();
    let wp = WavepacketSpec::centered(&spec, 0.4, 6.0);
    let out = clock_propagation_fidelity(&spec, &wp, 0.3, None).unwrap();
    // U = I: the register never leaves |0>
    assert!((out.circuit_fidelity - 1.0).abs() < 1e-10);
    assert!(out.trace_distance < 1e-10);

    let k = constants();
    let spec = k.clock.spec().unwrap();
    let wp = k.clock.wavepacket(&spec);
    let fwd = clock_propagation_fidelity(&spec, &wp, k.clock.t_hat, None).unwrap();
    assert!(fwd.trace_distance <= 0.25);
    let back = WavepacketSpec { p0_hat: -wp.p0_hat, ..wp };
    let rev = clock_propagation_fidelity(&spec, &back, k.clock.t_hat, None).unwrap();
    assert!(rev.circuit_fidelity < 0.1, "{}", rev.circuit_fidelity);
}

#[test]
fn clock_low_energy_projection_path() {
    let k = constants();
    let spec = k.clock.spec().unwrap();
    let wp = k.clock.wavepacket(&spec);
    let plain = clock_propagation_fidelity(&spec, &wp, k.clock.t_hat, None).unwrap();
    let proj = clock_propagation_fidelity(&spec, &wp, k.clock.t_hat, Some(64.0)).unwrap();
    assert!(proj.initial_energy <= 64.0 / (spec.g() as f64).powi(2) + 1e-12);
    assert!(proj.initial_energy <= plain.initial_energy + 1e-12);
}
