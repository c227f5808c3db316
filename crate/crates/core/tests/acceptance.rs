//! Acceptance run: thirteen criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the verdicts print in order. The
//! process fails when a criterion outside `KNOWN_RED` fails, or when a
//! criterion listed there starts passing (so the list cannot go stale).

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use lowensim_core::encoding::{sga_block_encoding, t_from_block_encoded_a, unitary_dilation};
use lowensim_core::linalg::{self, c, CMatrix};
use lowensim_core::operator::{exact_evolution, spectral_decompose, Operator, StateVector};
use lowensim_core::poly::chebyshev::uniform_grid;
use lowensim_core::poly::composite::{sup_abs, window_error};
use lowensim_core::poly::taylor::{taylor_trig_square, truncate_taylor};
use lowensim_core::poly::{jacobi_anger_normalized, low_energy_evolution_polys, min_trig_degree_probe, rectangle_poly, Route, TrigKind};
use lowensim_core::random;
use lowensim_core::sim::*;
use lowensim_core::zoo::expander::psi1_state;
use lowensim_core::zoo::two_level::{plus_state, two_level_delta};
use lowensim_core::zoo::*;
use lowensim_core::{a_from_block_encoded_t, extract_block, verify_block_encoding, walk_chebyshev, Result};
use rand::Rng;

/// Criteria that fail with an analysis on record; see the README.
const KNOWN_RED: &[usize] = &[5];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

type Criterion = (usize, &'static str, u64, fn() -> Result<Verdict>);

const CRITERIA: &[Criterion] = &[
    (1, "Grover dynamics exactness", 1, c1_grover_exact),
    (2, "end-to-end fidelity across the zoo", 300, c2_fidelity),
    (3, "degree scaling, time-dominated", 120, c3_time_dominated),
    (4, "degree scaling, intermediate", 120, c4_intermediate),
    (5, "SGA ledger below QSP ledger", 120, c5_sga_vs_qsp),
    (6, "gap amplification spectrum", 10, c6_sga_identity),
    (7, "walk against Chebyshev SVT", 30, c7_walk),
    (8, "polynomial certificates", 60, c8_certificates),
    (9, "encoding round trips", 10, c9_round_trips),
    (10, "expander certificates", 60, c10_expander),
    (11, "random-time projection", 60, c11_random_time),
    (12, "clock propagation", 120, c12_clock),
    (13, "trig-degree probe", 300, c13_probe),
];

fn main() {
    // `cargo test -- --list` and friends: nothing to enumerate
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut unexpected = Vec::new();
    for &(id, name, budget, run) in CRITERIA {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let within = took <= Duration::from_secs(budget);
        let (pass, detail) = match out {
            Ok(v) => (v.pass && within, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let tag = if pass { "PASS" } else { "FAIL" };
        let time = format!("{:.1}s of {budget}s", took.as_secs_f64());
        println!("{tag} criterion {id:>2} {name}: {detail} [{time}]");
        if pass == KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected verdicts for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

fn c1_grover_exact() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for n in [4usize, 16, 64] {
        let x = n / 3;
        let h = grover_hamiltonian(n, x)?;
        let s = StateVector::uniform(n);
        let p1 = exact_evolution(&h, PI / 2.0 * (n as f64).sqrt())?.apply(&s)[x].norm_sqr();
        let h2 = Operator::hermitian(linalg::matmul(h.matrix(), h.matrix()))?;
        let p2 = exact_evolution(&h2, PI / 4.0 * n as f64)?.apply(&s)[x].norm_sqr();
        worst = worst.max((p1 - 1.0).abs()).max((p2 - 1.0).abs());
    }
    verdict(worst <= 1e-9, format!("max |P_x - 1| = {worst:.2e} over N in {{4, 16, 64}}, H and H^2"))
}

struct Instance {
    label: String,
    input: SimInput,
    psi: StateVector,
    t: f64,
    delta: f64,
}

/// `lambda A^dagger A` with `low` eigenvalues in `[0, delta]` and the rest in
/// `[2 delta, lambda]`, plus a random state in the low-energy span.
fn random_psd(dim: usize, low: usize, delta: f64, lambda: f64, seed: u64) -> Result<(CMatrix, Operator, StateVector)> {
    let mut r = random::rng(seed);
    let sv: Vec<f64> = (0..dim)
        .map(|i| if i < low { r.random_range(0.0..=delta) } else { r.random_range(2.0 * delta..=lambda) })
        .map(|e: f64| (e / lambda).sqrt())
        .collect();
    let a = random::with_singular_values(dim, dim, &sv, &mut r);
    let m = linalg::matmul(&a.adjoint(), &a) * c(lambda);
    let h = Operator::psd((&m + m.adjoint()) * c(0.5))?;
    let d = spectral_decompose(&h)?;
    let mut v = lowensim_core::CVector::zeros(dim);
    for j in 0..low {
        v += d.eigenvectors.column(j) * c(r.random_range(-1.0..1.0));
    }
    Ok((a, h, StateVector::normalized(v)?))
}

fn zoo_instances() -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (n, marked) in [(16usize, vec![5usize]), (4, vec![1, 2])] {
        let fam = GroverGaFamily::new(n, marked)?;
        out.push(Instance {
            label: format!("grover N={n} K={}", fam.k()),
            input: SimInput::from_gap_amp(&fam.to_gap_amp()?)?,
            psi: fam.uniform_state()?,
            t: PI * n as f64 / 4.0,
            delta: fam.delta(),
        });
    }
    for n in [16usize, 32] {
        let e = expander_ga_hamiltonian(&Graph::random_regular(n, 3, 7)?, 0)?;
        let cutoff = 4.0;
        out.push(Instance {
            label: format!("expander N={n}"),
            input: SimInput::from_gap_amp(&e.ga)?,
            psi: e.projected_uniform(cutoff)?.0,
            t: 8.0,
            delta: cutoff / n as f64,
        });
    }
    let theta_m = 0.3;
    for theta in [0.05, 0.15, 0.3] {
        out.push(Instance {
            label: format!("two-level theta={theta}"),
            input: SimInput::from_gap_amp(&two_level_theta(theta, theta_m)?)?,
            psi: plus_state(),
            t: 30.0,
            delta: two_level_delta(theta_m),
        });
    }
    for (dim, seed) in [(16usize, 1u64), (64, 2)] {
        let (delta, lambda) = (1.0 / 32.0, 1.0);
        let (a, _, psi) = random_psd(dim, 3, delta, lambda, seed)?;
        out.push(Instance {
            label: format!("random PSD dim={dim}"),
            input: SimInput::V { encoding: unitary_dilation(&a)?, lambda },
            psi,
            t: 40.0,
            delta,
        });
    }
    Ok(out)
}

fn c2_fidelity() -> Result<Verdict> {
    let mut count = 0;
    let mut failures = Vec::new();
    let mut margin = f64::INFINITY;
    for inst in zoo_instances()? {
        for eps in [1e-2, 1e-3, 1e-6] {
            count += 1;
            match simulate_low_energy(&inst.input, inst.t, inst.delta, eps, &inst.psi, SimOptions::default()) {
                Ok(r) => {
                    margin = margin.min((r.overlap - (1.0 - eps)) / eps);
                    if r.overlap < 1.0 - eps {
                        failures.push(format!("{} eps={eps:e}: {:.8}", inst.label, r.overlap));
                    }
                }
                Err(e) => failures.push(format!("{} eps={eps:e}: {e}", inst.label)),
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{count} instances, min (overlap - (1 - eps)) / eps = {margin:.3}")
    } else {
        format!("{count} instances, failing: {}", failures.join("; "))
    };
    verdict(failures.is_empty() && count >= 20, detail)
}

/// Two-level instance whose spectrum sits in `[0, delta]`, so every state is
/// low-energy; only the ledger is of interest.
fn ledger_degree(t: f64, delta: f64, eps: f64) -> Result<(usize, Regime)> {
    let theta_m = delta.sqrt().asin();
    let input = SimInput::from_gap_amp(&two_level_theta(0.5 * theta_m, theta_m)?)?;
    let r = simulate_low_energy(&input, t, delta, eps, &plus_state(), SimOptions::default())?;
    Ok((r.ledger.degree_cos + r.ledger.degree_sin, r.plan.regime))
}

fn c3_time_dominated() -> Result<Verdict> {
    let eps = 1e-3;
    let (d1, reg1) = ledger_degree(1600.0, 1.0 / 16.0, eps)?;
    let (d2, reg2) = ledger_degree(3200.0, 1.0 / 16.0, eps)?;
    // quarter Delta at fixed t Delta sqrt(lambda): t sqrt(lambda Delta) doubles
    let (d3, reg3) = ledger_degree(6400.0, 1.0 / 64.0, eps)?;
    let doubling = d2 as f64 / d1 as f64;
    let quarter = d3 as f64 / d1 as f64;
    let regimes = [reg1, reg2, reg3].iter().all(|r| *r == Regime::TimeDominated);
    let ok = regimes && (1.8..=2.2).contains(&doubling) && (1.8..=2.2).contains(&quarter);
    verdict(
        ok,
        format!(
            "degrees {d1} (t=1600) {d2} (t=3200) {d3} (Delta/4, t=6400); doubling ratio {doubling:.3}, quartering ratio {quarter:.3}"
        ),
    )
}

fn c4_intermediate() -> Result<Verdict> {
    let (eps, delta) = (1e-3, 1e-4);
    let (d1, reg1) = ledger_degree(50.0, delta, eps)?;
    let (d2, reg2) = ledger_degree(200.0, delta, eps)?;
    let ratio = d2 as f64 / d1 as f64;
    let ok = reg1 == Regime::Intermediate && reg2 == Regime::Intermediate && (1.7..=2.4).contains(&ratio);
    verdict(ok, format!("degrees {d1} (t=50) {d2} (t=200), ratio {ratio:.3}, Gamma = ln(1/eps)/t"))
}

fn c5_sga_vs_qsp() -> Result<Verdict> {
    let eps = 1e-3f64;
    let log = (1.0 / eps).ln();
    let mut rows = Vec::new();
    let mut all = true;
    for ratio in [1.0 / 16.0, 1.0 / 64.0] {
        for mult in [4.0, 8.0] {
            let t = mult * log / ratio;
            let theta_m = ratio.sqrt().asin();
            let ga = two_level_theta(0.5 * theta_m, theta_m)?;
            let input = SimInput::from_gap_amp(&ga)?;
            let sga = simulate_low_energy(&input, t, ratio, eps, &plus_state(), SimOptions::default())?;
            let h = ga.h.matrix().clone();
            let qsp = baseline_qsp(&unitary_dilation(&h)?, t, 1.0, eps, &plus_state())?;
            let win = sga.ledger.encoding_uses < qsp.ledger.encoding_uses && sga.plan.regime == Regime::TimeDominated;
            all &= win;
            rows.push(format!(
                "Delta/lambda=1/{:.0} t Delta={mult}ln(1/eps): {} vs {}",
                1.0 / ratio,
                sga.ledger.encoding_uses,
                qsp.ledger.encoding_uses
            ));
        }
    }
    verdict(all, format!("SGA vs QSP uses: {}", rows.join("; ")))
}

fn c6_sga_identity() -> Result<Verdict> {
    let mut r = random::rng(606);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (m, n) = (r.random_range(1..=16usize), r.random_range(1..=8usize));
        let k = m.min(n);
        let sv: Vec<f64> = (0..k).map(|_| r.random_range(0.0..1.0)).collect();
        let a = random::with_singular_values(m, n, &sv, &mut r);
        let s = sga_block_encoding(&unitary_dilation(&a)?)?;
        let (vals, _) = linalg::hermitian_eigen(&extract_block(&s));
        let mut want: Vec<f64> = sv.iter().flat_map(|&x| [x, -x]).collect();
        want.resize(vals.len(), 0.0);
        want.sort_by(f64::total_cmp);
        for (g, w) in vals.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    verdict(worst <= 1e-9, format!("50 factors up to 16x8, max eigenvalue error {worst:.2e}"))
}

fn c7_walk() -> Result<Verdict> {
    let mut r = random::rng(707);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let dim = 1 + i % 8;
        let h = random::hermitian(dim, &mut r);
        let h = &h * c(r.random_range(0.5..1.0) / linalg::spectral_norm(&h));
        let be = unitary_dilation(&h)?;
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        for k in 0..=32usize {
            let tk: Vec<_> = vals.iter().map(|&v| c((k as f64 * v.clamp(-1.0, 1.0).acos()).cos())).collect();
            let oracle = linalg::conjugate_diagonal(&vecs, &tk);
            let walked = walk_chebyshev(&be, k)?;
            worst = worst.max(linalg::spectral_norm(&(walked - oracle)));
        }
    }
    verdict(worst <= 1e-9, format!("20 encodings of dim <= 16, k <= 32, max error {worst:.2e}"))
}

fn c8_certificates() -> Result<Verdict> {
    let mut checked = 0;
    let mut bad = Vec::new();
    let lambda = 1.0;
    for &t in &[0.0, 5.0, 20.0, 60.0] {
        for &gamma in &[0.01, 0.05, 0.2, 1.0] {
            for &eps in &[1e-2, 1e-3, 1e-6] {
                let p = match low_energy_evolution_polys(t, lambda, gamma, eps) {
                    Ok(p) => p,
                    Err(e) => {
                        bad.push(format!("t={t} Gamma={gamma} eps={eps:e}: {e}"));
                        continue;
                    }
                };
                let r = p.window;
                for e in [&p.cos, &p.sin] {
                    checked += 1;
                    let f = |x: f64| e.kind.eval(t * lambda * x * x);
                    let top = sup_abs(&e.poly);
                    let err = window_error(&e.poly, r, f);
                    let cert_ok = e.poly.certificates.as_ref().is_some_and(|c| c.sup_error <= 2.0 * eps && c.weight <= 1.0 + 1e-9);
                    let mut weight_ok = true;
                    if e.route == Route::Masked && e.fourier_weight > 0.0 {
                        let s = truncate_taylor(&taylor_trig_square(t, lambda, e.kind, r, r)?, eps)?;
                        weight_ok = e.fourier_weight <= s.ln_l1().exp() + 1e-9;
                    }
                    if !(cert_ok && weight_ok && top <= 1.0 + 1e-9 && err <= 2.0 * eps) {
                        bad.push(format!("{:?} t={t} Gamma={gamma} eps={eps:e}", e.kind));
                    }
                }
            }
        }
    }
    for &(center, width) in &[(0.3, 0.1), (0.5, 0.2), (0.7, 0.05)] {
        for &eps in &[1e-2, 1e-4, 1e-8] {
            checked += 1;
            let p = rectangle_poly(center, width, eps)?;
            let ok = uniform_grid(-1.0, 1.0, 20_001).into_iter().all(|x| {
                let v = p.eval(x);
                v.abs() <= 1.0 + 1e-9
                    && (x.abs() > center - width || (v - 1.0).abs() <= eps)
                    && (x.abs() < center + width || v.abs() <= eps)
            });
            if !ok {
                bad.push(format!("rectangle c={center} d={width} eps={eps:e}"));
            }
        }
    }
    for &t in &[0.5, 10.0, 80.0] {
        for kind in [TrigKind::Cos, TrigKind::Sin] {
            checked += 1;
            let p = jacobi_anger_normalized(t, 1e-6, kind)?;
            let err = window_error(&p, 1.0, |x| kind.eval(t * x));
            if !(sup_abs(&p) <= 1.0 + 1e-9 && err <= 1e-6) {
                bad.push(format!("jacobi-anger {kind:?} t={t}"));
            }
        }
    }
    let detail = if bad.is_empty() { format!("{checked} polynomials certified") } else { format!("failing: {}", bad.join("; ")) };
    verdict(bad.is_empty(), detail)
}

fn c9_round_trips() -> Result<Verdict> {
    let mut r = random::rng(909);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 2 + i % 5;
        let sv: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        let a = random::with_singular_values(n, n, &sv, &mut r);
        let ata = linalg::matmul(&a.adjoint(), &a);
        let t = t_from_block_encoded_a(&unitary_dilation(&a)?, 1.0)?;
        worst = worst.max(verify_block_encoding(&t, &(&ata - CMatrix::identity(n, n)))?);
        let (v2, _) = a_from_block_encoded_t(&t, 1.0, 1.0)?;
        let a2 = extract_block(&v2);
        worst = worst.max(linalg::max_abs_diff(&(linalg::matmul(&a2.adjoint(), &a2) * c(2.0)), &ata));

        let hp = random::hermitian(n, &mut r);
        let hp = &hp * c(r.random_range(0.3..0.99) / linalg::spectral_norm(&hp));
        let (v, _) = a_from_block_encoded_t(&unitary_dilation(&hp)?, 1.0, 0.0)?;
        let b = extract_block(&v);
        let want = (&hp + CMatrix::identity(n, n)) * c(0.5);
        worst = worst.max(linalg::max_abs_diff(&linalg::matmul(&b.adjoint(), &b), &want));
        let t2 = t_from_block_encoded_a(&v, 1.0)?;
        worst = worst.max(verify_block_encoding(&t2, &((&hp - CMatrix::identity(n, n)) * c(0.5)))?);
    }
    verdict(worst <= 2e-10, format!("20 instances each way, max deviation {worst:.2e}"))
}

fn c10_expander() -> Result<Verdict> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [16usize, 32, 64] {
        let e = expander_ga_hamiltonian(&Graph::random_regular(n, 3, 7)?, 0)?;
        let k = &e.certificates;
        let (_, overlap) = e.projected_uniform(4.0)?;
        let pass = k.ground_energy <= 1e-10 && k.gap >= 1.0 / (4.0 * n as f64) && k.ground_state_error <= 1e-8 && overlap >= 0.95;
        ok &= pass;
        rows.push(format!("N={n} gap {:.4} (bound {:.4}) overlap {overlap:.4}", k.gap, 1.0 / (4.0 * n as f64)));
    }
    verdict(ok, rows.join("; "))
}

fn c11_random_time() -> Result<Verdict> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [16usize, 32] {
        let e = expander_ga_hamiltonian(&Graph::random_regular(n, 3, 7)?, 0)?;
        let out = random_time_projection(e.operator(), &psi1_state(n, 0), 64.0, Some(0))?;
        let p = out.marked_prob.unwrap_or(0.0);
        ok &= p >= 1.0 / 16.0;
        rows.push(format!("N={n} marked probability {p:.4}"));
    }
    verdict(ok, format!("alpha=64: {}", rows.join("; ")))
}

fn c12_clock() -> Result<Verdict> {
    let k = &constants().clock;
    let spec = k.spec()?;
    let wp = k.wavepacket(&spec);
    let out = clock_propagation_fidelity(&spec, &wp, k.t_hat, None)?;
    let shape_ok = k.n_qubits == 2 && spec.g() <= 6 && spec.gprime() <= 512;
    let prop_ok = out.trace_distance <= 0.25;

    // E(G) against C / G^2 over identity circuits
    let gs = [4usize, 8, 16];
    let mut scaled = Vec::new();
    for &g in &gs {
        let s = ClockSpec::identity_circuit(2, g, k.c1, k.c2)?;
        let w = WavepacketSpec::centered(&s, k.sigma_hat, k.p0_hat);
        scaled.push(gaussian_wavepacket(&w, &s)?.energy * (g * g) as f64);
    }
    // relative least squares for E = C / G^2: C is the mean of E G^2
    let fit = scaled.iter().sum::<f64>() / scaled.len() as f64;
    let law_ok = scaled.iter().all(|&e| e <= 2.0 * fit && e >= 0.5 * fit);
    verdict(
        shape_ok && prop_ok && law_ok,
        format!(
            "G={} G'={} trace distance {:.4}; E G^2 = {:.3?} for G in {gs:?}, C = {fit:.3}",
            spec.g(),
            spec.gprime(),
            out.trace_distance,
            scaled
        ),
    )
}

fn c13_probe() -> Result<Verdict> {
    let eps = 1e-3;
    let mut rows = Vec::new();
    let mut ok = true;
    for t in [50.0f64, 100.0, 200.0] {
        let theta = (0.016 / t).sqrt().asin();
        let p = min_trig_degree_probe(t, eps, theta)?;
        ok &= p.in_regime && p.meets_lower_bound();
        rows.push(format!("t={t} K*={} bound {:.2}", p.k_star, p.lower_bound));
    }
    verdict(ok, rows.join("; "))
}
