//! The experiment catalog. Each experiment resolves its parameters, runs one
//! instance per sweep point and returns one or more result rows.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use lowensim_core::encoding::unitary_dilation;
use lowensim_core::linalg::{self, c, CMatrix};
use lowensim_core::operator::{spectral_decompose, Operator, StateVector};
use lowensim_core::poly::{low_energy_evolution_polys, min_trig_degree_probe, EvolutionPoly};
use lowensim_core::random;
use lowensim_core::sim::{self, constants, SimInput, SimOptions, SimPlan, SimReport};
use lowensim_core::zoo::clock::{parse_circuit, ClockSpec, WavepacketSpec};
use lowensim_core::zoo::expander::psi1_state;
use lowensim_core::zoo::{expander_ga_hamiltonian, gaussian_wavepacket, ExpanderHamiltonian, Graph, GroverGaFamily};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::config::Params;
use crate::CliError;

pub type Row = BTreeMap<String, Value>;

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    /// Accepted parameters with their defaults, in column order.
    pub params: &'static [(&'static str, &'static str)],
    /// Result columns, after the parameter echo.
    pub columns: &'static [&'static str],
    pub run: fn(&Params, &mut ChaCha8Rng) -> Result<Vec<Row>, CliError>,
}

pub static CATALOG: &[Experiment] = &[
    Experiment {
        name: "grover_demo",
        about: "Gap-amplified simulation of the squared Grover family from the uniform state",
        params: &[("N", "16"), ("K", "1"), ("eps", "1e-3"), ("t", "pi N / 4"), ("gamma", "from choose_gamma"), ("marked", "drawn from the seed")],
        columns: &[
            "delta_eff", "lambda_eff", "gamma_used", "regime", "predicted_degree", "degree_cos", "degree_sin", "amplification_factor",
            "encoding_uses", "oracle_queries", "overlap", "residual_norm", "guarantee", "meets_guarantee", "marked_prob",
        ],
        run: grover_demo,
    },
    Experiment {
        name: "regime_sweep",
        about: "Cutoff choice and measured evolution-polynomial degrees over (t, Delta/lambda, eps)",
        params: &[("t", "100"), ("delta", "0.01"), ("lambda", "1"), ("eps", "1e-3"), ("gamma", "from choose_gamma")],
        columns: &[
            "gamma_used", "regime", "predicted_degree", "degree_cos", "degree_sin", "encoding_uses", "route_cos", "route_sin",
            "time_term", "error_term",
        ],
        run: regime_sweep,
    },
    Experiment {
        name: "qsp_compare",
        about: "Gap-amplified simulation against generic QSP on H/lambda for a random low-energy instance",
        params: &[("dim", "8"), ("low_count", "2"), ("t", "400"), ("delta", "1/64"), ("lambda", "1"), ("eps", "1e-3")],
        columns: &[
            "sga_gamma", "sga_regime", "sga_degree_cos", "sga_degree_sin", "sga_encoding_uses", "sga_overlap", "qsp_degree_cos",
            "qsp_degree_sin", "qsp_encoding_uses", "qsp_overlap", "uses_ratio", "sga_wins",
        ],
        run: qsp_compare,
    },
    Experiment {
        name: "expander_spectrum",
        about: "Spectral certificates of the marked-vertex expander Hamiltonian",
        params: &[("N", "16"), ("d", "3"), ("x", "0"), ("graph_seed", "7"), ("graph", "random regular"), ("c", "4")],
        columns: &[
            "degree", "colors", "eta", "ground_energy", "gap", "gap_bound", "ground_state_error", "projected_overlap", "passes",
        ],
        run: expander_spectrum,
    },
    Experiment {
        name: "random_time_projection",
        about: "Ground-state projection by evolution for a uniformly random time",
        params: &[
            ("N", "16"), ("d", "3"), ("x", "0"), ("graph_seed", "7"), ("alpha", "64"), ("state", "psi1 | projected | uniform"),
            ("c", "4"),
        ],
        columns: &[
            "t_max", "quadrature_points", "success_prob", "marked_prob", "sup_phi", "bound_8_over_alpha", "trace_bound",
            "coherence_trace_norm", "target", "meets_target",
        ],
        run: random_time,
    },
    Experiment {
        name: "clock_propagation",
        about: "Wavepacket propagation through a clock-encoded circuit",
        params: &[
            ("n_qubits", "2"), ("circuit", "shipped circuit (JSON gate list)"), ("c1", "8"), ("c2", "16"), ("sigma_hat", "0.4"),
            ("p0_hat", "8"), ("t_hat", "0.2"), ("delta_fraction", "none"),
        ],
        columns: &[
            "G", "gprime", "x0", "t", "trace_distance", "circuit_fidelity", "initial_energy", "energy_g2", "wrapped_weight",
            "within_quarter",
        ],
        run: clock_propagation,
    },
    Experiment {
        name: "trig_degree_probe",
        about: "Minimal degree of a bounded approximation to the two-level evolution",
        params: &[("t", "100"), ("eps", "1e-3"), ("theta_m", "asin(sqrt(0.016 / t))")],
        columns: &["delta", "k_star", "lower_bound", "in_regime", "meets_lower_bound", "degrees_solved"],
        run: trig_degree_probe,
    },
    Experiment {
        name: "poly_certify",
        about: "Grid certificates of both evolution polynomials (one row per kind)",
        params: &[("t", "30"), ("lambda", "1"), ("gamma", "0.05"), ("eps", "1e-3")],
        columns: &[
            "kind", "route", "degree", "parity", "grid_points", "sup_error", "budget", "max_abs", "bounded", "fourier_weight",
            "fourier_bandwidth", "mask_degree", "passes",
        ],
        run: poly_certify,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    CATALOG.iter().find(|e| e.name == name)
}

pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

fn keys(e: &str) -> Vec<&'static str> {
    find(e).map(|x| x.params.iter().map(|p| p.0).collect()).unwrap_or_default()
}

fn plan_cells(row: &mut Row, plan: &SimPlan) {
    row.insert("delta_eff".into(), plan.delta.into());
    row.insert("lambda_eff".into(), plan.lambda.into());
    row.insert("gamma_used".into(), plan.gamma.into());
    row.insert("regime".into(), plan.regime.as_str().into());
    row.insert("predicted_degree".into(), plan.predicted_degree.into());
}

fn report_cells(row: &mut Row, r: &SimReport) {
    plan_cells(row, &r.plan);
    row.insert("degree_cos".into(), r.ledger.degree_cos.into());
    row.insert("degree_sin".into(), r.ledger.degree_sin.into());
    row.insert("amplification_factor".into(), r.ledger.amplification_factor.into());
    row.insert("encoding_uses".into(), r.ledger.encoding_uses.into());
    row.insert("oracle_queries".into(), r.oracle_queries().into());
    row.insert("overlap".into(), r.overlap.into());
    row.insert("residual_norm".into(), r.residual_norm.into());
    row.insert("guarantee".into(), r.guarantee.into());
    row.insert("meets_guarantee".into(), r.meets_guarantee().into());
}

fn grover_demo(p: &Params, rng: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("grover_demo"))?;
    let n = p.usize_or("N", 16)?;
    let k = p.usize_or("K", 1)?;
    let eps = p.f64_or("eps", 1e-3)?;
    let t = p.opt_f64("t")?.unwrap_or(PI * n as f64 / 4.0);
    p.note("t", t);
    let gamma = p.opt_f64("gamma")?;
    if n < 2 || k == 0 {
        return Err(CliError::Config("need N >= 2 and K >= 1".into()));
    }
    let marked: Vec<usize> = match p.opt_usize("marked")? {
        Some(x) => vec![x; k],
        None => (0..k).map(|_| rng.random_range(0..n)).collect(),
    };
    p.note("marked", marked.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "));
    let fam = GroverGaFamily::new(n, marked)?;
    let input = SimInput::from_gap_amp(&fam.to_gap_amp()?)?;
    let psi = fam.uniform_state()?;
    let opts = SimOptions { gamma_override: gamma, ..Default::default() };
    let r = sim::simulate_low_energy(&input, t, fam.delta(), eps, &psi, opts)?;
    let mut row = Row::new();
    report_cells(&mut row, &r);
    let out = &r.operator * psi.amplitudes();
    let target = fam.marked_state()?;
    row.insert("marked_prob".into(), out.dotc(target.amplitudes()).norm_sqr().into());
    Ok(vec![row])
}

fn regime_sweep(p: &Params, _: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("regime_sweep"))?;
    let t = p.f64_or("t", 100.0)?;
    let delta = p.f64_or("delta", 0.01)?;
    let lambda = p.f64_or("lambda", 1.0)?;
    let eps = p.f64_or("eps", 1e-3)?;
    let plan = match p.opt_f64("gamma")? {
        Some(g) => sim::plan_with_gamma(t, delta, lambda, eps, g)?,
        None => sim::choose_gamma(t, delta, lambda, eps)?,
    };
    let polys = sim::plan_polys(&plan)?;
    let ledger = lowensim_core::svt::QueryLedger::combined(polys.cos.degree(), polys.sin.degree());
    let mut row = Row::new();
    row.insert("gamma_used".into(), plan.gamma.into());
    row.insert("regime".into(), plan.regime.as_str().into());
    row.insert("predicted_degree".into(), plan.predicted_degree.into());
    row.insert("degree_cos".into(), ledger.degree_cos.into());
    row.insert("degree_sin".into(), ledger.degree_sin.into());
    row.insert("encoding_uses".into(), ledger.encoding_uses.into());
    row.insert("route_cos".into(), format!("{:?}", polys.cos.route).into());
    row.insert("route_sin".into(), format!("{:?}", polys.sin.route).into());
    row.insert("time_term".into(), (t * (lambda * plan.gamma).sqrt()).into());
    row.insert("error_term".into(), ((lambda / plan.gamma).sqrt() * (1.0 / eps).ln()).into());
    Ok(vec![row])
}

/// `H = lambda A^dagger A` with `low_count` eigenvalues in `[0, Delta]` and
/// the rest in `[2 Delta, lambda]`; `psi` is a random low-energy state.
pub fn low_energy_instance(
    dim: usize,
    low_count: usize,
    delta: f64,
    lambda: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(CMatrix, Operator, StateVector), CliError> {
    if low_count == 0 || low_count > dim || !(delta > 0.0 && 2.0 * delta <= lambda) {
        return Err(CliError::Config("need 1 <= low_count <= dim and 0 < 2 delta <= lambda".into()));
    }
    let energies: Vec<f64> = (0..dim)
        .map(|i| if i < low_count { rng.random_range(0.0..=delta) } else { rng.random_range(2.0 * delta..=lambda) })
        .collect();
    let singular: Vec<f64> = energies.iter().map(|e| (e / lambda).sqrt()).collect();
    let a = random::with_singular_values(dim, dim, &singular, rng);
    let h = Operator::psd({
        let m = linalg::matmul(&a.adjoint(), &a) * c(lambda);
        (&m + m.adjoint()) * c(0.5)
    })?;
    let d = spectral_decompose(&h)?;
    let mut v = lowensim_core::CVector::zeros(dim);
    for j in 0..low_count {
        v += d.eigenvectors.column(j) * c(rng.random_range(-1.0..1.0));
    }
    Ok((a, h, StateVector::normalized(v)?))
}

fn qsp_compare(p: &Params, rng: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("qsp_compare"))?;
    let dim = p.usize_or("dim", 8)?;
    let low = p.usize_or("low_count", 2)?;
    let t = p.f64_or("t", 400.0)?;
    let delta = p.f64_or("delta", 1.0 / 64.0)?;
    let lambda = p.f64_or("lambda", 1.0)?;
    let eps = p.f64_or("eps", 1e-3)?;
    let (a, h, psi) = low_energy_instance(dim, low, delta, lambda, rng)?;
    let sga = sim::simulate_low_energy(&SimInput::V { encoding: unitary_dilation(&a)?, lambda }, t, delta, eps, &psi, SimOptions::default())?;
    let be = unitary_dilation(&(h.matrix() * c(1.0 / lambda)))?;
    let qsp = sim::baseline_qsp(&be, t, lambda, eps, &psi)?;
    let mut row = Row::new();
    row.insert("sga_gamma".into(), sga.plan.gamma.into());
    row.insert("sga_regime".into(), sga.plan.regime.as_str().into());
    row.insert("sga_degree_cos".into(), sga.ledger.degree_cos.into());
    row.insert("sga_degree_sin".into(), sga.ledger.degree_sin.into());
    row.insert("sga_encoding_uses".into(), sga.ledger.encoding_uses.into());
    row.insert("sga_overlap".into(), sga.overlap.into());
    row.insert("qsp_degree_cos".into(), qsp.ledger.degree_cos.into());
    row.insert("qsp_degree_sin".into(), qsp.ledger.degree_sin.into());
    row.insert("qsp_encoding_uses".into(), qsp.ledger.encoding_uses.into());
    row.insert("qsp_overlap".into(), qsp.overlap.into());
    row.insert("uses_ratio".into(), (sga.ledger.encoding_uses as f64 / qsp.ledger.encoding_uses as f64).into());
    row.insert("sga_wins".into(), (sga.ledger.encoding_uses < qsp.ledger.encoding_uses).into());
    Ok(vec![row])
}

fn expander(p: &Params) -> Result<ExpanderHamiltonian, CliError> {
    let k = &constants().expander;
    let x = p.usize_or("x", 0)?;
    let graph = match p.opt_str("graph")? {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("cannot read graph {path}: {e}")))?;
            Graph::parse_edge_list(&text)?
        }
        None => {
            let n = p.usize_or("N", 16)?;
            let d = p.usize_or("d", k.degree)?;
            Graph::random_regular(n, d, p.usize_or("graph_seed", k.seed as usize)? as u64)?
        }
    };
    p.note("N", graph.num_vertices());
    Ok(expander_ga_hamiltonian(&graph, x)?)
}

fn expander_spectrum(p: &Params, _: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("expander_spectrum"))?;
    let e = expander(p)?;
    let cutoff = p.f64_or("c", constants().expander.cutoff_c)?;
    let (_, ov) = e.projected_uniform(cutoff)?;
    let cert = &e.certificates;
    let mut row = Row::new();
    row.insert("degree".into(), e.degree.into());
    row.insert("colors".into(), cert.colors.into());
    row.insert("eta".into(), cert.eta.into());
    row.insert("ground_energy".into(), cert.ground_energy.into());
    row.insert("gap".into(), cert.gap.into());
    row.insert("gap_bound".into(), cert.gap_bound.into());
    row.insert("ground_state_error".into(), cert.ground_state_error.into());
    row.insert("projected_overlap".into(), ov.into());
    row.insert("passes".into(), (cert.passes() && ov >= 0.95).into());
    Ok(vec![row])
}

fn random_time(p: &Params, _: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("random_time_projection"))?;
    let e = expander(p)?;
    let alpha = p.f64_or("alpha", 64.0)?;
    let n = e.dim();
    let psi = match p.str_or("state", "psi1")?.as_str() {
        "psi1" => psi1_state(n, e.marked),
        "projected" => e.projected_uniform(p.f64_or("c", constants().expander.cutoff_c)?)?.0,
        "uniform" => StateVector::uniform(n),
        other => return Err(CliError::Config(format!("state {other} is not one of psi1, projected, uniform"))),
    };
    let out = sim::random_time_projection(e.operator(), &psi, alpha, Some(e.marked))?;
    let target = 0.5 * (0.25 - 8.0 / alpha);
    let marked = out.marked_prob.unwrap_or(f64::NAN);
    let mut row = Row::new();
    row.insert("t_max".into(), out.t_max.into());
    row.insert("quadrature_points".into(), out.quadrature_points.into());
    row.insert("success_prob".into(), out.success_prob.into());
    row.insert("marked_prob".into(), marked.into());
    row.insert("sup_phi".into(), out.sup_phi.into());
    row.insert("bound_8_over_alpha".into(), out.bound_8_over_alpha.into());
    row.insert("trace_bound".into(), out.trace_bound.into());
    row.insert("coherence_trace_norm".into(), out.coherence_trace_norm.into());
    row.insert("target".into(), target.into());
    row.insert("meets_target".into(), (marked >= target).into());
    Ok(vec![row])
}

fn clock_propagation(p: &Params, _: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("clock_propagation"))?;
    let k = &constants().clock;
    let n = p.usize_or("n_qubits", k.n_qubits)?;
    let gates = match p.opt_str("circuit")? {
        Some(json) => parse_circuit(&json, n)?,
        None => {
            if n != k.n_qubits {
                return Err(CliError::Config("n_qubits differs from the shipped circuit; pass a circuit".into()));
            }
            k.spec()?.gates
        }
    };
    let spec = ClockSpec::new(n, gates, p.usize_or("c1", k.c1)?, p.usize_or("c2", k.c2)?)?;
    let wp = WavepacketSpec::centered(&spec, p.f64_or("sigma_hat", k.sigma_hat)?, p.f64_or("p0_hat", k.p0_hat)?);
    let t_hat = p.f64_or("t_hat", k.t_hat)?;
    let frac = p.opt_f64("delta_fraction")?;
    let out = sim::clock_propagation_fidelity(&spec, &wp, t_hat, frac)?;
    let energy = gaussian_wavepacket(&wp, &spec)?.energy;
    let g = spec.g();
    let mut row = Row::new();
    row.insert("G".into(), g.into());
    row.insert("gprime".into(), out.gprime.into());
    row.insert("x0".into(), wp.x0.into());
    row.insert("t".into(), out.t.into());
    row.insert("trace_distance".into(), out.trace_distance.into());
    row.insert("circuit_fidelity".into(), out.circuit_fidelity.into());
    row.insert("initial_energy".into(), out.initial_energy.into());
    row.insert("energy_g2".into(), (energy * (g * g) as f64).into());
    row.insert("wrapped_weight".into(), out.wrapped_weight.into());
    row.insert("within_quarter".into(), (out.trace_distance <= 0.25).into());
    Ok(vec![row])
}

fn trig_degree_probe(p: &Params, _: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("trig_degree_probe"))?;
    let t = p.f64_or("t", 100.0)?;
    let eps = p.f64_or("eps", 1e-3)?;
    if t <= 0.0 {
        return Err(CliError::Config("t must be positive".into()));
    }
    let theta = p.f64_or("theta_m", (0.016 / t).sqrt().min(1.0).asin())?;
    let r = min_trig_degree_probe(t, eps, theta)?;
    let mut row = Row::new();
    row.insert("delta".into(), theta.sin().powi(2).into());
    row.insert("k_star".into(), r.k_star.into());
    row.insert("lower_bound".into(), r.lower_bound.into());
    row.insert("in_regime".into(), r.in_regime.into());
    row.insert("meets_lower_bound".into(), r.meets_lower_bound().into());
    row.insert("degrees_solved".into(), r.trace.len().into());
    Ok(vec![row])
}

fn poly_row(e: &EvolutionPoly, eps: f64) -> Row {
    let cert = e.poly.certificates.unwrap_or_default();
    let mut row = Row::new();
    row.insert("kind".into(), format!("{:?}", e.kind).to_lowercase().into());
    row.insert("route".into(), format!("{:?}", e.route).into());
    row.insert("degree".into(), e.degree().into());
    row.insert("parity".into(), format!("{:?}", e.poly.parity).to_lowercase().into());
    row.insert("grid_points".into(), cert.grid_points.into());
    row.insert("sup_error".into(), cert.sup_error.into());
    row.insert("budget".into(), (2.0 * eps).into());
    row.insert("max_abs".into(), cert.weight.into());
    let bounded = cert.weight <= 1.0 + 1e-9;
    row.insert("bounded".into(), bounded.into());
    row.insert("fourier_weight".into(), e.fourier_weight.into());
    row.insert("fourier_bandwidth".into(), e.fourier_bandwidth.into());
    row.insert("mask_degree".into(), e.mask_degree.into());
    row.insert("passes".into(), (bounded && cert.sup_error <= 2.0 * eps && cert.grid_points > 0).into());
    row
}

fn poly_certify(p: &Params, _: &mut ChaCha8Rng) -> Result<Vec<Row>, CliError> {
    p.check_keys(&keys("poly_certify"))?;
    let t = p.f64_or("t", 30.0)?;
    let lambda = p.f64_or("lambda", 1.0)?;
    let gamma = p.f64_or("gamma", 0.05)?;
    let eps = p.f64_or("eps", 1e-3)?;
    let polys = low_energy_evolution_polys(t, lambda, gamma, eps)?;
    Ok(vec![poly_row(&polys.cos, eps), poly_row(&polys.sin, eps)])
}
