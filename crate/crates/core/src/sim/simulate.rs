//! End-to-end low-energy simulation and the generic QSP baseline.

use serde::{Deserialize, Serialize};

use super::plan::{choose_gamma, plan_with_gamma, SimPlan};
use crate::encoding::{a_from_block_encoded_t, assemble_gap_amplifiable, sga_block_encoding, unitary_dilation, BlockEncoding};
use crate::error::{Error, Result};
use crate::gapamp::GapAmpHamiltonian;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::operator::{self, Operator, SpectralDecomp, StateVector};
use crate::poly::{jacobi_anger_normalized, low_energy_evolution_polys, EvolutionPolys, TrigKind};
use crate::svt::{lcu_combine_evolution, QueryLedger, SvtContext};

/// Largest `||(1 - Pi_Delta) psi||` accepted without the leakage flag.
pub const LEAKAGE_TOL: f64 = 1e-8;

/// Access to the Hamiltonian.
#[derive(Debug, Clone)]
pub enum SimInput {
    /// `V` encodes `A` and `H = lambda A^dagger A`.
    V { encoding: BlockEncoding, lambda: f64 },
    /// Unit-scale `T` encodes `H' = (H - E)/lambda`; the low-energy
    /// subspace sits at the bottom of the range `[E - lambda, E + lambda]`.
    T { encoding: BlockEncoding, lambda: f64, energy_shift: f64 },
}

impl SimInput {
    /// `V` access to a gap-amplifiable Hamiltonian through unitary dilations
    /// of its factors.
    pub fn from_gap_amp(ga: &GapAmpHamiltonian) -> Result<Self> {
        let terms = ga.terms.iter().map(|t| Ok((t.lambda, unitary_dilation(&t.a)?))).collect::<Result<Vec<_>>>()?;
        let amp = assemble_gap_amplifiable(&terms)?;
        Ok(SimInput::V { encoding: amp.encoding, lambda: amp.hamiltonian.lambda })
    }

    pub fn label(&self) -> &'static str {
        match self {
            SimInput::V { .. } => "V",
            SimInput::T { .. } => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct SimOptions {
    pub gamma_override: Option<f64>,
    /// Accept `eta = ||(1 - Pi_Delta) psi|| <= eps`; the guarantee becomes
    /// `1 - eps - 2 eta`.
    pub allow_leakage: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimReport {
    /// `|<psi| Pi U^dagger Pi e^{-itH} |psi>|`.
    pub overlap: f64,
    pub ledger: QueryLedger,
    pub plan: SimPlan,
    /// `||Pi U Pi psi - e^{-itH} psi||`.
    pub residual_norm: f64,
    /// Overlap the run promises: `1 - eps`, or `1 - eps - 2 eta` with leakage.
    pub guarantee: f64,
    pub leakage: f64,
    /// Base-oracle queries per encoding use.
    pub queries_per_use: usize,
    pub input: String,
    /// `Pi U Pi` restricted to the system, not serialized.
    #[serde(skip, default = "empty_matrix")]
    pub operator: CMatrix,
}

fn empty_matrix() -> CMatrix {
    CMatrix::zeros(0, 0)
}

impl SimReport {
    pub fn meets_guarantee(&self) -> bool {
        self.overlap >= self.guarantee
    }

    pub fn oracle_queries(&self) -> usize {
        self.ledger.encoding_uses * self.queries_per_use
    }
}

/// Amplified access: `V` for `A` with `H - F = lambda_eff A^dagger A`.
struct Amplified {
    v: BlockEncoding,
    lambda_eff: f64,
    /// `H - F`, the shifted Hamiltonian whose bottom is at zero.
    shifted: Operator,
}

fn amplified(input: &SimInput) -> Result<Amplified> {
    match input {
        SimInput::V { encoding, lambda } => {
            if !(*lambda > 0.0) {
                return Err(Error::DomainError(format!("lambda = {lambda} must be positive")));
            }
            let a = encoding.raw_block() * c(encoding.scale());
            let lambda_eff = lambda * encoding.scale().powi(2);
            let ata = linalg::matmul(&a.adjoint(), &a) * c(*lambda);
            let h = Operator::psd((&ata + ata.adjoint()) * c(0.5))?;
            Ok(Amplified { v: encoding.with_unit_scale(), lambda_eff, shifted: h })
        }
        SimInput::T { encoding, lambda, energy_shift } => {
            let (v, _f) = a_from_block_encoded_t(encoding, *lambda, *energy_shift)?;
            // H - F = lambda (H' + I)
            let hp = encoding.raw_block();
            let n = hp.nrows();
            let m = (&hp + hp.adjoint()) * c(0.5 * lambda) + CMatrix::identity(n, n) * c(*lambda);
            Ok(Amplified { v, lambda_eff: 2.0 * lambda, shifted: Operator::hermitian(m)? })
        }
    }
}

fn overlap_and_residual(op: &CMatrix, decomp: &SpectralDecomp, t: f64, psi: &StateVector) -> (f64, f64) {
    let exact = operator::evolution_from(decomp, t);
    let want = exact.apply(psi);
    let got: CVector = op * psi.amplitudes();
    (got.dotc(&want).norm(), (&got - &want).norm())
}

fn leakage_guarantee(psi: &StateVector, decomp: &SpectralDecomp, delta: f64, eps: f64, allow: bool) -> Result<(f64, f64)> {
    let eta = operator::leakage(psi, decomp, delta);
    if eta <= LEAKAGE_TOL {
        return Ok((eta, 1.0 - eps));
    }
    if allow && eta <= eps {
        return Ok((eta, 1.0 - eps - 2.0 * eta));
    }
    Err(Error::StateNotLowEnergy { leakage: eta })
}

/// Evolution polynomials a plan runs with, each built at `eps/4`.
pub fn plan_polys(plan: &SimPlan) -> Result<EvolutionPolys> {
    low_energy_evolution_polys(plan.t, plan.lambda, plan.gamma, 0.25 * plan.eps)
}

/// Gap-amplified simulation of `e^{-itH}` on `psi` in `S_Delta`.
///
/// Each evolution polynomial is within `eps/2` of its target on the window,
/// so the combination stays within `eps/sqrt(2)` in norm.
pub fn simulate_low_energy(
    input: &SimInput,
    t: f64,
    delta: f64,
    eps: f64,
    psi: &StateVector,
    opts: SimOptions,
) -> Result<SimReport> {
    let amp = amplified(input)?;
    let n = amp.shifted.dim();
    if psi.dim() != n {
        return Err(Error::DimMismatch { expected: (n, 1), found: (psi.dim(), 1) });
    }
    let decomp = operator::spectral_decompose(&amp.shifted)?;
    let (leak, guarantee) = leakage_guarantee(psi, &decomp, delta, eps, opts.allow_leakage)?;
    // the spectrum of H - F never exceeds lambda_eff
    let delta_eff = delta.min(amp.lambda_eff);
    let plan = match opts.gamma_override {
        Some(g) => plan_with_gamma(t, delta_eff, amp.lambda_eff, eps, g)?,
        None => choose_gamma(t, delta_eff, amp.lambda_eff, eps)?,
    };
    let polys = plan_polys(&plan)?;
    let w = sga_block_encoding(&amp.v)?;
    let ctx = SvtContext::from_encoding(&w);
    let (pc, lc) = ctx.apply(&polys.cos.poly)?;
    let (ps, ls) = ctx.apply(&polys.sin.poly)?;
    let (u, ledger) = lcu_combine_evolution(&pc, &ps, &lc, &ls)?;
    // the top-left N x N corner is the column space of A
    let op = u.view((0, 0), (n, n)).into_owned();
    let (overlap, residual_norm) = overlap_and_residual(&op, &decomp, t, psi);
    let mut ledger = ledger.with_note(format!("SGA encoding use = {} oracle queries", w.oracle_queries()));
    if matches!(input, SimInput::T { .. }) {
        ledger = ledger.with_note("A built from T; lambda_eff = 2 lambda");
    }
    Ok(SimReport {
        overlap,
        ledger,
        plan,
        residual_norm,
        guarantee,
        leakage: leak,
        queries_per_use: w.oracle_queries(),
        input: input.label().to_string(),
        operator: op,
    })
}

/// Generic simulation from an encoding of `H/lambda`: Jacobi-Anger
/// polynomials at time `t lambda`, each at `eps/2`.
pub fn baseline_qsp(be: &BlockEncoding, t: f64, lambda: f64, eps: f64, psi: &StateVector) -> Result<SimReport> {
    if !be.is_square_block() {
        return Err(Error::Invalid("QSP baseline needs a square hermitian block".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::DomainError(format!("lambda = {lambda} must be positive")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonRange { eps, lo: 0.0, hi: 1.0 });
    }
    let raw = be.raw_block();
    let n = raw.nrows();
    if psi.dim() != n {
        return Err(Error::DimMismatch { expected: (n, 1), found: (psi.dim(), 1) });
    }
    let asym = linalg::max_asymmetry(&raw);
    if asym > 1e-10 {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let h = Operator::hermitian((&raw + raw.adjoint()) * c(0.5 * lambda * be.scale()))?;
    let decomp = operator::spectral_decompose(&h)?;
    let tl = t * lambda * be.scale();
    let pc = jacobi_anger_normalized(tl, 0.5 * eps, TrigKind::Cos)?;
    let ps = jacobi_anger_normalized(tl, 0.5 * eps, TrigKind::Sin)?;
    let ctx = SvtContext::from_encoding(be);
    let (uc, lc) = ctx.apply(&pc)?;
    let (us, ls) = ctx.apply(&ps)?;
    let (op, ledger) = lcu_combine_evolution(&uc, &us, &lc, &ls)?;
    let (overlap, residual_norm) = overlap_and_residual(&op, &decomp, t, psi);
    // no low-energy assumption: the whole range [-lambda, lambda] is used
    let plan = SimPlan {
        t,
        delta: lambda,
        lambda,
        eps,
        gamma: lambda,
        regime: super::plan::Regime::ErrorDominated,
        predicted_degree: pc.degree().max(ps.degree()),
    };
    Ok(SimReport {
        overlap,
        ledger: ledger.with_note("generic QSP on H/lambda"),
        plan,
        residual_norm,
        guarantee: 1.0 - eps,
        leakage: 0.0,
        queries_per_use: be.oracle_queries(),
        input: "QSP".to_string(),
        operator: op,
    })
}

/// `e^{-itH}` for reference, as a complex matrix.
pub fn exact_propagator(h: &Operator, t: f64) -> Result<CMatrix> {
    Ok(operator::exact_evolution(h, t)?.into_matrix())
}
