//! Low-energy Hamiltonian simulation by spectral gap amplification.
//!
//! Dense reference implementation: block encodings, polynomial
//! approximations, singular value transforms and the Hamiltonian families
//! used to exercise them.

// `!(x > 0.0)` is the NaN-rejecting guard; small fixed loops index several arrays
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod encoding;
pub mod error;
pub mod gapamp;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod random;
pub mod sim;
pub mod svt;
pub mod zoo;

pub use encoding::{
    a_from_block_encoded_t, assemble_gap_amplifiable, extract_block, lcu_to_block_encoding, sga_block_encoding,
    t_from_block_encoded_a, verify_block_encoding, AmplifiedEncoding, BlockEncoding, LcuSpec,
};
pub use error::{Error, Result};
pub use gapamp::{GapAmpHamiltonian, GapAmpTerm};
pub use linalg::{CMatrix, CVector};
pub use operator::{
    exact_evolution, low_energy_projector, project_to_low_energy, spectral_decompose, Operator, OperatorFlags,
    SpectralDecomp, StateVector,
};
pub use sim::{
    baseline_qsp, choose_gamma, clock_propagation_fidelity, random_time_projection, simulate_low_energy, Regime, SimInput,
    SimOptions, SimPlan, SimReport,
};
pub use svt::{apply_svt, lcu_combine_evolution, walk_chebyshev, QueryLedger, SvtContext};
