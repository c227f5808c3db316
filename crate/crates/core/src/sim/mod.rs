//! Low-energy simulation through spectral gap amplification, the generic
//! QSP baseline, and the search and clock experiments built on them.

pub mod clock;
pub mod constants;
pub mod plan;
pub mod random_time;
pub mod simulate;

pub use clock::{clock_propagation_fidelity, ClockOutcome};
pub use constants::{constants, Constants};
pub use plan::{choose_gamma, plan_with_gamma, predicted_degree, Regime, SimPlan};
pub use random_time::{random_time_projection, RandomTimeOutcome};
pub use simulate::{baseline_qsp, plan_polys, simulate_low_energy, SimInput, SimOptions, SimReport};
