//! Frozen calibration constants, shipped as `data/constants.json`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::zoo::clock::{gate_operator, ClockSpec, GateDoc, WavepacketSpec};

const RAW: &str = include_str!("../../data/constants.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constants {
    pub version: String,
    pub degree: DegreeConstants,
    pub expander: ExpanderDefaults,
    pub clock: ClockDefaults,
}

/// Fit of measured polynomial degrees to
/// `c1 t sqrt(lambda Gamma) + c2 sqrt(lambda/Gamma) ln(1/eps)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeConstants {
    pub c1: f64,
    pub c2: f64,
    pub reference_grid: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpanderDefaults {
    pub degree: usize,
    /// Low-energy cutoff `c/N` applied to the uniform state.
    pub cutoff_c: f64,
    pub seed: u64,
}

/// Clock instance and wavepacket constants found by offline search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClockDefaults {
    pub n_qubits: usize,
    pub circuit: Vec<GateDoc>,
    pub c1: usize,
    pub c2: usize,
    pub sigma_hat: f64,
    pub p0_hat: f64,
    pub t_hat: f64,
}

impl ClockDefaults {
    pub fn spec(&self) -> Result<ClockSpec> {
        let gates = self.circuit.iter().map(|g| gate_operator(g, self.n_qubits)).collect::<Result<Vec<_>>>()?;
        ClockSpec::new(self.n_qubits, gates, self.c1, self.c2)
    }

    /// Packet centered in the leading padding.
    pub fn wavepacket(&self, spec: &ClockSpec) -> WavepacketSpec {
        WavepacketSpec::centered(spec, self.sigma_hat, self.p0_hat)
    }
}

pub fn constants() -> &'static Constants {
    static CELL: OnceLock<Constants> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(RAW).expect("shipped constants parse"))
}
