//! Shared fixtures for the benchmarks.

use lowensim_core::encoding::unitary_dilation;
use lowensim_core::linalg::{self, c};
use lowensim_core::random;
use lowensim_core::zoo::GroverGaFamily;
use lowensim_core::{BlockEncoding, Result, SimInput, StateVector};

/// Squared Grover instance with one marked element and its uniform state.
pub fn grover(n: usize) -> Result<(SimInput, StateVector, f64)> {
    let fam = GroverGaFamily::new(n, vec![n / 3])?;
    Ok((SimInput::from_gap_amp(&fam.to_gap_amp()?)?, fam.uniform_state()?, fam.delta()))
}

/// Dilation of a random Hermitian matrix scaled to norm 0.9.
pub fn hermitian_encoding(dim: usize, seed: u64) -> Result<BlockEncoding> {
    let h = random::hermitian(dim, &mut random::rng(seed));
    unitary_dilation(&(&h * c(0.9 / linalg::spectral_norm(&h))))
}
