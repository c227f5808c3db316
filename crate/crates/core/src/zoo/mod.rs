//! Hamiltonian families used as test instances.

pub mod clock;
pub mod expander;
pub mod grover;
pub mod two_level;

pub use clock::{clock_hamiltonian, gaussian_wavepacket, ClockChain, ClockSpec, Wavepacket, WavepacketSpec};
pub use expander::{expander_ga_hamiltonian, ExpanderHamiltonian, Graph};
pub use grover::{grover_hamiltonian, GroverGaFamily};
pub use two_level::two_level_theta;
