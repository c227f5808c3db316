use thiserror::Error;

/// Failure modes across the toolkit. Variants carry enough context to
/// explain the rejection without re-running the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("projected norm {norm:.3e} is below 1e-12")]
    EmptyProjection { norm: f64 },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimMismatch { expected: (usize, usize), found: (usize, usize) },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("encoded operator norm {norm:.12} exceeds 1")]
    NormExceeded { norm: f64 },

    #[error("factor {index} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { index: usize, expected: (usize, usize), found: (usize, usize) },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("epsilon {eps:e} outside the admissible range ({lo:e}, {hi:e})")]
    EpsilonRange { eps: f64, lo: f64, hi: f64 },

    #[error("fourier fit failed: sup error {sup_error:.3e} exceeds {target:.3e}")]
    FitFailed { sup_error: f64, target: f64 },

    #[error("polynomial certificate failed: {0}")]
    CertificationFailed(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("polynomial exceeds 1 on [-1,1] (max {max_abs:.12})")]
    UnnormalizedPolynomial { max_abs: f64 },

    #[error("polynomial has mixed parity")]
    MixedParity,

    #[error("encoding unitary is not self-inverse (deviation {deviation:.3e})")]
    NotSelfInverse { deviation: f64 },

    #[error("graph is not regular: {0}")]
    NotRegular(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("clock chain of length {gprime} exceeds the limit {limit}")]
    TooLarge { gprime: usize, limit: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("state leaks {leakage:.3e} outside the low-energy subspace")]
    StateNotLowEnergy { leakage: f64 },

    #[error("ground state is degenerate (gap {gap:.3e})")]
    DegenerateGroundState { gap: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
