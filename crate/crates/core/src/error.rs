use thiserror::Error;

/// Errors raised by the quantum, classical and feasibility calculi.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error(
        "eigen-solver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})"
    )]
    IterationFailure { sweeps: usize, residual: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("outcome {outcome} is not in the spectrum of observable `{label}`")]
    UnknownOutcome { label: String, outcome: f64 },

    #[error(
        "zero-probability outcome (probability {probability:e}); conditioning on a null event"
    )]
    ZeroProbabilityOutcome { probability: f64 },

    #[error("site mismatch: {0}")]
    SiteMismatch(String),

    #[error("operation requires a pure state")]
    NotPure,

    #[error("observables `{first}` and `{second}` do not commute (max |[A,B]| = {commutator:e}); no joint probability distribution exists")]
    NotCompatible {
        first: String,
        second: String,
        commutator: f64,
    },

    #[error("invalid probability space: {0}")]
    InvalidSpace(String),

    #[error("probability space has no site structure")]
    NotSiteStructured,

    #[error("filter matches no records; the subensemble is empty")]
    EmptySubensemble,

    #[error("invalid behavior: {0}")]
    InvalidBehavior(String),

    #[error("behavior violates no-signaling (marginal deviation {deviation:e})")]
    SignalingBehavior { deviation: f64 },

    #[error("observable `{label}` has {clusters} spectral clusters; exactly 2 are required")]
    OutcomeArity { label: String, clusters: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
