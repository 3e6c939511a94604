use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {residual:e})"
    )]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("{0}")]
    Domain(String),
    #[error("projectors do not resolve the identity (deviation {deviation:e})")]
    IncompleteMeasurement { deviation: f64 },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{what} of {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("per-qubit information gap is zero at this precision; no finite n works")]
    Unbounded,
    #[error("could not pack {count} vectors in dimension {dim} below overlap {epsilon} within {attempts} attempts")]
    PackingFailure {
        dim: usize,
        count: usize,
        epsilon: f64,
        attempts: usize,
    },
    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate target index {0}")]
    DuplicateTargets(usize),
    #[error("unknown strategy `{name}` for {party}")]
    UnknownStrategy { party: String, name: String },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
    #[error("deserialize error: {0}")]
    Deserialize(String),
    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
