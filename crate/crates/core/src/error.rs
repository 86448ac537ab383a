use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A probability vector had an entry below the round-off tolerance. For the
    /// reduction kernel this means the validity conditions were violated.
    #[error("validity violation: entry {index} is {value:e}")]
    NegativeMass { index: usize, value: f64 },

    #[error("validity violation: probabilities sum to {sum} (deviation {deviation:e})")]
    NotNormalized { sum: f64, deviation: f64 },

    #[error("absolute continuity violated at {index}: first measure has mass where the second has none")]
    AbsoluteContinuity { index: usize },

    #[error("scan enumeration needs {subsets} subsets, budget is {budget}")]
    BudgetExceeded { subsets: u128, budget: u64 },

    #[error("problem too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("graph has {found} vertices, expected {expected}")]
    VertexCountMismatch { expected: usize, found: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("line {line}: endpoint out of range in ({u}, {v})")]
    OutOfRange { line: usize, u: usize, v: usize },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}
