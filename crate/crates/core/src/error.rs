use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("label {label} out of range 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("game is degenerate: {0}")]
    Degenerate(String),
    #[error("pivoting revisited a vertex after {steps} steps")]
    Cycling { steps: u64 },
    #[error("ray termination while entering variable {0}")]
    Unbounded(usize),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("no equilibrium found: {0}")]
    NotFound(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
