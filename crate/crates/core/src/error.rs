use thiserror::Error;

/// Everything that can go wrong inside the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite payoff at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("infeasible move {0}")]
    InfeasibleMove(String),

    #[error("states {index} and {} are not one move apart", index + 1)]
    BrokenAdjacency { index: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("strategy {0} is not a strict Nash equilibrium")]
    NotStrictNash(usize),

    #[error("cost rule {rule} is not supported here: {reason}")]
    UnsupportedRule { rule: String, reason: String },

    #[error("path does not leave the basin of convention {0}")]
    NotEscaping(usize),

    #[error("guardrail: {what} needs {requested} states but the cap is {limit}; {hint}")]
    Guardrail {
        what: String,
        requested: u128,
        limit: u128,
        hint: String,
    },

    #[error("invalid frontier: {0}")]
    InvalidFrontier(String),

    #[error("no sign change while solving for {0}")]
    NoSignChange(String),

    #[error("no crossing of {0} inside the grid")]
    NoCrossing(String),

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("invalid segment: {0}")]
    InvalidSegment(String),

    #[error("internal numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
