use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("clique budget must be positive")]
    NonPositiveBudget,
    #[error("clique budget {0} exceeds the supported maximum of {max}", max = crate::MAX_COLUMNS)]
    BudgetTooLarge(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("integral weights required (entry {row},{col}); use the LP solver for fractional instances")]
    NonIntegral { row: usize, col: usize },
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),
    #[error("generator: {0}")]
    Generator(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
