use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("element {element} out of range for universe of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error("tuple of arity {found} given for symbol `{symbol}` of arity {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("partition covers {partition} elements but the structure has {structure}")]
    PartitionSize { partition: usize, structure: usize },

    #[error("digraph is not an oriented tree")]
    NotATree,

    #[error("{what} needs {needed} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid sproink description: {0}")]
    InvalidSproink(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("not a near-unanimity function: {0}")]
    NotNuf(String),

    #[error("not a retraction: {0}")]
    NotRetraction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
