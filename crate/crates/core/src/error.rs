use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed network text. Line and column are 1-based.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown state `{state}` for variable `{variable}`")]
    UnknownState { variable: String, state: String },

    #[error("CPT for `{variable}` has wrong shape: {detail}")]
    CptShape { variable: String, detail: String },

    #[error("CPT for `{variable}` row {row} sums to {sum}, expected 1")]
    RowSum {
        variable: String,
        row: usize,
        sum: f64,
    },

    #[error("cycle detected through variables {0:?}")]
    Cycle(Vec<String>),

    #[error("variable `{0}` is bound to conflicting states")]
    ConflictingBinding(String),

    #[error("malformed binding `{0}`, expected Var=state")]
    MalformedBinding(String),

    /// The conditioning event has probability zero.
    #[error("impossible conditioning: p({0}) = 0")]
    ImpossibleConditioning(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("state space of {size} joint assignments exceeds the cap of {cap}")]
    StateSpaceTooLarge { size: u128, cap: u128 },

    #[error("explanation tree has no usable path")]
    EmptyTree,
}
