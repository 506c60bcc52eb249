use thiserror::Error;

/// Errors raised by the arithmetic, comparison and law-checking layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EscherError {
    /// Interval evaluation reached the precision cap without separating the
    /// value from zero.
    #[error("ambiguous comparison: no separation at {cap_bits} bits")]
    AmbiguousComparison { cap_bits: u32 },

    /// Operation defined only on R ∪ ςR was given a general complex value.
    #[error("not an Escherian number: {0}")]
    NotEscherian(String),

    #[error("not a real number: {0}")]
    NotReal(String),

    #[error("division by zero")]
    ZeroDivisor,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("unknown law: {0}")]
    UnknownLaw(String),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid precision configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = EscherError> = std::result::Result<T, E>;
