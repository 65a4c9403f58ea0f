use thiserror::Error;

use crate::dsl::Span;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("series carry different evaluation contexts")]
    ContextMismatch,

    #[error("cannot invert the zero series")]
    ZeroSeries,

    #[error("leading coefficient at q-exponent {q_exp} is not a single monomial in z")]
    NonMonomialLeading { q_exp: i64 },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("pochhammer step must be positive, got {0}")]
    InvalidStep(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot certify termination: {0}")]
    UncertifiedTermination(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("target order {target} exceeds the exact range {limit} of the source series")]
    OrderTooLarge { target: i64, limit: i64 },

    #[error("pole of the Appell-Lerch denominator at n = {0}")]
    Pole(i64),

    #[error("final side has negative minimal q-exponent {0}")]
    NegativeFloor(i64),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("at {span}: {msg}")]
    Eval { span: Span, msg: String },

    #[error("unknown identity `{0}`")]
    UnknownTarget(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Attaches a source span to an evaluation error that does not carry one yet.
    pub fn at(self, span: Span) -> Error {
        match self {
            Error::Eval { .. } | Error::Parse { .. } => self,
            other => Error::Eval { span, msg: other.to_string() },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
