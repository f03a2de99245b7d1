use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The search visited more configurations than allowed. The answer is
    /// unknown, not negative.
    #[error("search limit exceeded after {visited} configurations (cap {cap})")]
    LimitExceeded { visited: usize, cap: usize },

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("symbol {0:?} is not in the input alphabet")]
    UnknownSymbol(char),

    #[error("malformed {format} document: {message}")]
    Format { format: &'static str, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("grammar generates the empty language")]
    EmptyLanguage,

    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),

    #[error("run leaves unmatched stack symbols under bottom-only acceptance")]
    UnbalancedRun,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("matchings come from different strings ({left:?} vs {right:?})")]
    SourceMismatch { left: String, right: String },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("arc sets are not jointly well-nested: {0}")]
    NotJointlyWellNested(String),

    #[error("the selected arcs do not cross")]
    NoCrossing,

    #[error("invalid block specification: {0}")]
    InvalidSpec(String),

    #[error("membership oracle failed: {0}")]
    OracleFailure(String),

    #[error("word {0:?} is not in the language")]
    NotInLanguage(String),

    #[error("unknown example {0:?}")]
    UnknownExample(String),

    #[error("state bound too large to evaluate ({0} bits)")]
    Overflow(u64),

    #[error("word of length {len} exceeds the configured maximum {max}")]
    WordTooLong { len: usize, max: usize },
}

impl Error {
    pub(crate) fn format(format: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            format,
            message: message.into(),
        }
    }
}
