use thiserror::Error;

/// Errors produced by parsing, construction and decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{name}` at offset {pos}")]
    UnknownSymbol { name: String, pos: usize },

    #[error("symbol `{symbol}` has rank {expected} but is applied to {found} argument(s) at offset {pos}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        pos: usize,
    },

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: usize },

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("internal verification failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn limit(what: impl Into<String>, limit: usize) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            limit,
        }
    }
}
