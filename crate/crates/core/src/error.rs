use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("input-domain error: {0}")]
    Domain(String),

    /// A text file could not be parsed.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// Parsed input is syntactically fine but violates a structural rule.
    #[error("validation error{}: {reason}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Validation { line: Option<usize>, reason: String },

    /// An exhaustive search would exceed its configured cap.
    #[error("resource limit: {what} has size {size}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        size: u128,
        cap: u128,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation {
            line: None,
            reason: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
