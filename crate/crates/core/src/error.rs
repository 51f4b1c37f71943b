use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("domain error in {node}: argument {value}")]
    Domain { node: String, value: f64 },

    #[error("numerical failure: {0}")]
    NonFinite(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no solution: {0}")]
    NoSolution(String),
}

impl Error {
    pub(crate) fn domain(node: impl Into<String>, value: f64) -> Self {
        Error::Domain {
            node: node.into(),
            value,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by malformed or inadmissible input, as opposed
    /// to numerical breakdown during evaluation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::Invalid(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
