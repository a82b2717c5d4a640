use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown seed: {0}")]
    UnknownSeed(String),
    #[error("arity mismatch: pattern `{pattern}` takes {expected} input(s), got {got}")]
    ArityMismatch {
        pattern: String,
        expected: usize,
        got: usize,
    },
    #[error("no detector for pattern `{0}`")]
    NoDetector(String),
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("constraint `{0}` has no seeds")]
    NoSeeds(String),
    #[error("invalid seed `{seed}`: {reason}")]
    InvalidSeed { seed: String, reason: String },
    #[error("unrecognized constraint form: {0}")]
    UnrecognizedConstraint(String),
    #[error("duplicate constraint id `{0}`")]
    DuplicateConstraint(String),
    #[error("definition count mismatch for `{pattern}`: expected {expected}, got {got}")]
    DefinitionCount {
        pattern: String,
        expected: usize,
        got: usize,
    },
    #[error("malformed input {path}: {message}")]
    Malformed { path: String, message: String },
}

/// One line on the diagnostic stream: `path:line:col: message`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub path: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: &str, line: u32, column: u32, message: &str) -> Self {
        Diagnostic {
            path: path.to_string(),
            line,
            column,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.path, self.line, self.column, self.message
        )
    }
}
