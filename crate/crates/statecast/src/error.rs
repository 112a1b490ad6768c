use std::path::PathBuf;

/// Errors produced anywhere in the pipeline.
///
/// Input-side failures (I/O, parsing, record validation, bad arguments) map
/// to CLI exit code 2; model/runtime failures map to exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// A record violated one of the corpus rules. Carries the policy id and
    /// the rule that failed so callers can report exactly what to fix.
    #[error("policy {policy}: {rule}")]
    Invariant { policy: String, rule: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Failure while training, predicting, or scoring a model.
    #[error("model error: {0}")]
    Model(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn invariant(policy: impl Into<String>, rule: impl Into<String>) -> Self {
        Error::Invariant {
            policy: policy.into(),
            rule: rule.into(),
        }
    }

    /// Stable exit code contract: 0 success, 1 model/runtime, 2 input/validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Model(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
