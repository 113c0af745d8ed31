use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("extension degree m = {0} is outside 1..=16")]
    DegreeOutOfRange(u32),

    #[error("zero has no multiplicative inverse")]
    InverseOfZero,

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("could not remove parallel edges after {0} attempts")]
    RepairFailed(usize),

    #[error("malformed code file, line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact density evolution infeasible: {compositions} vote compositions exceed the limit of {limit}")]
    Infeasible { compositions: f64, limit: f64 },

    #[error("xi schedule has {have} entries but {need} iterations were requested")]
    ScheduleTooShort { have: usize, need: usize },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
