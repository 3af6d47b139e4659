use thiserror::Error;

/// Harness failures, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum LabError {
    /// Malformed input, unknown keys, missing lists, unknown suites.
    #[error("config error: {0}")]
    Config(String),
    /// Well-formed input that describes an impossible run.
    #[error("validation error: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] boussinesq::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Validation(_) => 3,
            LabError::Io(_) | LabError::Core(_) => 1,
        }
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> LabError {
        LabError::Io(e.into())
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;

pub(crate) fn invalid(e: boussinesq::Error) -> LabError {
    LabError::Validation(e.to_string())
}
