use halfline_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("fixture mismatch: {0}")]
    Mismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    /// Prefixes the message with a config field path.
    pub fn at(self, path: &str) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{path}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{path}: {m}")),
            other => other,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DimensionMismatch(_)
            | CoreError::InvalidBoundaryCondition(_)
            | CoreError::NotUnitary { .. }
            | CoreError::AngleOutOfRange { .. }
            | CoreError::InvalidPotential(_)
            | CoreError::InvalidArgument(_)
            | CoreError::MismatchedPoints(..) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
