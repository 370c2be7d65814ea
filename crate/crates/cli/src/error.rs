use serde_json::json;
use thiserror::Error;

/// Everything a command can fail with, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or parameters; nothing was computed.
    #[error("{0}")]
    Validation(String),
    /// A formula, quadrature or sampler failed on valid input.
    #[error(transparent)]
    Numeric(#[from] gcplab::Error),
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Numeric(_) => "numeric",
            CliError::VerificationFailed { .. } => "verification",
            CliError::Io(_) => "io",
        }
    }

    /// `{"error": {"kind": ..., "message": ..., "exit_code": ...}}`.
    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}

/// Domain errors raised while building parameters are validation errors.
pub(crate) fn invalid(e: gcplab::Error) -> CliError {
    CliError::Validation(e.to_string())
}
