use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] opercalc::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 verification failure, 2 input error, 3 precision exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(opercalc::Error::PrecisionExhausted { .. }) => 3,
            CliError::Core(opercalc::Error::StructureCheck(_)) => 1,
            _ => 2,
        }
    }
}
