use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(#[from] dce_core::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} check(s) failed")]
    CheckFailed(usize),
}

impl CliError {
    /// 2 for bad input, 3 for numerical or I/O failure, 1 for a failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Solver(dce_core::Error::InvalidParameter { .. } | dce_core::Error::ForbiddenBand { .. }) => 2,
            Self::Solver(_) | Self::Io(_) => 3,
            Self::CheckFailed(_) => 1,
        }
    }
}
