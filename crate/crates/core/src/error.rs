use thiserror::Error;

/// Errors raised by the simulator.
///
/// The variants map onto the command-line exit codes: configuration
/// problems exit with 1, numerical failures with 2 and oracle mismatches
/// with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-supplied parameters or configuration text.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller broke a documented precondition (shape mismatch, bad index).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The numerics went wrong mid-run.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Dense oracle would exceed its size guard.
    #[error("oracle size guard exceeded: dimension {dim} > {limit}")]
    SizeGuard { dim: usize, limit: usize },

    /// Production engine and oracle disagree.
    #[error("verification mismatch: {0}")]
    Verification(String),

    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Checkpoint(_) | Error::Contract(_) => 1,
            Error::Numerical(_) | Error::SizeGuard { .. } => 2,
            Error::Verification(_) => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
