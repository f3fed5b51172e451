use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("transform length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("empty roll-off band: N = {n_fft} too small for alpha = {alpha}")]
    EmptyBand { n_fft: usize, alpha: f64 },

    #[error("{path}:{line}: {msg}")]
    Profile {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by user-supplied configuration or input files.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Profile { .. } | Error::InvalidParameter(_) | Error::EmptyBand { .. }
        )
    }
}
