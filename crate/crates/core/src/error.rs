use thiserror::Error;

pub type Result<T> = std::result::Result<T, RspError>;

#[derive(Debug, Error)]
pub enum RspError {
    /// The reconstructed density matrix has an eigenvalue below `-tol`.
    #[error("state is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    InvalidState { min_eigenvalue: f64 },

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    /// Choi matrix of the affine map is not positive semidefinite.
    #[error("channel is not completely positive (Choi minimum eigenvalue {min_eigenvalue:.3e})")]
    InvalidChannel { min_eigenvalue: f64 },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("no closed form available for {0}")]
    NoClosedForm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
