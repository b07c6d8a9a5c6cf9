use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {found}, expected {expected}")]
    BadTrace { found: f64, expected: f64 },

    #[error("operator is not unitary (max |U U^dagger - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("measurement outcome {outcome} has probability {probability:.3e} and cannot be post-selected")]
    Unattainable { outcome: u8, probability: f64 },
}

impl Error {
    /// True for errors that indicate a broken numerical contract rather than bad user input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPositive { .. }
                | Error::BadTrace { .. }
                | Error::NotUnitary { .. }
                | Error::NonFinite
                | Error::Unattainable { .. }
        )
    }
}
