use thiserror::Error;

/// Errors produced by constructors and operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two inputs have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A vector that must be normalized is not.
    #[error("state not normalized: squared norm deviates from 1 by {deviation:e}")]
    NotNormalized { deviation: f64 },

    /// A matrix that must be Hermitian is not.
    #[error("matrix not Hermitian: max |H - H^dagger| element = {deviation:e}")]
    NotHermitian { deviation: f64 },

    /// Exponential-decay fit rejected: |F| does not decay monotonically
    /// over the fit window.
    #[error("decay-rate fit unreliable: |F| is not monotonically decaying over the window (rms residual {residual:e})")]
    FitUnreliable { residual: f64 },

    /// Fock-space truncation invalidated by population reaching the top level.
    #[error("Fock truncation invalid: top-level population {leakage:e} exceeds {limit:e}")]
    Truncation { leakage: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
