//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by matrix construction, decomposition, solvers, maps,
/// and inequality evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be Hermitian deviates from its adjoint by more
    /// than the symmetrization tolerance.
    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    NonHermitian { asymmetry: f64, tolerance: f64 },

    /// An iterative procedure ran out of its iteration budget.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Input lies outside the mathematical domain of the operation
    /// (e.g. a matrix that is not positive definite where positivity is
    /// required).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Ky Fan index outside `1..=min(rows, cols)`.
    #[error("bad Ky Fan index: {0}")]
    BadK(String),

    /// Mean parameter `t` outside the range the operation accepts.
    #[error("bad mean parameter t: {0}")]
    BadT(String),

    /// Spectral bounds that are not `0 < m <= M`.
    #[error("bad spectral bounds: {0}")]
    BadBounds(String),

    /// Any other invalid argument (weights, Kraus families, seeds, ...).
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// A check identifier that is not in the catalog.
    #[error("unknown check id: {0}")]
    UnknownCheck(String),

    /// Parameters outside the hypotheses under which a check's inequality
    /// is asserted; the caller should record a skip, not a failure.
    #[error("parameter outside check hypotheses: {0}")]
    ParamOutOfDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
