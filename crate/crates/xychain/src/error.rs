//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum. Variants are grouped by the stage that raises them:
/// parameter validation, quadrature / eigensolver convergence, state validity,
/// and dataset-shape problems in the analysis layer.
#[derive(Debug, Error)]
pub enum XyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Adaptive quadrature exceeded its depth limit before reaching the
    /// requested absolute tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    /// The two fields of a fidelity evaluation have their ground states in
    /// different fermion-parity sectors, so the Bogoliubov-angle overlap
    /// product is not defined.
    #[error("parity sector mismatch: {0}")]
    SectorMismatch(String),

    /// Lanczos ran out of restarts before the residual dropped below tolerance.
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("dimension too large: {0}")]
    DimensionTooLarge(String),

    /// Single-site magnetizations outside the Bloch ball.
    #[error("Bloch vector violation: {0}")]
    BlochViolation(String),

    /// A density matrix with an eigenvalue below the repairable threshold;
    /// signals inconsistent correlator input rather than roundoff.
    #[error("density matrix not positive: {0}")]
    NotPositive(String),

    /// A scaling slice has no interior maximum to locate.
    #[error("no interior peak: {0}")]
    NoPeak(String),

    /// Collapse against a converged reference requested, but the dataset has
    /// no slice that can serve as the reference.
    #[error("reference slice missing: {0}")]
    ReferenceMissing(String),

    #[error("insufficient data range: {0}")]
    InsufficientRange(String),
}

pub type XyResult<T> = Result<T, XyError>;
