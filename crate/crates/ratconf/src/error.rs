//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by constructors, numeric routines, and the solver.
///
/// Variants are grouped by cause so that a caller (the CLI in particular) can
/// map them to exit codes: invalid inputs versus numeric domain violations
/// versus internal failures that indicate a bug.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received structurally invalid input
    /// (dimension mismatch, empty collection, weights off the simplex, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numeric precondition required by a formula does not hold
    /// (probability outside [0,1], nonpositive margin parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Bayesian updating hit a dataset with zero likelihood under every model
    /// in the support, so the posterior is undefined.
    #[error("zero likelihood: {0}")]
    ZeroLikelihood(String),

    /// The fast analytic checker and the solver-backed checker disagreed on a
    /// replication while cross checking.  This is always reported, never
    /// silently reconciled.
    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),

    /// An internal algorithm failed to converge or produced an inconsistent
    /// state.  Indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
