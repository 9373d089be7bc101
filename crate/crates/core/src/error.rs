//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two sequences that must have equal length do not.
    #[error("length mismatch: {left} terms vs {right} terms")]
    LengthMismatch { left: usize, right: usize },

    /// An operation that requires exact rational terms was handed an
    /// inexact (high-precision real) sequence.
    #[error("sequence `{0}` carries inexact terms; use the precision-bounded variant")]
    InexactSequence(String),

    /// A Hankel matrix of the requested order needs more terms than the
    /// sequence holds.
    #[error("insufficient terms: need {needed}, sequence has {have}")]
    InsufficientTerms { needed: usize, have: usize },

    /// `verify_factorization` was asked about an identity it does not know.
    #[error("unknown factorization identity: {0}")]
    UnknownIdentity(String),

    /// A Mellin transform was requested outside the exponent range where the
    /// representing measure is determinate, so the closed form is not
    /// asserted. The citation names the governing statement.
    #[error("exponent c = {c} is outside the determinate range for {family} ({citation}); pass the uncertified flag to evaluate anyway")]
    OutsideDeterminateRange {
        family: String,
        c: f64,
        citation: String,
    },

    /// A completely-monotone check would evaluate across a pole.
    #[error("pole at x = {0} lies inside the evaluation domain")]
    PoleInDomain(String),

    /// Quadrature did not meet the tolerance within the node budget. The
    /// best estimate and its error estimate ride along.
    #[error("quadrature did not converge within the node budget: best = {best}, errest = {errest}")]
    QuadratureNoConvergence { best: String, errest: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
