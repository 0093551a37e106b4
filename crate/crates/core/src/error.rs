//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// `InvalidInput` covers precondition violations (bad parameters, wrong
/// boundary-condition flavor, out-of-range moduli). The remaining variants are
/// numerical diagnostics and carry enough state to decide whether to retry at
/// higher resolution.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigensolver failed: {0}")]
    SolverFailure(String),

    /// Richardson refinement could not reach the requested error estimate
    /// even after the grid-escalation budget was spent.
    #[error("refinement stalled: achieved error estimate {achieved:.3e}, target {target:.3e}")]
    RefinementStalled { achieved: f64, target: f64 },

    #[error("ODE integration failed at x = {at:.6e}: {reason}")]
    IntegrationFailure { at: f64, reason: String },

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    /// An eigenfunction could not be assigned a reflection-symmetry class and
    /// no independent route could certify the value.
    #[error("symmetry classification ambiguous: reflection correlation {correlation:.6}")]
    ClassificationAmbiguous { correlation: f64 },

    /// A numerical certificate did not hold: the computed margin is not
    /// positive, or a consistency guard between two independent routes failed.
    #[error("certificate failed: {claim} (margin {margin:.6e})")]
    CertificateFailed { claim: String, margin: f64 },
}
