use thiserror::Error;

use crate::witness::ConstructionTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("polygon is not convex at vertex {index} (turn {cross:e})")]
    NotConvex { index: usize, cross: f64 },

    #[error("affine map is singular (det = {det:e})")]
    SingularMap { det: f64 },

    #[error("origin is not strictly interior to the polygon")]
    NotInterior,

    #[error("hexagon search did not converge (best residual {residual:e})")]
    Convergence { residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("centroid lemma violated: {0}")]
    LemmaViolation(String),

    /// A containment the construction guarantees did not hold numerically.
    /// Carries the full trace for inspection.
    #[error("proof violation: {detail}")]
    ProofViolation {
        detail: String,
        trace: Box<ConstructionTrace>,
    },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::Degenerate(_) => "degenerate",
            Error::NotConvex { .. } => "not_convex",
            Error::SingularMap { .. } => "singular_map",
            Error::NotInterior => "not_interior",
            Error::Convergence { .. } => "convergence",
            Error::Domain(_) => "domain",
            Error::LemmaViolation(_) => "lemma_violation",
            Error::ProofViolation { .. } => "proof_violation",
            Error::Certification(_) => "certification",
            Error::Numeric(_) => "numeric",
            Error::Json(_) => "json",
        }
    }

    /// Whether the error signals a failed verification (as opposed to bad input).
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::LemmaViolation(_)
                | Error::ProofViolation { .. }
                | Error::Certification(_)
                | Error::Convergence { .. }
        )
    }
}
