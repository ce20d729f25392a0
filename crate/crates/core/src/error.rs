use thiserror::Error;

/// Errors raised by propagation, phase extraction, gate construction and the
/// loop solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("Bloch vector is not a unit vector (norm = {norm})")]
    NotUnitVector { norm: f64 },

    #[error("{steps} steps requested, at least {min} required")]
    TooFewSteps { steps: usize, min: usize },

    #[error("evolution is not cyclic (overlap defect {defect:.3e} exceeds {tolerance:.1e})")]
    NonCyclic { defect: f64, tolerance: f64 },

    #[error("Bloch path is not closed (end-point gap {gap:.3e})")]
    OpenPath { gap: f64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("outside the physical domain: {0}")]
    Domain(String),

    #[error(
        "solver did not converge after {iterations} iterations (residual norm {residual:.3e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
