//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SaraError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// LAD value outside the physical interval `[-0.5, 0.5]`.
    #[error("LAD {0} does not represent a physical angle")]
    NonPhysicalLad(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionError { expected: usize, got: usize },

    #[error("invalid sampling plan: {0}")]
    PlanError(String),

    #[error("scan does not match the reconstruction grid: {0}")]
    GridError(String),

    #[error("invalid detector configuration: {0}")]
    ConfigError(String),

    #[error("metric undefined: {0}")]
    MetricError(String),
}
