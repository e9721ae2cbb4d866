//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LesError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("insufficient history: need {needed} time levels, have {have}")]
    InsufficientHistory { needed: usize, have: usize },

    #[error("quadrature produced a non-finite value at ({t}, {x:?})")]
    QuadratureFailure { t: f64, x: Vec<f64> },

    #[error("analytic denominator vanishes near (t={t}, x={x}): phi={phi}")]
    PhiVanishes { t: f64, x: f64, phi: f64 },

    #[error("solver blow-up at step {step} (t={time:.6}): max|u|={max_abs_u:.3e}, cfl={cfl:.3e}")]
    BlowUp {
        step: usize,
        time: f64,
        max_abs_u: f64,
        cfl: f64,
    },

    #[error("config error at {path}:{line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LesError>;
