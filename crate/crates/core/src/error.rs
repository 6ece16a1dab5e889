use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigensolver did not converge after {iterations} iterations (off-diagonal norm {off_norm:e})")]
    NoConvergence { iterations: usize, off_norm: f64 },

    #[error("no interior local maximum in success probability; best scanned value {p_best} at t = {t_best}")]
    NoLocalMaximum { t_best: f64, p_best: f64 },

    #[error("peak probability landscape is flat (spread {spread:.3e}); no critical jumping rate")]
    DegenerateLandscape { spread: f64 },

    #[error("regime {regime} requires {requirement}")]
    RegimeMismatch {
        regime: &'static str,
        requirement: &'static str,
    },

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
