use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision of {digits} digits is below the minimum of {min}")]
    Precision { digits: u32, min: u32 },

    #[error("inner series has a nonzero constant term")]
    NonzeroConstant,

    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),

    #[error("input series has order {have}, need at least {need}")]
    InsufficientOrder { have: usize, need: usize },

    #[error("root finder did not converge after {iterations} iterations (max residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64, partial: Vec<(f64, f64)> },

    #[error("mapping inversion failed at step {step}: {reason}")]
    Inversion { step: usize, reason: String },

    #[error("continued fraction breaks down at depth {depth}")]
    Breakdown { depth: usize },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("cache mismatch: {0}")]
    CacheMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
