use thiserror::Error;

use crate::phase::Stratum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("divergent value: {0}")]
    Divergence(String),
    #[error("operation not defined on stratum {0:?}")]
    UnsupportedStratum(Stratum),
    #[error("pole: {0}")]
    Pole(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("step budget of {0} exceeded")]
    MaxSteps(usize),
    #[error("no sign change on [{a}, {b}]")]
    NoBracket { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
