use thiserror::Error;

use crate::engine::EngineError;

/// Errors raised by the algorithm modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MrcError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("epsilon {eps} outside [{lo}, {hi}]")]
    EpsilonOutOfRange { eps: f64, lo: f64, hi: f64 },
    #[error("bilinear decomposition invalid: {0}")]
    DecompositionInvalid(String),
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("entry {value} outside [-{bound}, {bound}]")]
    RangeExceeded { value: i64, bound: i64 },
    #[error("negative cycle through vertex {0}")]
    NegativeCycle(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("negative weight {w} on edge {u}->{v}")]
    NegativeWeight { u: usize, v: usize, w: i64 },
    #[error("path reconstruction failed: {0}")]
    ReconstructionFailure(String),
    #[error("no replacement path exists")]
    NoReplacement,
    #[error("no second simple path exists")]
    NoSecondPath,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MrcError>;
