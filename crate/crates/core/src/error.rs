use thiserror::Error;

/// Errors raised while building states, functions, ensembles, or reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {dim} is outside the supported range {min}..={max}")]
    BadDim { dim: usize, min: usize, max: usize },

    #[error("not Hermitian: max |a_ij - conj(a_ji)| = {asymmetry:e}")]
    NonHermitian { asymmetry: f64 },

    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one: tr = {trace}")]
    BadTrace { trace: f64 },

    #[error("state vector is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid probability vector: {0}")]
    BadProbVector(String),

    #[error("rank {rank} is invalid for dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("index {index} out of range for dimension {dim}")]
    BadIndex { index: usize, dim: usize },

    #[error("unknown simplex function `{0}` (expected l1, fidelity or entropy)")]
    UnknownFunction(String),

    #[error("`{name}` vanishes at the uniform vector of dimension {dim}; cannot normalize")]
    ZeroAtUniform { name: String, dim: usize },

    #[error("no closed-form mixed-state coherence registered for `{0}`; use roof mode")]
    UnknownDirectMeasure(String),

    #[error("matrix is not an isometry: max |V^dagger V - I| = {deviation:e}")]
    NotIsometry { deviation: f64 },

    #[error("isometry has {got} columns but the state has rank {expected}")]
    RankMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("ensemble does not reproduce its state: weight sum {weight_sum}, max deviation {deviation:e}")]
    BadEnsemble { weight_sum: f64, deviation: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid detector configuration: {0}")]
    BadDetectors(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
