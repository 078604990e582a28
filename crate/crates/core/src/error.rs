use thiserror::Error;

/// Errors surfaced by the exact-geometry and series layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid ratio family: {0}")]
    InvalidFamily(String),
    #[error("vector is not in the lattice generated by the configuration")]
    NotInGroup,
    #[error("vector is not in the cone")]
    NotInCone,
    #[error("no integer covector c with c.a_j = 1 for all j")]
    NoHeightCovector,
    #[error("subset enumeration needs {needed} subsets, cap is 2^{cap}")]
    SubsetCapExceeded { needed: usize, cap: u32 },
    #[error("enumeration region is unbounded in variable {0}")]
    Unbounded(usize),
    #[error("inequality system grew past the size cap ({0} rows)")]
    SystemTooLarge(usize),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("newton iteration failed to converge")]
    NewtonDiverged,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
