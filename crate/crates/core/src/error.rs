use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("level {level} out of range (max {max})")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid does not include the boundary lines of the fundamental domain")]
    MissingBoundary,
    #[error("grid {nx}x{ny} is not commensurate with n_phi = {nphi}")]
    Incommensurate { nx: usize, ny: usize, nphi: u32 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("lattice sum truncation tail {tail:e} exceeds tolerance {tolerance:e}")]
    Truncation { tail: f64, tolerance: f64 },
    #[error("input states are not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    #[error("matrix is not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),
    #[error("centre recovery failed: {0}")]
    CenterNotFound(String),
    #[error("translation expectations are consistent with {} distinct centres", .0.len())]
    AmbiguousCenter(Vec<(f64, f64)>),
    #[error("{0}")]
    Parse(String),
}
