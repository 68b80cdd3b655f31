use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("states live on different grids")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized; normalize it first")]
    NotNormalized,

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("density has no mass to sample from")]
    EmptyDensity,

    /// Probability mass leaks past the edge of the position grid.
    #[error("boundary mass {mass:.3e} exceeds {limit:.0e}; use a larger grid (increase x_max)")]
    BoundaryMass { mass: f64, limit: f64 },

    /// Fock-space truncation is too small for the evolved state.
    #[error("cutoff guard violated: tail mass {tail:.3e} above {guard:.0e} at cutoff {cutoff}")]
    Cutoff { tail: f64, guard: f64, cutoff: usize },

    #[error("matrix is not symplectic (max deviation {0:.3e})")]
    NotSymplectic(f64),

    #[error("nothing to subtract: annihilation of the input gives the zero vector")]
    NothingToSubtract,

    #[error("post-selection window has zero acceptance mass")]
    ZeroAcceptance,
}
