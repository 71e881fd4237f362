use thiserror::Error;

/// Errors raised by the numerical kernel and the operator layers above it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a nonempty matrix")]
    Empty { op: &'static str },
    #[error("{op} requires a square operand, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },
    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),
    #[error("algebra shapes differ: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("module lengths differ in {op}: {left} vs {right}")]
    LengthMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("block index {index} out of range for {len} summands")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("pseudoinverse lost its module structure (residual {residual:.3e})")]
    StructureLoss { residual: f64 },
    #[error("regularized iterates did not settle after {steps} steps (last increment {increment:.3e})")]
    NoConvergence { steps: usize, increment: f64 },
    #[error("operator is not in the joint commutant (residual {residual:.3e})")]
    NotInCommutant { residual: f64 },
    #[error("flattened dimension {dim} exceeds the commutant solver limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("rank {rank} requested for summand {summand} exceeds its maximum {max}")]
    InvalidRank {
        summand: usize,
        rank: usize,
        max: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
