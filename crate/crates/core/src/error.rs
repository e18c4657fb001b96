use thiserror::Error;

pub type Result<T> = std::result::Result<T, QuantumError>;

/// Failures raised while building or transforming states and operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("shape mismatch in {op}: {lhs:?} vs {rhs:?}")]
    Shape {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not Hermitian: max |a - a^dagger| = {max_deviation:e}, tolerance {tol:e}")]
    NotHermitian { max_deviation: f64, tol: f64 },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("{what} = {measured}, expected {expected} ± {tol:e}")]
    Validation {
        what: &'static str,
        measured: f64,
        expected: f64,
        tol: f64,
    },

    #[error("state is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}, tolerance {tol:e}")]
    NotPositive { min_eigenvalue: f64, tol: f64 },

    #[error("Bloch vector lies outside the unit ball: |n| = {norm}")]
    OutsideBlochBall { norm: f64 },

    #[error("bipartite dimensions are required for {op}")]
    MissingDims { op: &'static str },

    #[error("dims {d_a}x{d_b} do not factor dimension {dim}")]
    DimsMismatch { d_a: usize, d_b: usize, dim: usize },

    #[error("{op} is only defined for dimension {expected}, got {got}")]
    UnsupportedDimension {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("measurement branch {label} has probability {probability:e}")]
    DegenerateBranch { label: String, probability: f64 },
}
