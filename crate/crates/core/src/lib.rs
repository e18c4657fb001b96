//! Bipartite entanglement toolkit: qubit density operators and the Bloch
//! ball, partial trace and partial transpose, Schmidt decomposition, the
//! positive-partial-transpose separability test, CHSH correlations against
//! the local-hidden-variable bound, and single-qubit teleportation.
//!
//! All matrices are dense [`ComplexMatrix`] values; composite kets `|kl⟩`
//! are indexed `k * d_b + l`.

pub mod bell;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod random;
pub mod sampling;
pub mod states;
pub mod teleport;

pub use error::{QuantumError, Result};
pub use linalg::{ComplexMatrix, DEFAULT_TOL};
pub use num_complex::Complex64;
pub use states::{BlochVector, DensityOperator, MeasurementAxis, PureState, Subsystem};
