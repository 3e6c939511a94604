//! Exact small-dimension complex linear algebra.
//!
//! Everything here is dense and immutable once constructed. Dimensions stay
//! in the low thousands at most, which is what the protocol checks need: a
//! 2ⁿ-dimensional commitment ensemble for n ≤ 10, codebooks in d ≤ 256, and
//! two-qubit pairs.

mod eigen;
mod entropy;
mod matrix;
mod measure;
mod state;

pub use eigen::{hermitian_eigen, EigenDecomposition, MAX_EIGEN_DIM, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use entropy::{binary_entropy, entropy_of_spectrum, von_neumann_entropy};
pub use matrix::{projector, CMatrix, DensityMatrix, HermitianOperator};
pub use measure::{born_sample, sample_index, Measurement, COMPLETENESS_TOL};
pub use state::{inner, ket, tensor, StateVector, NORM_TOL};

pub use num_complex::Complex64;

/// Shorthand for a real-valued complex number.
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
