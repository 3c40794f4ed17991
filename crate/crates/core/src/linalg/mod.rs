//! Exact linear algebra over ℚ and prime fields.

mod graded;
mod matrix;
mod scalar;
mod smat;
pub mod sparse;

pub use graded::{Complex, GradedSpace};
pub use matrix::{Matrix, RankKernel};
pub use scalar::{Field, Scalar};
pub use smat::SparseMatrix;
pub use sparse::{Echelon, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("differential does not square to zero")]
    NotAComplex,
}

/// `rref_rank_kernel` as a free function.
pub fn rref_rank_kernel(m: &Matrix) -> RankKernel {
    m.rref_rank_kernel()
}

/// `solve_linear` as a free function.
pub fn solve_linear(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    m.solve(b)
}
