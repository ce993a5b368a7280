//! Dense exact linear algebra over any [`Field`](crate::algebra::Field):
//! reduced row-echelon forms, kernels, subspace membership and preimages.

mod matrix;
mod subspace;

pub use matrix::{kernel, rank_screened, row_reduce, solve_row_combination, ExactMatrix, RowReduction};
pub use subspace::{preimage_of_subspace, GradedSubspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
