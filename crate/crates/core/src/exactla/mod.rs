//! Exact scalar, polynomial and matrix arithmetic over `Q` and `Q(i)`.
//!
//! Nothing in this module uses floating point. Rationals are reduced big-integer
//! fractions; Gaussian rationals carry a rational real and imaginary part.

mod bareiss;
mod matrix;
mod poly;
mod scalar;
mod solve;

pub use matrix::ExactMatrix;
pub use poly::{det_poly, det_poly_bareiss, det_poly_cofactor, Poly, COFACTOR_MAX};
pub use scalar::{format_rational, parse_rational, Field, Scalar};
pub use solve::{nullspace, solve_linear, RowReducer, Solution};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("size mismatch: {left:?} vs {right:?}")]
    SizeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("value has a nonzero imaginary part")]
    NotReal,
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Row rank of `a`.
pub fn rank_exact(a: &ExactMatrix) -> usize {
    a.rank()
}

/// Determinant of a square matrix.
pub fn det_exact(a: &ExactMatrix) -> Result<Scalar, LinalgError> {
    a.det()
}
