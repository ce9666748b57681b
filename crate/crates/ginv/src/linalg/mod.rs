//! Dense linear algebra kernel: the matrix type, QR factorizations, the
//! Jacobi SVD, and the quantities derived from it (pseudoinverse, numerical
//! rank, norms). Everything here is a pure function of its inputs.

mod matrix;
mod qr;
mod svd;

pub use matrix::DenseMatrix;
pub use qr::{column_pivot_rank, householder_qr};
pub use svd::{
    matrix_norms, numerical_rank, numerical_rank_relative, pinv, svd, Norms, SvdResult,
    DEFAULT_RANK_TOL, DEFAULT_SIGMA_TOL, DEFAULT_ZERO_TOL,
};

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix dimensions must be positive")]
    EmptyMatrix,
    #[error("SVD failed to converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
}
