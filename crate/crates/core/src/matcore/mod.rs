//! Dense complex linear algebra: products, adjoints, Kronecker products and a
//! Jacobi-based Hermitian eigensolver.

mod complex;
mod eigen;
mod real;

use thiserror::Error;

pub use complex::{kron, kron_all, ComplexMatrix};
pub use eigen::{
    hermitian_eig, hermitian_eigenvalues, real_embedding, symmetric_eig, HermitianEigen,
    SymmetricEigen,
};
pub use real::{Cholesky, RealMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
}
