//! Multi-qubit density matrices and their tensor-index bookkeeping.
//!
//! Qubit 0 is the most significant bit of a computational-basis index, so for
//! three qubits `|q0 q1 q2>` sits at index `4*q0 + 2*q1 + q2`.

mod bipartition;
mod named;
mod partial;

use thiserror::Error;

use crate::matcore::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix, MatError};
use crate::tolerance;

pub use bipartition::Bipartition;
pub use named::{
    ghz, maximally_mixed, product_state, pure_state, random_density_matrix, random_pure_state,
    random_single_qubit_unitary, w_state, w_tilde, white_noise_mixture,
};
pub use partial::{negativity, partial_trace, partial_transpose, partial_transpose_matrix};

/// Largest supported register.
pub const MAX_QUBITS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("matrix dimension {0} is not a power of two")]
    DimensionNotPowerOfTwo(usize),
    #[error("{0} qubits exceed the supported maximum of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("state is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from one")]
    TraceNotUnit(f64),
    #[error("minimum eigenvalue {0:.3e} is negative")]
    NotPositive(f64),
    #[error("amplitude vector has zero norm")]
    ZeroVector,
    #[error("mixing weight {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("partial trace needs at least one kept qubit")]
    EmptyKeepSet,
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    InvalidQubit { index: usize, n_qubits: usize },
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("branch weight {0:.3e} is not positive")]
    ZeroWeight(f64),
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error(transparent)]
    Mat(#[from] MatError),
}

fn qubits_for_dim(dim: usize) -> Result<usize, StateError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(StateError::DimensionNotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(StateError::TooManyQubits(n));
    }
    Ok(n)
}

/// Hermitian, positive-semidefinite, unit-trace state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, StateError> {
        if !matrix.is_square() {
            return Err(MatError::NotSquare(matrix.rows(), matrix.cols()).into());
        }
        let n_qubits = qubits_for_dim(matrix.rows())?;
        if !matrix.is_finite() {
            return Err(MatError::NonFinite.into());
        }
        let herm = matrix.hermiticity_error();
        if herm > tolerance::HERMITIAN {
            return Err(StateError::NotHermitian(herm));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tolerance::TRACE {
            return Err(StateError::TraceNotUnit(tr));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eig(&matrix)?.min_eigenvalue();
        if min < tolerance::PSD_MIN_EIGENVALUE {
            return Err(StateError::NotPositive(min));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// For results of trace-preserving maps on valid states; skips the eigenvalue check.
    pub(crate) fn from_trusted(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), 1 << n_qubits);
        debug_assert!((matrix.trace().re - 1.0).abs() < 1e-8);
        Self {
            n_qubits,
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Computational basis projector `|index><index|`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self, StateError> {
        if n_qubits > MAX_QUBITS {
            return Err(StateError::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(StateError::InvalidQubit { index, n_qubits });
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = 1.0.into();
        Ok(Self {
            n_qubits,
            matrix: m,
        })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.real_trace_product(&self.matrix)
    }

    /// `(1/2) || self - other ||_1`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64, StateError> {
        if self.n_qubits != other.n_qubits {
            return Err(StateError::QubitMismatch(self.n_qubits, other.n_qubits));
        }
        let diff = &self.matrix - &other.matrix;
        let eig = hermitian_eigenvalues(&diff.hermitian_part())?;
        Ok(0.5 * eig.iter().map(|x| x.abs()).sum::<f64>())
    }

    /// Conjugation by a unitary (or any matrix whose action is trace preserving on this state).
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        Self::from_trusted(self.n_qubits, self.matrix.sandwich(u))
    }
}

/// Sub-normalised branch state produced by a post-selection, with trace in `(0, 1]`.
///
/// Never renormalised implicitly; call [`UnnormalizedState::normalize`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnnormalizedState {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl UnnormalizedState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, StateError> {
        if !matrix.is_square() {
            return Err(MatError::NotSquare(matrix.rows(), matrix.cols()).into());
        }
        let n_qubits = qubits_for_dim(matrix.rows())?;
        let herm = matrix.hermiticity_error();
        if herm > tolerance::HERMITIAN {
            return Err(StateError::NotHermitian(herm));
        }
        Ok(Self {
            n_qubits,
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Branch probability: the trace of the sub-normalised state.
    pub fn weight(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Returns the normalised state together with the branch weight.
    pub fn normalize(&self) -> Result<(DensityMatrix, f64), StateError> {
        let w = self.weight();
        if !(w > 0.0) || !w.is_finite() {
            return Err(StateError::ZeroWeight(w));
        }
        let m = self.matrix.scale_real(1.0 / w);
        Ok((DensityMatrix::from_trusted(self.n_qubits, m), w))
    }
}
