//! Hadamard-rotation / CNOT / ancilla post-selection recovery.
//!
//! Each system qubit is paired with an ancilla prepared as `H_theta |0>`; a CNOT
//! (system control, ancilla target) followed by keeping only the ancilla outcome
//! `|0>` acts on the system as the filter `M(theta) = diag(cos theta, sin theta)`.

mod error_matrix;
mod scheme;

use thiserror::Error;

use crate::channels::ChannelError;
use crate::matcore::ComplexMatrix;
use crate::qstate::{DensityMatrix, StateError, UnnormalizedState};
use crate::tolerance;

pub use error_matrix::{
    check_error_pattern, error_decomposition, is_structural_zero, zero_census, ErrorDecomposition,
    ErrorPatternReport, PatternResidual, STRUCTURAL_ZEROS,
};
pub use scheme::{run_scheme, run_stages, Scheme, SchemeKind, Stage};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoveryError {
    #[error("invalid recovery parameter: {0}")]
    InvalidParams(String),
    #[error("post-selection branch has probability {0:.3e}")]
    ZeroSuccessProbability(f64),
    #[error("error matrix normalisation cannot be determined")]
    ScaleUndetermined,
    #[error("expected an 8x8 three-qubit matrix, got {0}x{1}")]
    WrongSize(usize, usize),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Ancilla rotation angle, strictly inside `(0, pi/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterAngle {
    theta: f64,
}

impl FilterAngle {
    pub fn from_radians(theta: f64) -> Result<Self, RecoveryError> {
        if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
            return Err(RecoveryError::InvalidParams(format!(
                "angle {theta} outside (0, pi/2)"
            )));
        }
        Ok(Self { theta })
    }

    /// Angle with `tan(theta) = t`.
    pub fn from_tangent(t: f64) -> Result<Self, RecoveryError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(RecoveryError::InvalidParams(format!(
                "tangent {t} must be finite and positive"
            )));
        }
        Self::from_radians(t.atan())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tan(&self) -> f64 {
        self.theta.tan()
    }

    /// Weights applied to `|0>` and `|1>`.
    pub fn weights(&self) -> [f64; 2] {
        [self.theta.cos(), self.theta.sin()]
    }
}

/// Single-qubit post-selection operator `diag(cos theta, sin theta)`.
pub fn filter_operator(theta: FilterAngle) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&theta.weights())
}

/// Post-selected state and the probability of reaching it.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryOutcome {
    pub state: DensityMatrix,
    /// Product of all branch weights along the protocol.
    pub success_prob: f64,
    /// Branch weight of each filter stage, in application order.
    pub stage_probs: Vec<f64>,
}

/// Branch of `rho` kept by filtering every qubit with the same angle.
pub fn filter_branch(rho: &DensityMatrix, theta: FilterAngle) -> UnnormalizedState {
    let n = rho.n_qubits();
    let [c, s] = theta.weights();
    // M^{(x)n} is diagonal: basis index i is scaled by cos^(zeros) sin^(ones).
    let weight = |i: usize| {
        let ones = i.count_ones() as i32;
        c.powi(n as i32 - ones) * s.powi(ones)
    };
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * (weight(i) * weight(j)));
    UnnormalizedState::new(out).expect("diagonal congruence keeps Hermiticity")
}

/// Applies the filter to every qubit and renormalises the surviving branch.
pub fn apply_filter(rho: &DensityMatrix, theta: FilterAngle) -> Result<RecoveryOutcome, RecoveryError> {
    let branch = filter_branch(rho, theta);
    let w = branch.weight();
    if !(w >= tolerance::ZERO_SUCCESS_PROBABILITY) {
        return Err(RecoveryError::ZeroSuccessProbability(w));
    }
    let (state, w) = branch.normalize()?;
    Ok(RecoveryOutcome {
        state,
        success_prob: w,
        stage_probs: vec![w],
    })
}
