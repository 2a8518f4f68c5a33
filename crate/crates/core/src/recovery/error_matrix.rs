use std::collections::BTreeSet;

use crate::matcore::ComplexMatrix;
use crate::qstate::DensityMatrix;
use crate::tolerance;

use super::RecoveryError;

/// Zero-based `(row, col)` positions of the three-qubit error matrix that vanish
/// for the after-damping and before-and-after schemes: all of row and column 7,
/// plus the entries whose two basis indices together excite every qubit.
pub const STRUCTURAL_ZEROS: [(usize, usize); 27] = [
    (0, 7),
    (1, 6),
    (1, 7),
    (2, 5),
    (2, 7),
    (3, 4),
    (3, 5),
    (3, 6),
    (3, 7),
    (4, 3),
    (4, 7),
    (5, 2),
    (5, 3),
    (5, 6),
    (5, 7),
    (6, 1),
    (6, 3),
    (6, 5),
    (6, 7),
    (7, 0),
    (7, 1),
    (7, 2),
    (7, 3),
    (7, 4),
    (7, 5),
    (7, 6),
    (7, 7),
];

pub fn is_structural_zero(row: usize, col: usize) -> bool {
    STRUCTURAL_ZEROS.contains(&(row, col))
}

/// `rho_final = (rho_initial + error) / normalization`.
#[derive(Clone, Debug)]
pub struct ErrorDecomposition {
    pub normalization: f64,
    pub error: ComplexMatrix,
}

/// Splits a recovered state into the initial state plus an error matrix.
///
/// The normalisation is pinned by the `|111><111|` entry, which the error matrix
/// never touches; when the initial state has no weight there, it is fitted by
/// least squares over all structural-zero positions.
pub fn error_decomposition(
    rho_final: &DensityMatrix,
    rho_initial: &DensityMatrix,
) -> Result<ErrorDecomposition, RecoveryError> {
    let f = rho_final.matrix();
    let i = rho_initial.matrix();
    if f.rows() != 8 || i.rows() != 8 {
        return Err(RecoveryError::WrongSize(f.rows().max(i.rows()), f.cols().max(i.cols())));
    }
    let fi = f[(7, 7)].re;
    let ii = i[(7, 7)].re;
    let normalization = if ii > tolerance::ERROR_SCALE && fi > tolerance::ERROR_SCALE {
        ii / fi
    } else {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(r, c) in &STRUCTURAL_ZEROS {
            let a = f[(r, c)];
            let b = i[(r, c)];
            num += (a.conj() * b).re;
            den += a.norm_sqr();
        }
        let all_small = STRUCTURAL_ZEROS.iter().all(|&(r, c)| {
            f[(r, c)].norm() < tolerance::ERROR_SCALE && i[(r, c)].norm() < tolerance::ERROR_SCALE
        });
        if all_small || den < tolerance::ERROR_SCALE * tolerance::ERROR_SCALE {
            return Err(RecoveryError::ScaleUndetermined);
        }
        num / den
    };
    let error = &f.scale_real(normalization) - i;
    Ok(ErrorDecomposition {
        normalization,
        error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternResidual {
    pub row: usize,
    pub col: usize,
    pub magnitude: f64,
}

/// Per-position magnitudes of an error matrix at the structural zeros.
#[derive(Clone, Debug)]
pub struct ErrorPatternReport {
    pub residuals: Vec<PatternResidual>,
    pub tolerance: f64,
}

impl ErrorPatternReport {
    pub fn violations(&self) -> Vec<PatternResidual> {
        self.residuals
            .iter()
            .copied()
            .filter(|r| !(r.magnitude < self.tolerance))
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.magnitude))
    }
}

pub fn check_error_pattern(err: &ComplexMatrix) -> Result<ErrorPatternReport, RecoveryError> {
    if err.rows() != 8 || err.cols() != 8 {
        return Err(RecoveryError::WrongSize(err.rows(), err.cols()));
    }
    let residuals = STRUCTURAL_ZEROS
        .iter()
        .map(|&(row, col)| PatternResidual {
            row,
            col,
            magnitude: err[(row, col)].norm(),
        })
        .collect();
    Ok(ErrorPatternReport {
        residuals,
        tolerance: tolerance::ERROR_PATTERN,
    })
}

/// Positions whose magnitude is below `tol`.
pub fn zero_census(m: &ComplexMatrix, tol: f64) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m[(r, c)].norm() < tol {
                out.insert((r, c));
            }
        }
    }
    out
}
