//! Small dense semidefinite programs over Hermitian matrix variables.
//!
//! Problems are stated as "minimise a real-linear objective subject to affine
//! PSD constraints". Every complex Hermitian block is embedded in a real
//! symmetric block of twice the size and the result is solved with an
//! infeasible primal-dual path-following method (Mehrotra predictor-corrector,
//! HKM search direction).

mod ipm;
mod problem;

use thiserror::Error;

use crate::matcore::{hermitian_eigenvalues, real_embedding, ComplexMatrix, MatError, RealMatrix};
use crate::tolerance;

pub use problem::{
    hermitian_basis, hermitian_coordinates, hermitian_from_coordinates, AffineTerm, HermitianMap,
    HermitianVar, MapFn, PsdConstraint, SdpProblem, VarId, MAX_REAL_VARS, MAX_VAR_DIM,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("malformed problem: {0}")]
    InvalidProblem(String),
    #[error("problem has {0} real variables, more than the supported {MAX_REAL_VARS}")]
    TooLarge(usize),
    #[error("iterates diverged; the problem appears infeasible or unbounded")]
    Infeasible,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
}

#[derive(Clone, Debug)]
pub struct SdpSettings {
    pub max_iterations: usize,
    /// Gap and relative residuals at which iteration stops.
    pub gap_target: f64,
    /// Loosest gap still reported as optimal when iteration stops early.
    pub gap_optimal: f64,
    pub step_fraction: f64,
    /// Relative diagonal shift applied when the Schur complement fails to factor.
    pub regularization: f64,
}

impl Default for SdpSettings {
    fn default() -> Self {
        ipm::default_settings()
    }
}

/// Objective values are in the user's minimisation sense.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    /// Standard-form primal value `<C, X>`; its negation bounds the optimum from below.
    pub primal_objective: f64,
    /// Standard-form dual value `b.y`; its negation is the current objective.
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl IterationLog {
    /// Objective of the current variable values.
    pub fn objective(&self) -> f64 {
        -self.dual_objective
    }

    /// Bound certified by the multiplier iterate.
    pub fn lower_bound(&self) -> f64 {
        -self.primal_objective
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub variable_values: Vec<ComplexMatrix>,
    /// Objective at `variable_values`.
    pub objective_value: f64,
    /// Lower bound from the multipliers.
    pub dual_objective: f64,
    pub duality_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    /// Smallest eigenvalue of every constraint block at `variable_values`.
    pub block_min_eigenvalues: Vec<f64>,
    pub history: Vec<IterationLog>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    pub fn min_block_eigenvalue(&self) -> f64 {
        self.block_min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Real symmetric embedding `[[Re H, -Im H], [Im H, Re H]]` of a Hermitian matrix.
pub fn embed_hermitian(h: &ComplexMatrix) -> Result<RealMatrix, SdpError> {
    if !h.is_square() {
        return Err(MatError::NotSquare(h.rows(), h.cols()).into());
    }
    let err = h.hermiticity_error();
    if err > tolerance::HERMITIAN * h.max_abs().max(1.0) {
        return Err(MatError::NotHermitian(err).into());
    }
    Ok(real_embedding(h))
}

pub fn solve(problem: &SdpProblem) -> Result<SdpSolution, SdpError> {
    solve_with(problem, &SdpSettings::default())
}

pub fn solve_with(problem: &SdpProblem, settings: &SdpSettings) -> Result<SdpSolution, SdpError> {
    let real = problem::compile(problem)?;
    let offsets = problem::var_offsets(problem);
    let y0 = problem.start().map(|values| {
        let mut y = vec![0.0; real.num_vars];
        for (v, value) in values.iter().enumerate() {
            let coords = hermitian_coordinates(&value.hermitian_part());
            y[offsets[v]..offsets[v] + coords.len()].copy_from_slice(&coords);
        }
        y
    });
    let out = ipm::solve_real(&real, y0.as_deref(), settings)?;

    let variable_values: Vec<ComplexMatrix> = problem
        .vars()
        .iter()
        .zip(&offsets)
        .map(|(v, &o)| hermitian_from_coordinates(v.dim, &out.iterate.y[o..o + v.dim * v.dim]))
        .collect();
    let block_min_eigenvalues = (0..problem.constraints().len())
        .map(|i| {
            let m = problem.evaluate_constraint(i, &variable_values).hermitian_part();
            hermitian_eigenvalues(&m).map(|e| e[0])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut status = out.status;
    if status == SdpStatus::Optimal
        && block_min_eigenvalues.iter().any(|&e| e < tolerance::SDP_BLOCK_PSD)
    {
        status = SdpStatus::NumericalFailure;
    }
    Ok(SdpSolution {
        objective_value: problem.objective_value(&variable_values),
        variable_values,
        dual_objective: -out.primal_value,
        duality_gap: out.gap,
        primal_residual: out.primal_residual,
        dual_residual: out.dual_residual,
        status,
        iterations: out.iterations,
        block_min_eigenvalues,
        history: out.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    /// `min tr(G V)` subject to `0 <= V <= I`, whose optimum is the sum of the
    /// negative eigenvalues of `G`.
    fn box_problem(g: ComplexMatrix) -> SdpProblem {
        let d = g.rows();
        let mut p = SdpProblem::new();
        let v = p.add_var("V", d);
        p.add_objective(v, g);
        p.add_constraint(PsdConstraint {
            label: "lower".into(),
            constant: ComplexMatrix::zeros(d, d),
            terms: vec![AffineTerm::new(v, 1.0)],
        });
        p.add_constraint(PsdConstraint {
            label: "upper".into(),
            constant: ComplexMatrix::identity(d),
            terms: vec![AffineTerm::new(v, -1.0)],
        });
        p
    }

    #[test]
    fn one_dimensional_box() {
        let sol = solve(&box_problem(ComplexMatrix::from_real_diagonal(&[1.0]))).unwrap();
        assert!(sol.is_optimal());
        assert!(sol.objective_value.abs() < 1e-7);
        let sol = solve(&box_problem(ComplexMatrix::from_real_diagonal(&[-2.0]))).unwrap();
        assert!((sol.objective_value + 2.0).abs() < 1e-7);
        assert!((sol.variable_values[0][(0, 0)].re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn two_by_two_complex_box() {
        // sigma_y has eigenvalues +-1, so the optimum is -1.
        let g = ComplexMatrix::from_vec(
            2,
            2,
            vec![0.0.into(), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), 0.0.into()],
        )
        .unwrap();
        let sol = solve(&box_problem(g)).unwrap();
        assert!(sol.is_optimal(), "{:?}", sol.status);
        assert!((sol.objective_value + 1.0).abs() < 1e-7, "{}", sol.objective_value);
        assert!(sol.duality_gap <= 1e-7);
        assert!(sol.min_block_eigenvalue() >= -1e-8);
    }

    #[test]
    fn random_box_matches_eigenvalues() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let d = 4;
        let raw = ComplexMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let g = raw.hermitian_part();
        let want: f64 = hermitian_eigenvalues(&g).unwrap().iter().filter(|e| **e < 0.0).sum();
        let sol = solve(&box_problem(g)).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.objective_value - want).abs() < 1e-7, "{} vs {want}", sol.objective_value);
    }

    #[test]
    fn feasible_start_is_accepted() {
        let mut p = box_problem(ComplexMatrix::from_real_diagonal(&[1.0, -1.0, 0.5]));
        p.set_start(vec![ComplexMatrix::identity(3).scale_real(0.5)]);
        let sol = solve(&p).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.objective_value + 1.0).abs() < 1e-7);
    }

    #[test]
    fn objective_scaling_scales_optimum() {
        let p = box_problem(ComplexMatrix::from_real_diagonal(&[0.3, -0.7]));
        let base = solve(&p).unwrap().objective_value;
        for k in [0.5, 3.0] {
            let scaled = solve(&p.scaled_objective(k)).unwrap().objective_value;
            assert!((scaled - k * base).abs() < 1e-7);
        }
    }

    #[test]
    fn deterministic() {
        let p = box_problem(ComplexMatrix::from_real_diagonal(&[0.3, -0.7]));
        let a = solve(&p).unwrap();
        let b = solve(&p).unwrap();
        assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn bounds_bracket_the_optimum_at_the_end() {
        let p = box_problem(ComplexMatrix::from_real_diagonal(&[0.3, -0.7, -0.1]));
        let sol = solve(&p).unwrap();
        assert!(sol.objective_value >= sol.dual_objective - 1e-9);
        assert!(sol.objective_value - sol.dual_objective <= 1e-7);
        assert!(!sol.history.is_empty());
    }

    #[test]
    fn infeasible_problem_is_reported() {
        // V >= I and V <= 0 cannot hold together.
        let mut p = SdpProblem::new();
        let v = p.add_var("V", 1);
        p.add_objective(v, ComplexMatrix::from_real_diagonal(&[1.0]));
        p.add_constraint(PsdConstraint {
            label: "ge".into(),
            constant: ComplexMatrix::from_real_diagonal(&[-1.0]),
            terms: vec![AffineTerm::new(v, 1.0)],
        });
        p.add_constraint(PsdConstraint {
            label: "le".into(),
            constant: ComplexMatrix::zeros(1, 1),
            terms: vec![AffineTerm::new(v, -1.0)],
        });
        match solve(&p) {
            Err(SdpError::Infeasible) => {}
            Ok(sol) => assert!(!sol.is_optimal(), "{sol:?}"),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn embedding_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(embed_hermitian(&m).is_err());
        let e = embed_hermitian(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.rows(), 4);
    }

    #[test]
    fn too_many_variables() {
        let mut p = SdpProblem::new();
        let mut terms = Vec::new();
        for k in 0..9 {
            let v = p.add_var(format!("v{k}"), 8);
            terms.push(AffineTerm::new(v, 1.0));
        }
        p.add_constraint(PsdConstraint {
            label: "c".into(),
            constant: ComplexMatrix::identity(8),
            terms,
        });
        assert!(matches!(solve(&p), Err(SdpError::TooLarge(576))));
    }

    #[test]
    fn mapped_terms_use_the_map() {
        // Constraint on the transpose of V instead of V itself.
        let g = ComplexMatrix::from_vec(
            2,
            2,
            vec![0.0.into(), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), 0.0.into()],
        )
        .unwrap();
        let mut p = SdpProblem::new();
        let v = p.add_var("V", 2);
        p.add_objective(v, g);
        let t = HermitianMap::linear(|m: &ComplexMatrix| m.transpose());
        p.add_constraint(PsdConstraint {
            label: "lower".into(),
            constant: ComplexMatrix::zeros(2, 2),
            terms: vec![AffineTerm::mapped(v, 1.0, t.clone())],
        });
        p.add_constraint(PsdConstraint {
            label: "upper".into(),
            constant: ComplexMatrix::identity(2),
            terms: vec![AffineTerm::mapped(v, -1.0, t)],
        });
        let sol = solve(&p).unwrap();
        assert!((sol.objective_value + 1.0).abs() < 1e-7);
    }
}
