use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::matcore::{real_embedding, ComplexMatrix, RealMatrix};
use crate::tolerance;

use super::SdpError;

/// Largest complex dimension of a single Hermitian variable.
pub const MAX_VAR_DIM: usize = 8;

/// Largest total number of real scalars across all variables.
pub const MAX_REAL_VARS: usize = 512;

pub type MapFn = dyn Fn(&ComplexMatrix) -> ComplexMatrix + Send + Sync;

/// Real-linear map applied to a variable before it enters a constraint block.
#[derive(Clone)]
pub enum HermitianMap {
    Identity,
    Linear(Arc<MapFn>),
}

impl HermitianMap {
    pub fn linear<F>(f: F) -> Self
    where
        F: Fn(&ComplexMatrix) -> ComplexMatrix + Send + Sync + 'static,
    {
        HermitianMap::Linear(Arc::new(f))
    }

    pub fn apply(&self, h: &ComplexMatrix) -> ComplexMatrix {
        match self {
            HermitianMap::Identity => h.clone(),
            HermitianMap::Linear(f) => f(h),
        }
    }
}

impl fmt::Debug for HermitianMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HermitianMap::Identity => f.write_str("Identity"),
            HermitianMap::Linear(_) => f.write_str("Linear(..)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// `scale * map(var)`.
#[derive(Clone, Debug)]
pub struct AffineTerm {
    pub var: VarId,
    pub scale: f64,
    pub map: HermitianMap,
}

impl AffineTerm {
    pub fn new(var: VarId, scale: f64) -> Self {
        Self {
            var,
            scale,
            map: HermitianMap::Identity,
        }
    }

    pub fn mapped(var: VarId, scale: f64, map: HermitianMap) -> Self {
        Self { var, scale, map }
    }
}

/// `constant + sum(terms)` must be positive semidefinite.
#[derive(Clone, Debug)]
pub struct PsdConstraint {
    pub label: String,
    pub constant: ComplexMatrix,
    pub terms: Vec<AffineTerm>,
}

#[derive(Clone, Debug)]
pub struct HermitianVar {
    pub label: String,
    pub dim: usize,
}

/// Minimise `sum_v Re tr(G_v V_v)` over Hermitian variables `V_v` subject to affine
/// PSD constraints.
#[derive(Clone, Debug, Default)]
pub struct SdpProblem {
    vars: Vec<HermitianVar>,
    objective: Vec<Option<ComplexMatrix>>,
    constraints: Vec<PsdConstraint>,
    start: Option<Vec<ComplexMatrix>>,
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, label: impl Into<String>, dim: usize) -> VarId {
        self.vars.push(HermitianVar {
            label: label.into(),
            dim,
        });
        self.objective.push(None);
        VarId(self.vars.len() - 1)
    }

    /// Adds `Re tr(g V)` to the objective.
    pub fn add_objective(&mut self, var: VarId, g: ComplexMatrix) {
        let slot = &mut self.objective[var.0];
        *slot = Some(match slot.take() {
            Some(prev) => &prev + &g,
            None => g,
        });
    }

    pub fn add_constraint(&mut self, c: PsdConstraint) {
        self.constraints.push(c);
    }

    /// Optional strictly feasible starting values, one per variable.
    pub fn set_start(&mut self, values: Vec<ComplexMatrix>) {
        self.start = Some(values);
    }

    pub fn vars(&self) -> &[HermitianVar] {
        &self.vars
    }

    pub fn constraints(&self) -> &[PsdConstraint] {
        &self.constraints
    }

    pub fn start(&self) -> Option<&[ComplexMatrix]> {
        self.start.as_deref()
    }

    pub fn num_real_vars(&self) -> usize {
        self.vars.iter().map(|v| v.dim * v.dim).sum()
    }

    pub fn objective_value(&self, values: &[ComplexMatrix]) -> f64 {
        self.objective
            .iter()
            .zip(values)
            .filter_map(|(g, v)| g.as_ref().map(|g| g.real_trace_product(v)))
            .sum()
    }

    /// The Hermitian matrix of constraint `idx` at the given variable values.
    pub fn evaluate_constraint(&self, idx: usize, values: &[ComplexMatrix]) -> ComplexMatrix {
        let c = &self.constraints[idx];
        let mut out = c.constant.clone();
        for t in &c.terms {
            out = &out + &t.map.apply(&values[t.var.0]).scale_real(t.scale);
        }
        out
    }

    /// Returns a new problem whose objective is multiplied by `factor`.
    pub fn scaled_objective(&self, factor: f64) -> Self {
        let mut p = self.clone();
        for g in p.objective.iter_mut().flatten() {
            *g = g.scale_real(factor);
        }
        p
    }

    pub(crate) fn validate(&self) -> Result<(), SdpError> {
        let total = self.num_real_vars();
        if total > MAX_REAL_VARS {
            return Err(SdpError::TooLarge(total));
        }
        if self.vars.is_empty() {
            return Err(SdpError::InvalidProblem("no variables".into()));
        }
        for v in &self.vars {
            if v.dim == 0 || v.dim > MAX_VAR_DIM {
                return Err(SdpError::InvalidProblem(format!(
                    "variable {} has dimension {}",
                    v.label, v.dim
                )));
            }
        }
        for (g, v) in self.objective.iter().zip(&self.vars) {
            if let Some(g) = g {
                if g.rows() != v.dim || g.cols() != v.dim || !g.is_hermitian(tolerance::HERMITIAN) {
                    return Err(SdpError::InvalidProblem(format!(
                        "objective for {} must be a Hermitian {}x{} matrix",
                        v.label, v.dim, v.dim
                    )));
                }
            }
        }
        for c in &self.constraints {
            let d = c.constant.rows();
            if c.constant.cols() != d || !c.constant.is_hermitian(tolerance::HERMITIAN) {
                return Err(SdpError::InvalidProblem(format!(
                    "constraint {} has a non-Hermitian constant",
                    c.label
                )));
            }
            for t in &c.terms {
                if t.var.0 >= self.vars.len() {
                    return Err(SdpError::InvalidProblem(format!(
                        "constraint {} references unknown variable {}",
                        c.label, t.var.0
                    )));
                }
            }
        }
        if self.constraints.is_empty() {
            return Err(SdpError::InvalidProblem("no constraints".into()));
        }
        if let Some(start) = &self.start {
            if start.len() != self.vars.len()
                || start.iter().zip(&self.vars).any(|(s, v)| s.rows() != v.dim)
            {
                return Err(SdpError::InvalidProblem("start values do not match variables".into()));
            }
        }
        Ok(())
    }
}

/// Orthonormal basis of `d x d` Hermitian matrices under `Re tr(A B)`:
/// diagonal units first, then symmetric and antisymmetric pairs for `a < b`.
pub fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(a, a)] = 1.0.into();
        out.push(m);
    }
    for a in 0..d {
        for b in a + 1..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(a, b)] = s.into();
            sym[(b, a)] = s.into();
            out.push(sym);
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(a, b)] = num_complex::Complex64::new(0.0, s);
            anti[(b, a)] = num_complex::Complex64::new(0.0, -s);
            out.push(anti);
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`hermitian_basis`].
pub fn hermitian_coordinates(h: &ComplexMatrix) -> Vec<f64> {
    hermitian_basis(h.rows())
        .iter()
        .map(|b| b.real_trace_product(h))
        .collect()
}

pub fn hermitian_from_coordinates(d: usize, coords: &[f64]) -> ComplexMatrix {
    let basis = hermitian_basis(d);
    let mut m = ComplexMatrix::zeros(d, d);
    for (b, &x) in basis.iter().zip(coords) {
        if x != 0.0 {
            m = &m + &b.scale_real(x);
        }
    }
    m
}

/// Sparse symmetric real matrix, both triangles stored.
pub(crate) type SparseEntries = Vec<(usize, usize, f64)>;

/// One real-embedded PSD block in standard form: `Z = C - sum_i y_i A_i`.
#[derive(Clone, Debug)]
pub(crate) struct RealBlock {
    pub dim: usize,
    pub c: RealMatrix,
    /// `(variable index, A_i)` for every variable touching this block.
    pub a: Vec<(usize, SparseEntries)>,
}

/// Standard-form SDP: `max b.y` subject to `C - sum y_i A_i >= 0`.
#[derive(Clone, Debug)]
pub(crate) struct RealSdp {
    pub num_vars: usize,
    pub b: Vec<f64>,
    pub blocks: Vec<RealBlock>,
}

/// Offsets of each Hermitian variable inside the real coordinate vector.
pub(crate) fn var_offsets(problem: &SdpProblem) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(problem.vars.len());
    let mut acc = 0;
    for v in &problem.vars {
        offsets.push(acc);
        acc += v.dim * v.dim;
    }
    offsets
}

/// Lowers the Hermitian problem to real-embedded standard form.
///
/// The user problem `min c.y s.t. F0 + sum y_i F_i >= 0` becomes the standard dual
/// with `C = F0`, `A_i = -F_i`, `b = -c`.
pub(crate) fn compile(problem: &SdpProblem) -> Result<RealSdp, SdpError> {
    problem.validate()?;
    let offsets = var_offsets(problem);
    let num_vars = problem.num_real_vars();
    let bases: Vec<Vec<ComplexMatrix>> = problem.vars.iter().map(|v| hermitian_basis(v.dim)).collect();

    let mut b = vec![0.0; num_vars];
    for (v, g) in problem.objective.iter().enumerate() {
        if let Some(g) = g {
            for (k, basis) in bases[v].iter().enumerate() {
                b[offsets[v] + k] = -g.real_trace_product(basis);
            }
        }
    }

    let mut blocks = Vec::with_capacity(problem.constraints.len());
    for c in &problem.constraints {
        let d = c.constant.rows();
        let dim = 2 * d;
        let mut dense: BTreeMap<usize, RealMatrix> = BTreeMap::new();
        for t in &c.terms {
            let v = t.var.0;
            for (k, basis) in bases[v].iter().enumerate() {
                let h = t.map.apply(basis);
                if h.rows() != d || h.cols() != d {
                    return Err(SdpError::InvalidProblem(format!(
                        "term in {} maps a {}x{} variable to {}x{}, expected {d}x{d}",
                        c.label,
                        basis.rows(),
                        basis.cols(),
                        h.rows(),
                        h.cols()
                    )));
                }
                if !h.is_hermitian(tolerance::HERMITIAN) {
                    return Err(SdpError::InvalidProblem(format!(
                        "term in {} is not Hermitian-valued",
                        c.label
                    )));
                }
                let e = real_embedding(&h.hermitian_part());
                let slot = dense
                    .entry(offsets[v] + k)
                    .or_insert_with(|| RealMatrix::zeros(dim, dim));
                slot.add_scaled(-t.scale, &e);
            }
        }
        let a = dense
            .into_iter()
            .filter_map(|(idx, m)| {
                let mut entries = Vec::new();
                for r in 0..dim {
                    for col in 0..dim {
                        let x = m[(r, col)];
                        if x != 0.0 {
                            entries.push((r, col, x));
                        }
                    }
                }
                (!entries.is_empty()).then_some((idx, entries))
            })
            .collect();
        blocks.push(RealBlock {
            dim,
            c: real_embedding(&c.constant.hermitian_part()),
            a,
        });
    }
    Ok(RealSdp {
        num_vars,
        b,
        blocks,
    })
}
