//! Genuine multipartite negativity via the PPT-mixture witness program.
//!
//! For each bipartition `M` the witness is split as `W = P_M + Q_M^{T_M}` with
//! `0 <= P_M, Q_M <= I`. Minimising `Tr(W rho)` over such witnesses gives a
//! negative value exactly when `rho` is not a mixture of states that are PPT
//! across some cut; the magnitude of that minimum is `E(rho)`.

use thiserror::Error;

use crate::matcore::ComplexMatrix;
use crate::qstate::{partial_transpose_matrix, Bipartition, DensityMatrix};
use crate::sdpcore::{
    solve, AffineTerm, HermitianMap, PsdConstraint, SdpError, SdpProblem, SdpStatus, VarId,
};
use crate::tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GmnError {
    #[error("genuine negativity is implemented for 2 or 3 qubits, got {0}")]
    UnsupportedQubitCount(usize),
    #[error(transparent)]
    Sdp(#[from] SdpError),
}

#[derive(Clone, Debug)]
pub struct PartitionWitness {
    pub bipartition: Bipartition,
    pub p: ComplexMatrix,
    /// `(W - P)^{T_M}`.
    pub q: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    /// Genuine negativity, clamped at zero.
    pub e: f64,
    pub witness: ComplexMatrix,
    pub per_partition: Vec<PartitionWitness>,
    /// Optimal value of `Tr(W rho)`.
    pub objective: f64,
    pub gap: f64,
    pub status: SdpStatus,
    pub iterations: usize,
}

impl WitnessResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}

/// Cuts used by the witness program: every split into two non-empty groups, each
/// counted once.
pub fn witness_bipartitions(n_qubits: usize) -> Result<Vec<Bipartition>, GmnError> {
    if !(2..=3).contains(&n_qubits) {
        return Err(GmnError::UnsupportedQubitCount(n_qubits));
    }
    Ok(Bipartition::all(n_qubits))
}

fn transpose_map(part: &Bipartition) -> HermitianMap {
    let part = part.clone();
    HermitianMap::linear(move |m| partial_transpose_matrix(m, &part))
}

/// Witness program for `rho`: variables `W` and one `P_M` per cut, with the four
/// box constraints on `P_M` and `(W - P_M)^{T_M}` for each cut.
pub fn build_witness_problem(rho: &DensityMatrix) -> Result<SdpProblem, GmnError> {
    let parts = witness_bipartitions(rho.n_qubits())?;
    let d = rho.dim();
    let zero = ComplexMatrix::zeros(d, d);
    let eye = ComplexMatrix::identity(d);

    let mut p = SdpProblem::new();
    let w = p.add_var("W", d);
    p.add_objective(w, rho.matrix().clone());
    let mut start = vec![eye.scale_real(0.5)];
    for part in &parts {
        let label = part.label();
        let pm: VarId = p.add_var(format!("P[{label}]"), d);
        start.push(eye.scale_real(0.25));
        let t = transpose_map(part);
        p.add_constraint(PsdConstraint {
            label: format!("P[{label}] >= 0"),
            constant: zero.clone(),
            terms: vec![AffineTerm::new(pm, 1.0)],
        });
        p.add_constraint(PsdConstraint {
            label: format!("P[{label}] <= I"),
            constant: eye.clone(),
            terms: vec![AffineTerm::new(pm, -1.0)],
        });
        p.add_constraint(PsdConstraint {
            label: format!("Q[{label}] >= 0"),
            constant: zero.clone(),
            terms: vec![
                AffineTerm::mapped(w, 1.0, t.clone()),
                AffineTerm::mapped(pm, -1.0, t.clone()),
            ],
        });
        p.add_constraint(PsdConstraint {
            label: format!("Q[{label}] <= I"),
            constant: eye.clone(),
            terms: vec![
                AffineTerm::mapped(w, -1.0, t.clone()),
                AffineTerm::mapped(pm, 1.0, t),
            ],
        });
    }
    p.set_start(start);
    Ok(p)
}

/// Clamps the witness optimum to the genuine negativity.
pub fn clamp_negativity(objective: f64) -> f64 {
    if objective >= -tolerance::E_CLAMP {
        0.0
    } else {
        -objective
    }
}

pub fn genuine_negativity(rho: &DensityMatrix) -> Result<WitnessResult, GmnError> {
    let problem = build_witness_problem(rho)?;
    let parts = witness_bipartitions(rho.n_qubits())?;
    let sol = solve(&problem)?;
    let witness = sol.variable_values[0].clone();
    let per_partition = parts
        .into_iter()
        .zip(&sol.variable_values[1..])
        .map(|(bipartition, p)| {
            let q = partial_transpose_matrix(&(&witness - p), &bipartition);
            PartitionWitness {
                bipartition,
                p: p.clone(),
                q,
            }
        })
        .collect();
    Ok(WitnessResult {
        e: clamp_negativity(sol.objective_value),
        witness,
        per_partition,
        objective: sol.objective_value,
        gap: sol.duality_gap,
        status: sol.status,
        iterations: sol.iterations,
    })
}
