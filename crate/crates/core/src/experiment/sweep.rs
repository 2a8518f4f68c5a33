use rayon::prelude::*;

use crate::gmn::genuine_negativity;
use crate::qstate::DensityMatrix;
use crate::recovery::{run_scheme, Scheme};
use crate::sdpcore::SdpStatus;

use super::{ExperimentConfig, ExperimentError};

#[derive(Clone, Debug, PartialEq)]
pub enum PointStatus {
    Ok,
    /// The solver stopped without certifying optimality.
    NotConverged(SdpStatus),
    Failed(String),
}

impl PointStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::NotConverged(SdpStatus::MaxIterations) => "max_iterations",
            PointStatus::NotConverged(_) => "numerical_failure",
            PointStatus::Failed(_) => "error",
        }
    }

    pub fn is_ok(&self) -> bool {
        *self == PointStatus::Ok
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub state: String,
    pub scheme: String,
    pub param: Option<f64>,
    pub gamma_t: f64,
    /// NaN when the point failed.
    pub e: f64,
    /// NaN when the point failed.
    pub success_prob: f64,
    pub status: PointStatus,
}

/// Runs one `(scheme, Gamma*t)` point. Errors are folded into the record.
pub fn evaluate_point(state_label: &str, rho0: &DensityMatrix, scheme: Scheme, gamma_t: f64) -> SweepRecord {
    let mut rec = SweepRecord {
        state: state_label.to_string(),
        scheme: scheme.label().to_string(),
        param: scheme.param(),
        gamma_t,
        e: f64::NAN,
        success_prob: f64::NAN,
        status: PointStatus::Ok,
    };
    let outcome = match run_scheme(rho0, scheme, gamma_t) {
        Ok(o) => o,
        Err(e) => {
            rec.status = PointStatus::Failed(e.to_string());
            return rec;
        }
    };
    rec.success_prob = outcome.success_prob;
    match genuine_negativity(&outcome.state) {
        Ok(w) => {
            rec.e = w.e;
            if !w.is_optimal() {
                rec.status = PointStatus::NotConverged(w.status);
            }
        }
        Err(e) => rec.status = PointStatus::Failed(e.to_string()),
    }
    rec
}

/// Evaluates every `(param, Gamma*t)` pair in parallel; records come back in
/// parameter order, then grid order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRecord>, ExperimentError> {
    cfg.validate()?;
    let rho0 = cfg.state.mixture(cfg.alpha)?;
    let label = cfg.state.label();
    let points = cfg.grid.points();
    let tasks: Vec<(Scheme, f64)> = cfg
        .schemes()?
        .into_iter()
        .flat_map(|s| points.iter().map(move |&gt| (s, gt)))
        .collect();
    Ok(tasks
        .par_iter()
        .map(|&(scheme, gt)| evaluate_point(label, &rho0, scheme, gt))
        .collect())
}
