//! Sweeps over `Gamma*t`, vanishing-time search and CSV output.

mod config;
mod csv;
mod figures;
mod sweep;
mod vanish;

use std::path::PathBuf;

use thiserror::Error;

use crate::gmn::GmnError;
use crate::qstate::StateError;
use crate::recovery::RecoveryError;

pub use config::{
    parse_amplitudes, parse_list, ExperimentConfig, GammaGrid, StateChoice, DEFAULT_ALPHA,
};
pub use csv::{format_number, write_csv, CSV_HEADER};
pub use figures::{figure_datasets, reproduce, FigureDataset, AFTER_TWICE_S, BEFORE_X};
pub use sweep::{evaluate_point, run_sweep, PointStatus, SweepRecord};
pub use vanish::{vanishing_time, vanishing_time_of, VanishOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no genuine entanglement at the start (E = {0:.3e})")]
    NoEntanglementAtStart(f64),
    #[error("E = {e:.3e} is still positive at Gamma*t = {upper}")]
    BracketNotFound { upper: f64, e: f64 },
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error(transparent)]
    Gmn(#[from] GmnError),
    #[error(transparent)]
    State(#[from] StateError),
}

impl ExperimentError {
    /// Errors caused by the input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            ExperimentError::Io { .. }
                | ExperimentError::Parse { .. }
                | ExperimentError::InvalidConfig(_)
                | ExperimentError::State(_)
        ) || matches!(
            self,
            ExperimentError::Recovery(RecoveryError::InvalidParams(_) | RecoveryError::Channel(_))
        )
    }
}
