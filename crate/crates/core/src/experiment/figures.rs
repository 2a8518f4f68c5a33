use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::recovery::SchemeKind;

use super::{run_sweep, write_csv, ExperimentConfig, ExperimentError, GammaGrid, StateChoice, SweepRecord};

/// `s` values for the two-filter after-damping curves.
pub const AFTER_TWICE_S: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// `x` values for the schemes that filter before damping.
pub const BEFORE_X: [f64; 3] = [0.25, 0.5, 1.0];

/// One output file and the experiments whose records it collects.
#[derive(Clone, Debug)]
pub struct FigureDataset {
    pub name: &'static str,
    pub experiments: Vec<ExperimentConfig>,
}

impl FigureDataset {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn run(&self) -> Result<Vec<SweepRecord>, ExperimentError> {
        let mut out = Vec::new();
        for cfg in &self.experiments {
            out.extend(run_sweep(cfg)?);
        }
        Ok(out)
    }
}

fn double_recovery(state: StateChoice, grid: GammaGrid) -> Vec<ExperimentConfig> {
    vec![
        ExperimentConfig::new(state.clone(), SchemeKind::None).with_grid(grid),
        ExperimentConfig::new(state.clone(), SchemeKind::AfterOnce).with_grid(grid),
        ExperimentConfig::new(state, SchemeKind::BeforeAndAfter)
            .with_params(&BEFORE_X)
            .with_grid(grid),
    ]
}

/// The six reproduction datasets, all at `alpha = 0.8`.
pub fn figure_datasets(grid: GammaGrid) -> Vec<FigureDataset> {
    let sweep = |state: StateChoice, kind: SchemeKind, params: &[f64]| {
        vec![ExperimentConfig::new(state, kind).with_params(params).with_grid(grid)]
    };
    let mut double_w = double_recovery(StateChoice::W, grid);
    double_w.extend(double_recovery(StateChoice::WTilde, grid));
    vec![
        FigureDataset {
            name: "fig5_ghz_after_twice",
            experiments: sweep(StateChoice::Ghz, SchemeKind::AfterTwice, &AFTER_TWICE_S),
        },
        FigureDataset {
            name: "fig6_w_after_twice",
            experiments: sweep(StateChoice::W, SchemeKind::AfterTwice, &AFTER_TWICE_S),
        },
        FigureDataset {
            name: "fig7_ghz_before_once",
            experiments: sweep(StateChoice::Ghz, SchemeKind::BeforeOnce, &BEFORE_X),
        },
        FigureDataset {
            name: "fig8_w_before_once",
            experiments: sweep(StateChoice::W, SchemeKind::BeforeOnce, &BEFORE_X),
        },
        FigureDataset {
            name: "fig9_ghz_double",
            experiments: double_recovery(StateChoice::Ghz, grid),
        },
        FigureDataset {
            name: "fig10_w_double",
            experiments: double_w,
        },
    ]
}

/// Writes every dataset into `dir` and returns the written paths.
pub fn reproduce(dir: &Path, grid: GammaGrid) -> Result<Vec<PathBuf>, ExperimentError> {
    let io_err = |path: &Path, e: std::io::Error| ExperimentError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    for fig in figure_datasets(grid) {
        let records = fig.run()?;
        let path = dir.join(fig.file_name());
        let file = File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = BufWriter::new(file);
        write_csv(&mut w, &records).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
