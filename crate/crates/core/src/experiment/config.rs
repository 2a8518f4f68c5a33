use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::qstate::{ghz, pure_state, w_state, w_tilde, white_noise_mixture, DensityMatrix};
use crate::recovery::{Scheme, SchemeKind};

use super::ExperimentError;

pub const DEFAULT_ALPHA: f64 = 0.8;

/// Pure state mixed with white noise at the start of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub enum StateChoice {
    Ghz,
    W,
    WTilde,
    Custom(Vec<Complex64>),
}

impl StateChoice {
    pub fn label(&self) -> &'static str {
        match self {
            StateChoice::Ghz => "ghz",
            StateChoice::W => "w",
            StateChoice::WTilde => "wtilde",
            StateChoice::Custom(_) => "custom",
        }
    }

    pub fn pure(&self) -> Result<DensityMatrix, ExperimentError> {
        Ok(match self {
            StateChoice::Ghz => ghz(3)?,
            StateChoice::W => w_state(3)?,
            StateChoice::WTilde => w_tilde(3)?,
            StateChoice::Custom(a) => pure_state(a)?,
        })
    }

    /// `alpha |psi><psi| + (1 - alpha) I / d`.
    pub fn mixture(&self, alpha: f64) -> Result<DensityMatrix, ExperimentError> {
        Ok(white_noise_mixture(&self.pure()?, alpha)?)
    }

    /// Parses a label; `custom` needs amplitudes supplied separately.
    pub fn from_label(s: &str, amplitudes: Option<Vec<Complex64>>) -> Result<Self, ExperimentError> {
        match s.trim() {
            "ghz" => Ok(StateChoice::Ghz),
            "w" => Ok(StateChoice::W),
            "wtilde" => Ok(StateChoice::WTilde),
            "custom" => amplitudes
                .map(StateChoice::Custom)
                .ok_or_else(|| ExperimentError::InvalidConfig("state custom needs amplitudes".into())),
            other => Err(ExperimentError::InvalidConfig(format!(
                "unknown state '{other}' (expected ghz, w, wtilde or custom)"
            ))),
        }
    }
}

impl fmt::Display for StateChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn parse_amplitudes(s: &str) -> Result<Vec<Complex64>, ExperimentError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            Complex64::from_str(t)
                .map_err(|_| ExperimentError::InvalidConfig(format!("bad amplitude '{t}'")))
        })
        .collect()
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, ExperimentError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| ExperimentError::InvalidConfig(format!("bad number '{t}'")))
        })
        .collect()
}

/// Evenly spaced `Gamma*t` values from `start` up to and including `stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for GammaGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.2,
            step: 0.02,
        }
    }
}

impl GammaGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, ExperimentError> {
        let g = Self { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let ok = self.start.is_finite()
            && self.stop.is_finite()
            && self.step.is_finite()
            && self.start >= 0.0
            && self.step > 0.0
            && self.stop > self.start;
        if ok {
            Ok(())
        } else {
            Err(ExperimentError::InvalidConfig(format!(
                "grid needs start >= 0, step > 0 and stop > start, got {}:{}:{}",
                self.start, self.stop, self.step
            )))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for GammaGrid {
    type Err = ExperimentError;

    /// `start:stop:step`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(ExperimentError::InvalidConfig(format!(
                "grid '{s}' must look like start:stop:step"
            )));
        }
        let v = parse_list(&parts.join(","))?;
        if v.len() != 3 {
            return Err(ExperimentError::InvalidConfig(format!("grid '{s}' has empty fields")));
        }
        GammaGrid::new(v[0], v[1], v[2])
    }
}

/// One experiment: a state family, a recovery scheme with its parameter values
/// and a `Gamma*t` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub state: StateChoice,
    pub alpha: f64,
    pub scheme: SchemeKind,
    /// Values of `s` or `x`; ignored for parameterless schemes.
    pub params: Vec<f64>,
    pub grid: GammaGrid,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(state: StateChoice, scheme: SchemeKind) -> Self {
        Self {
            state,
            alpha: DEFAULT_ALPHA,
            scheme,
            params: Vec::new(),
            grid: GammaGrid::default(),
            output: None,
        }
    }

    pub fn with_params(mut self, params: &[f64]) -> Self {
        self.params = params.to_vec();
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_grid(mut self, grid: GammaGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(ExperimentError::InvalidConfig(format!(
                "alpha {} outside [0, 1]",
                self.alpha
            )));
        }
        self.grid.validate()?;
        if self.scheme.takes_param() && self.params.is_empty() {
            return Err(ExperimentError::InvalidConfig(format!(
                "scheme {} needs params",
                self.scheme
            )));
        }
        self.schemes()?;
        if let StateChoice::Custom(a) = &self.state {
            if a.len() != 8 {
                return Err(ExperimentError::InvalidConfig(format!(
                    "custom state needs 8 amplitudes, got {}",
                    a.len()
                )));
            }
        }
        Ok(())
    }

    /// Concrete schemes in parameter order.
    pub fn schemes(&self) -> Result<Vec<Scheme>, ExperimentError> {
        if self.scheme.takes_param() {
            self.params
                .iter()
                .map(|&p| Scheme::new(self.scheme, Some(p)).map_err(Into::into))
                .collect()
        } else {
            Ok(vec![Scheme::new(self.scheme, None)?])
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut state = None;
        let mut amplitudes = None;
        let mut alpha = DEFAULT_ALPHA;
        let mut scheme = SchemeKind::None;
        let mut params = Vec::new();
        let mut grid = GammaGrid::default();
        let mut output = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| ExperimentError::Parse { line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| parse_err(format!("{key}: bad number '{v}'")))
            };
            match key {
                "state" => state = Some(value.to_string()),
                "amplitudes" => amplitudes = Some(parse_amplitudes(value)?),
                "alpha" => alpha = number(value)?,
                "scheme" => scheme = value.parse().map_err(|e| parse_err(format!("{e}")))?,
                "params" => params = parse_list(value)?,
                "gamma_t_start" => grid.start = number(value)?,
                "gamma_t_stop" => grid.stop = number(value)?,
                "gamma_t_step" => grid.step = number(value)?,
                "output" => output = Some(PathBuf::from(value)),
                other => return Err(parse_err(format!("unknown key '{other}'"))),
            }
        }
        let state = StateChoice::from_label(
            state.as_deref().ok_or_else(|| ExperimentError::InvalidConfig("missing key 'state'".into()))?,
            amplitudes,
        )?;
        let cfg = Self {
            state,
            alpha,
            scheme,
            params,
            grid,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }
}
