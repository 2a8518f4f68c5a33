use std::fmt;
use std::str::FromStr;

use crate::channels::{damp, DampingParameter};
use crate::qstate::DensityMatrix;

use super::{apply_filter, FilterAngle, RecoveryError, RecoveryOutcome};

/// One step of a recovery protocol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stage {
    Damp(DampingParameter),
    Filter(FilterAngle),
}

/// Runs the stages in order, multiplying the branch weights of the filters.
pub fn run_stages(rho0: &DensityMatrix, stages: &[Stage]) -> Result<RecoveryOutcome, RecoveryError> {
    let mut state = rho0.clone();
    let mut stage_probs = Vec::new();
    for stage in stages {
        match *stage {
            Stage::Damp(p) => state = damp(&state, p.gamma_t())?,
            Stage::Filter(angle) => {
                let out = apply_filter(&state, angle)?;
                stage_probs.push(out.success_prob);
                state = out.state;
            }
        }
    }
    Ok(RecoveryOutcome {
        state,
        success_prob: stage_probs.iter().product(),
        stage_probs,
    })
}

/// Where the filters sit relative to the damping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    None,
    AfterOnce,
    AfterTwice,
    BeforeOnce,
    BeforeAndAfter,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::None,
        SchemeKind::AfterOnce,
        SchemeKind::AfterTwice,
        SchemeKind::BeforeOnce,
        SchemeKind::BeforeAndAfter,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::None => "none",
            SchemeKind::AfterOnce => "after_once",
            SchemeKind::AfterTwice => "after_twice",
            SchemeKind::BeforeOnce => "before_once",
            SchemeKind::BeforeAndAfter => "before_and_after",
        }
    }

    pub fn takes_param(self) -> bool {
        matches!(
            self,
            SchemeKind::AfterTwice | SchemeKind::BeforeOnce | SchemeKind::BeforeAndAfter
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SchemeKind {
    type Err = RecoveryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.label() == s.trim())
            .ok_or_else(|| RecoveryError::InvalidParams(format!("unknown scheme '{s}'")))
    }
}

/// Recovery protocol with its free parameter.
///
/// * `AfterOnce`: damping, then a filter with `tan(theta) = 1/gamma`.
/// * `AfterTwice { s }`: damping, a filter with `tan(theta) = s`, then one with
///   `tan(phi) = 1/gamma`.
/// * `BeforeOnce { x }`: a filter with `tan(theta) = x`, then damping.
/// * `BeforeAndAfter { x }`: a filter with `tan(theta) = x`, damping, then a filter
///   with `tan(phi) = 1/(x gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    None,
    AfterOnce,
    AfterTwice { s: f64 },
    BeforeOnce { x: f64 },
    BeforeAndAfter { x: f64 },
}

impl Scheme {
    pub fn new(kind: SchemeKind, param: Option<f64>) -> Result<Self, RecoveryError> {
        let need = |p: Option<f64>| {
            let v = p.ok_or_else(|| {
                RecoveryError::InvalidParams(format!("scheme {kind} needs a parameter"))
            })?;
            FilterAngle::from_tangent(v)?;
            Ok::<f64, RecoveryError>(v)
        };
        Ok(match kind {
            SchemeKind::None => Scheme::None,
            SchemeKind::AfterOnce => Scheme::AfterOnce,
            SchemeKind::AfterTwice => Scheme::AfterTwice { s: need(param)? },
            SchemeKind::BeforeOnce => Scheme::BeforeOnce { x: need(param)? },
            SchemeKind::BeforeAndAfter => Scheme::BeforeAndAfter { x: need(param)? },
        })
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            Scheme::None => SchemeKind::None,
            Scheme::AfterOnce => SchemeKind::AfterOnce,
            Scheme::AfterTwice { .. } => SchemeKind::AfterTwice,
            Scheme::BeforeOnce { .. } => SchemeKind::BeforeOnce,
            Scheme::BeforeAndAfter { .. } => SchemeKind::BeforeAndAfter,
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            Scheme::None | Scheme::AfterOnce => None,
            Scheme::AfterTwice { s } => Some(s),
            Scheme::BeforeOnce { x } | Scheme::BeforeAndAfter { x } => Some(x),
        }
    }

    pub fn label(&self) -> &'static str {
        self.kind().label()
    }

    /// Protocol steps for a given `Gamma*t`, with the dependent angles resolved.
    pub fn stages(&self, gamma_t: f64) -> Result<Vec<Stage>, RecoveryError> {
        let p = DampingParameter::from_gamma_t(gamma_t)?;
        let g = p.gamma();
        let filter = |t: f64| FilterAngle::from_tangent(t).map(Stage::Filter);
        Ok(match *self {
            Scheme::None => vec![Stage::Damp(p)],
            Scheme::AfterOnce => vec![Stage::Damp(p), filter(1.0 / g)?],
            Scheme::AfterTwice { s } => vec![Stage::Damp(p), filter(s)?, filter(1.0 / g)?],
            Scheme::BeforeOnce { x } => vec![filter(x)?, Stage::Damp(p)],
            Scheme::BeforeAndAfter { x } => {
                vec![filter(x)?, Stage::Damp(p), filter(1.0 / (x * g))?]
            }
        })
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(p) => write!(f, "{}({p})", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

/// Evolves `rho0` through the scheme at the given `Gamma*t`.
pub fn run_scheme(rho0: &DensityMatrix, scheme: Scheme, gamma_t: f64) -> Result<RecoveryOutcome, RecoveryError> {
    run_stages(rho0, &scheme.stages(gamma_t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ghz, random_density_matrix, w_state, white_noise_mixture};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_filters_matches_channel() {
        let rho = white_noise_mixture(&ghz(3).unwrap(), 0.8).unwrap();
        let out = run_scheme(&rho, Scheme::None, 0.3).unwrap();
        assert_eq!(out.state, damp(&rho, 0.3).unwrap());
        assert_eq!(out.success_prob, 1.0);
        assert!(out.stage_probs.is_empty());
    }

    #[test]
    fn compensated_pair_equals_single_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let rho = random_density_matrix(3, &mut rng);
            let gt: f64 = rand::Rng::random_range(&mut rng, 0.05..1.5);
            let g = (-gt / 2.0).exp();
            let t1: f64 = rand::Rng::random_range(&mut rng, 0.2..3.0);
            let pair = [
                Stage::Damp(DampingParameter::from_gamma_t(gt).unwrap()),
                Stage::Filter(FilterAngle::from_tangent(t1).unwrap()),
                Stage::Filter(FilterAngle::from_tangent(1.0 / (t1 * g)).unwrap()),
            ];
            let two = run_stages(&rho, &pair).unwrap();
            let one = run_scheme(&rho, Scheme::AfterOnce, gt).unwrap();
            assert!(two.state.trace_distance(&one.state).unwrap() < 1e-10);
        }
    }

    #[test]
    fn before_and_after_is_identity_without_damping() {
        let rho = white_noise_mixture(&w_state(3).unwrap(), 0.8).unwrap();
        for x in [0.25, 0.5, 1.0, 3.0] {
            let out = run_scheme(&rho, Scheme::BeforeAndAfter { x }, 0.0).unwrap();
            assert!(out.state.matrix().max_abs_diff(rho.matrix()) < 1e-10);
            assert_eq!(out.stage_probs.len(), 2);
            let product: f64 = out.stage_probs.iter().product();
            assert!((product - out.success_prob).abs() < 1e-15);
        }
    }

    #[test]
    fn success_probability_decreases_with_each_filter() {
        let rho = random_density_matrix(3, &mut ChaCha8Rng::seed_from_u64(2));
        let angle = FilterAngle::from_radians(0.6).unwrap();
        let mut prev = 1.0;
        for k in 1..=4 {
            let stages = vec![Stage::Filter(angle); k];
            let p = run_stages(&rho, &stages).unwrap().success_prob;
            assert!(p <= prev + 1e-15, "{k} filters: {p} > {prev}");
            prev = p;
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(Scheme::new(SchemeKind::AfterTwice, None).is_err());
        assert!(Scheme::new(SchemeKind::BeforeOnce, Some(0.0)).is_err());
        assert!(Scheme::new(SchemeKind::BeforeAndAfter, Some(-1.0)).is_err());
        assert_eq!(Scheme::new(SchemeKind::AfterOnce, Some(3.0)).unwrap(), Scheme::AfterOnce);
        assert_eq!(
            Scheme::new(SchemeKind::BeforeOnce, Some(0.5)).unwrap(),
            Scheme::BeforeOnce { x: 0.5 }
        );
        assert!(run_scheme(&ghz(3).unwrap(), Scheme::AfterTwice { s: -2.0 }, 0.1).is_err());
        assert!(run_scheme(&ghz(3).unwrap(), Scheme::None, -0.1).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for kind in SchemeKind::ALL {
            assert_eq!(kind.label().parse::<SchemeKind>().unwrap(), kind);
        }
        assert!("sideways".parse::<SchemeKind>().is_err());
    }
}
