use log::warn;

use crate::gmn::genuine_negativity;
use crate::qstate::DensityMatrix;
use crate::recovery::{run_scheme, Scheme};
use crate::tolerance;

use super::{ExperimentError, StateChoice};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VanishOptions {
    /// `E` above this counts as entangled.
    pub epsilon: f64,
    /// Bisection stops once the bracket is this narrow.
    pub width: f64,
    pub upper: f64,
}

impl Default for VanishOptions {
    fn default() -> Self {
        Self {
            epsilon: tolerance::VANISH_EPSILON,
            width: tolerance::VANISH_WIDTH,
            upper: tolerance::VANISH_UPPER,
        }
    }
}

fn negativity_at(rho0: &DensityMatrix, scheme: Scheme, gamma_t: f64) -> Result<f64, ExperimentError> {
    let out = run_scheme(rho0, scheme, gamma_t)?;
    let w = genuine_negativity(&out.state)?;
    if !w.is_optimal() {
        warn!("solver status {:?} at Gamma*t = {gamma_t}", w.status);
    }
    Ok(w.e)
}

/// Midpoint of the final bisection bracket around the point where `E` drops
/// to `epsilon`.
pub fn vanishing_time_of(rho0: &DensityMatrix, scheme: Scheme, opts: &VanishOptions) -> Result<f64, ExperimentError> {
    let e0 = negativity_at(rho0, scheme, 0.0)?;
    if !(e0 > opts.epsilon) {
        return Err(ExperimentError::NoEntanglementAtStart(e0));
    }
    let e_hi = negativity_at(rho0, scheme, opts.upper)?;
    if e_hi > opts.epsilon {
        return Err(ExperimentError::BracketNotFound {
            upper: opts.upper,
            e: e_hi,
        });
    }
    let (mut lo, mut hi) = (0.0, opts.upper);
    while hi - lo > opts.width {
        let mid = 0.5 * (lo + hi);
        if negativity_at(rho0, scheme, mid)? > opts.epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Vanishing time of the white-noise mixture of a named state.
pub fn vanishing_time(state: &StateChoice, alpha: f64, scheme: Scheme) -> Result<f64, ExperimentError> {
    vanishing_time_of(&state.mixture(alpha)?, scheme, &VanishOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::maximally_mixed;

    #[test]
    fn separable_start_is_rejected() {
        let err = vanishing_time_of(&maximally_mixed(3), Scheme::None, &VanishOptions::default());
        assert!(matches!(err, Err(ExperimentError::NoEntanglementAtStart(_))));
    }

    #[test]
    fn bracket_must_close() {
        let opts = VanishOptions {
            upper: 0.1,
            ..VanishOptions::default()
        };
        let rho = StateChoice::Ghz.mixture(0.8).unwrap();
        assert!(matches!(
            vanishing_time_of(&rho, Scheme::None, &opts),
            Err(ExperimentError::BracketNotFound { .. })
        ));
    }
}
