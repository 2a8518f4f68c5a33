//! Numerical tolerances shared across the crate.
//!
//! All thresholds live here so that no module carries its own magic numbers.

/// Maximum entrywise deviation `|h_ij - conj(h_ji)|` accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Smallest eigenvalue accepted for a density matrix.
pub const PSD_MIN_EIGENVALUE: f64 = -1e-9;

/// Unit-trace tolerance for density matrices.
pub const TRACE: f64 = 1e-10;

/// Off-diagonal Frobenius norm (relative to the input norm) at which Jacobi stops.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-12;

/// Sweep budget for the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Completeness residual `|sum K^dag K - I|` accepted for a Kraus set.
pub const KRAUS_COMPLETENESS: f64 = 1e-12;

/// Post-selection branches with trace below this are treated as failed.
pub const ZERO_SUCCESS_PROBABILITY: f64 = 1e-14;

/// Magnitude below which an error-matrix entry counts as a structural zero.
pub const ERROR_PATTERN: f64 = 1e-10;

/// Entries below this cannot pin the normalisation of an error decomposition.
pub const ERROR_SCALE: f64 = 1e-14;

/// Interior-point stopping target on the duality gap and residuals.
pub const SDP_GAP_TARGET: f64 = 1e-8;

/// Gap (and residual) at or below which a solve is reported `Optimal`.
pub const SDP_GAP_OPTIMAL: f64 = 1e-7;

/// Interior-point iteration cap.
pub const SDP_MAX_ITERATIONS: usize = 200;

/// Fraction-to-boundary factor for interior-point step lengths.
pub const SDP_STEP_FRACTION: f64 = 0.98;

/// Relative diagonal shift of the Schur complement, used only when it fails to factor.
pub const SDP_REGULARIZATION: f64 = 1e-12;

/// Minimum eigenvalue accepted on a PSD block of a returned solution.
pub const SDP_BLOCK_PSD: f64 = -1e-8;

/// Solver objectives in `[-E_CLAMP, 0)` are reported as zero genuine negativity.
pub const E_CLAMP: f64 = 1e-9;

/// Genuine negativity above which a state counts as entangled during bisection.
pub const VANISH_EPSILON: f64 = 1e-6;

/// Final bracket width for vanishing-time bisection.
pub const VANISH_WIDTH: f64 = 1e-3;

/// Default upper end of the vanishing-time search bracket in units of Gamma*t.
pub const VANISH_UPPER: f64 = 10.0;
