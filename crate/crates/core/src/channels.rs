//! Amplitude-damping Kraus channels and their local composition over a register.

use thiserror::Error;

use crate::matcore::{kron_all, ComplexMatrix};
use crate::qstate::{DensityMatrix, MAX_QUBITS};
use crate::tolerance;

/// Largest register a lifted channel may act on.
pub const MAX_CHANNEL_QUBITS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("damping factor {0} outside (0, 1]")]
    GammaOutOfRange(f64),
    #[error("Gamma*t = {0} must be finite and non-negative")]
    GammaTOutOfRange(f64),
    #[error("{0} qubits exceed the local channel limit of {MAX_CHANNEL_QUBITS}")]
    TooManyQubits(usize),
    #[error("Kraus operators violate completeness (residual {0:.3e})")]
    Incomplete(f64),
    #[error("Kraus set is empty or has inconsistent shapes")]
    Malformed,
    #[error("channel acts on dimension {channel}, state has dimension {state}")]
    DimensionMismatch { channel: usize, state: usize },
}

/// Damping strength expressed both as `Gamma*t` and as `gamma = exp(-Gamma*t/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingParameter {
    gamma_t: f64,
    gamma: f64,
}

impl DampingParameter {
    pub fn from_gamma_t(gamma_t: f64) -> Result<Self, ChannelError> {
        if !gamma_t.is_finite() || gamma_t < 0.0 {
            return Err(ChannelError::GammaTOutOfRange(gamma_t));
        }
        Ok(Self {
            gamma_t,
            gamma: (-gamma_t / 2.0).exp(),
        })
    }

    pub fn from_gamma(gamma: f64) -> Result<Self, ChannelError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(ChannelError::GammaOutOfRange(gamma));
        }
        Ok(Self {
            gamma_t: -2.0 * gamma.ln(),
            gamma,
        })
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Completely positive trace-preserving map `rho -> sum_i K_i rho K_i^dag`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shape consistency and completeness.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        let first = operators.first().ok_or(ChannelError::Malformed)?;
        let dim = first.rows();
        if operators
            .iter()
            .any(|k| k.rows() != dim || k.cols() != dim)
        {
            return Err(ChannelError::Malformed);
        }
        let ch = Self { operators };
        let residual = ch.completeness_residual();
        if residual > tolerance::KRAUS_COMPLETENESS {
            return Err(ChannelError::Incomplete(residual));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// `max |sum_i K_i^dag K_i - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &self.operators {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
    }

    /// `sum_i K_i rho K_i^dag` on a raw matrix.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let dim = rho.rows();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for k in &self.operators {
            out = &out + &rho.sandwich(k);
        }
        out
    }
}

/// Single-qubit amplitude damping: `diag(1, gamma)` and `sqrt(1 - gamma^2) |0><1|`.
pub fn ad_kraus_single(p: DampingParameter) -> KrausChannel {
    let g = p.gamma();
    let decay = (1.0 - g * g).max(0.0).sqrt();
    let k1 = ComplexMatrix::from_real_diagonal(&[1.0, g]);
    let k2 = ComplexMatrix::from_real(2, 2, &[0.0, decay, 0.0, 0.0]).expect("finite");
    KrausChannel {
        operators: vec![k1, k2],
    }
}

/// Tensor product channel with `per_qubit[q]` acting on qubit `q`.
///
/// Produces every Kronecker product of one operator per qubit; products that are
/// exactly zero (e.g. from an undamped qubit) are dropped.
pub fn lift_local(per_qubit: &[KrausChannel]) -> Result<KrausChannel, ChannelError> {
    let n = per_qubit.len();
    if n == 0 {
        return Err(ChannelError::Malformed);
    }
    if n > MAX_CHANNEL_QUBITS || n > MAX_QUBITS {
        return Err(ChannelError::TooManyQubits(n));
    }
    if per_qubit.iter().any(|c| c.dim() != 2) {
        return Err(ChannelError::Malformed);
    }
    let mut operators = Vec::new();
    let counts: Vec<usize> = per_qubit.iter().map(|c| c.operators.len()).collect();
    let total: usize = counts.iter().product();
    for mut code in 0..total {
        let mut picks = vec![0usize; n];
        for q in (0..n).rev() {
            picks[q] = code % counts[q];
            code /= counts[q];
        }
        let factors = picks
            .iter()
            .enumerate()
            .map(|(q, &i)| &per_qubit[q].operators[i]);
        let k = kron_all(factors).expect("non-empty");
        if k.max_abs() > 0.0 {
            operators.push(k);
        }
    }
    Ok(KrausChannel { operators })
}

/// Symmetric local amplitude damping on every qubit of an `n`-qubit register.
pub fn amplitude_damping(n_qubits: usize, p: DampingParameter) -> Result<KrausChannel, ChannelError> {
    let single = ad_kraus_single(p);
    lift_local(&vec![single; n_qubits])
}

/// Local amplitude damping with an individual `Gamma*t` per qubit.
pub fn amplitude_damping_asymmetric(gamma_ts: &[f64]) -> Result<KrausChannel, ChannelError> {
    let singles = gamma_ts
        .iter()
        .map(|&gt| DampingParameter::from_gamma_t(gt).map(ad_kraus_single))
        .collect::<Result<Vec<_>, _>>()?;
    lift_local(&singles)
}

pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix, ChannelError> {
    if ch.dim() != rho.dim() {
        return Err(ChannelError::DimensionMismatch {
            channel: ch.dim(),
            state: rho.dim(),
        });
    }
    Ok(DensityMatrix::from_trusted(
        rho.n_qubits(),
        ch.apply_matrix(rho.matrix()),
    ))
}

/// Evolves `rho` under symmetric local amplitude damping for the given `Gamma*t`.
pub fn damp(rho: &DensityMatrix, gamma_t: f64) -> Result<DensityMatrix, ChannelError> {
    let p = DampingParameter::from_gamma_t(gamma_t)?;
    if p.gamma() == 1.0 {
        return Ok(rho.clone());
    }
    let ch = amplitude_damping(rho.n_qubits(), p)?;
    apply_channel(rho, &ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ghz, random_density_matrix};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Superoperator oracle: builds the column-stacked matrix of the channel entry by
    /// entry from the single-qubit Kraus matrices, then applies it to vec(rho).
    fn superoperator_apply(rho: &ComplexMatrix, gammas: &[f64]) -> ComplexMatrix {
        let n = gammas.len();
        let dim = 1usize << n;
        // Single-qubit transfer tensor T[a][b][c][d] = sum_k w_k[a][c] conj(w_k[b][d]).
        let single = |g: f64| {
            let w1 = [[1.0, 0.0], [0.0, g]];
            let w2 = [[0.0, (1.0 - g * g).sqrt()], [0.0, 0.0]];
            let mut t = [[[[0.0f64; 2]; 2]; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        for d in 0..2 {
                            t[a][b][c][d] = w1[a][c] * w1[b][d] + w2[a][c] * w2[b][d];
                        }
                    }
                }
            }
            t
        };
        let tensors: Vec<_> = gammas.iter().map(|&g| single(g)).collect();
        let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
        let mut sup = vec![vec![0.0f64; dim * dim]; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let mut v = 1.0;
                        for (q, t) in tensors.iter().enumerate() {
                            v *= t[bit(i, q)][bit(j, q)][bit(k, q)][bit(l, q)];
                        }
                        sup[i * dim + j][k * dim + l] = v;
                    }
                }
            }
        }
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                for l in 0..dim {
                    acc += rho[(k, l)] * sup[i * dim + j][k * dim + l];
                }
            }
            acc
        })
    }

    #[test]
    fn damping_parameter_round_trip() {
        let p = DampingParameter::from_gamma_t(0.0).unwrap();
        assert_eq!(p.gamma(), 1.0);
        let p = DampingParameter::from_gamma_t(0.7).unwrap();
        assert_eq!(p.gamma(), (-0.35f64).exp());
        let q = DampingParameter::from_gamma(p.gamma()).unwrap();
        assert!((q.gamma_t() - 0.7).abs() < 1e-14);
        assert!(DampingParameter::from_gamma(0.0).is_err());
        assert!(DampingParameter::from_gamma(1.1).is_err());
        assert!(DampingParameter::from_gamma_t(-0.1).is_err());
        assert!(DampingParameter::from_gamma_t(f64::NAN).is_err());
    }

    #[test]
    fn single_qubit_kraus_values() {
        let ch = ad_kraus_single(DampingParameter::from_gamma(1.0).unwrap());
        assert_eq!(ch.operators()[0], ComplexMatrix::identity(2));
        assert_eq!(ch.operators()[1].max_abs(), 0.0);

        let ch = ad_kraus_single(DampingParameter::from_gamma(0.5).unwrap());
        assert_eq!(ch.operators()[0], ComplexMatrix::from_real_diagonal(&[1.0, 0.5]));
        assert!((ch.operators()[1][(0, 1)].re - 0.75f64.sqrt()).abs() < 1e-15);

        let ch = ad_kraus_single(DampingParameter::from_gamma(0.3).unwrap());
        assert!(ch.completeness_residual() < 1e-15);
    }

    #[test]
    fn lift_counts() {
        let p = DampingParameter::from_gamma_t(0.4).unwrap();
        assert_eq!(amplitude_damping(3, p).unwrap().operators().len(), 8);
        let id = ad_kraus_single(DampingParameter::from_gamma(1.0).unwrap());
        let lifted = lift_local(&[id.clone(), id.clone(), id]).unwrap();
        assert_eq!(lifted.operators().len(), 1);
        assert_eq!(lifted.operators()[0], ComplexMatrix::identity(8));
        let five = vec![ad_kraus_single(p); 5];
        assert!(matches!(lift_local(&five), Err(ChannelError::TooManyQubits(5))));
    }

    #[test]
    fn single_qubit_evolution_pattern() {
        let g: f64 = 0.6;
        let rho = DensityMatrix::new(
            ComplexMatrix::from_vec(
                2,
                2,
                vec![0.3.into(), Complex64::new(0.2, 0.1), Complex64::new(0.2, -0.1), 0.7.into()],
            )
            .unwrap(),
        )
        .unwrap();
        let out = apply_channel(&rho, &ad_kraus_single(DampingParameter::from_gamma(g).unwrap())).unwrap();
        let m = out.matrix();
        assert!((m[(1, 1)].re - 0.7 * g * g).abs() < 1e-15);
        assert!((m[(0, 0)].re - (0.3 + 0.7 * (1.0 - g * g))).abs() < 1e-15);
        assert!((m[(0, 1)] - Complex64::new(0.2, 0.1) * g).norm() < 1e-15);
    }

    #[test]
    fn excited_population_transfer() {
        let excited = DensityMatrix::basis_state(1, 1).unwrap();
        let p = DampingParameter::from_gamma(0.5f64.sqrt()).unwrap();
        let out = apply_channel(&excited, &ad_kraus_single(p)).unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn ghz_matches_superoperator_oracle() {
        let rho = ghz(3).unwrap();
        let gt = 0.1;
        let g = (-gt / 2.0f64).exp();
        let out = damp(&rho, gt).unwrap();
        let oracle = superoperator_apply(rho.matrix(), &[g, g, g]);
        assert!(out.matrix().max_abs_diff(&oracle) < 1e-14);
    }

    #[test]
    fn asymmetric_rates_match_superoperator_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density_matrix(3, &mut rng);
        let gts = [0.1, 0.5, 1.3];
        let ch = amplitude_damping_asymmetric(&gts).unwrap();
        let out = apply_channel(&rho, &ch).unwrap();
        let gammas: Vec<f64> = gts.iter().map(|gt| (-gt / 2.0f64).exp()).collect();
        let oracle = superoperator_apply(rho.matrix(), &gammas);
        assert!(out.matrix().max_abs_diff(&oracle) < 1e-14);
    }

    #[test]
    fn ground_state_is_fixed() {
        let ground = DensityMatrix::basis_state(3, 0).unwrap();
        for gt in [0.0, 0.3, 2.0, 40.0] {
            assert_eq!(damp(&ground, gt).unwrap(), ground);
        }
    }

    #[test]
    fn long_time_limit_is_ground_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density_matrix(3, &mut rng);
        let out = damp(&rho, 50.0).unwrap();
        let ground = DensityMatrix::basis_state(3, 0).unwrap();
        assert!(out.trace_distance(&ground).unwrap() < 1e-8);
    }

    #[test]
    fn dimension_mismatch() {
        let ch = amplitude_damping(2, DampingParameter::from_gamma_t(0.1).unwrap()).unwrap();
        let rho = ghz(3).unwrap();
        assert!(matches!(
            apply_channel(&rho, &ch),
            Err(ChannelError::DimensionMismatch { channel: 4, state: 8 })
        ));
    }

    #[test]
    fn rejects_incomplete_sets() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(KrausChannel::new(vec![half]), Err(ChannelError::Incomplete(_))));
        assert!(matches!(KrausChannel::new(vec![]), Err(ChannelError::Malformed)));
    }
}
