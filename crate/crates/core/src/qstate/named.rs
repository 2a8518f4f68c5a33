use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matcore::{kron_all, ComplexMatrix};

use super::{qubits_for_dim, DensityMatrix, StateError};

/// Normalised projector onto the given amplitude vector.
pub fn pure_state(amplitudes: &[Complex64]) -> Result<DensityMatrix, StateError> {
    let n = qubits_for_dim(amplitudes.len())?;
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(StateError::ZeroVector);
    }
    let v: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
    Ok(DensityMatrix::from_trusted(n, ComplexMatrix::outer(&v)))
}

fn from_basis_superposition(n: usize, indices: impl Iterator<Item = usize>) -> Result<DensityMatrix, StateError> {
    if n > super::MAX_QUBITS {
        return Err(StateError::TooManyQubits(n));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for i in indices {
        amps[i] = 1.0.into();
    }
    pure_state(&amps)
}

/// `(|0...0> + |1...1>)/sqrt(2)`.
pub fn ghz(n: usize) -> Result<DensityMatrix, StateError> {
    if n == 0 {
        return Err(StateError::ZeroVector);
    }
    from_basis_superposition(n, [0, (1 << n) - 1].into_iter())
}

/// Equal superposition of all single-excitation basis states.
pub fn w_state(n: usize) -> Result<DensityMatrix, StateError> {
    from_basis_superposition(n, (0..n).map(|k| 1 << k))
}

/// Equal superposition of all states with exactly one qubit in `|0>`; the
/// bit-flipped W state, `(|110> + |101> + |011>)/sqrt(3)` for three qubits.
pub fn w_tilde(n: usize) -> Result<DensityMatrix, StateError> {
    let all = (1usize << n) - 1;
    from_basis_superposition(n, (0..n).map(move |k| all ^ (1 << k)))
}

pub fn maximally_mixed(n_qubits: usize) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    DensityMatrix::from_trusted(
        n_qubits,
        ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
    )
}

/// `alpha * psi + (1 - alpha) * I / 2^n`.
pub fn white_noise_mixture(psi: &DensityMatrix, alpha: f64) -> Result<DensityMatrix, StateError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(StateError::AlphaOutOfRange(alpha));
    }
    let noise = maximally_mixed(psi.n_qubits());
    let m = &psi.matrix().scale_real(alpha) + &noise.matrix().scale_real(1.0 - alpha);
    Ok(DensityMatrix::from_trusted(psi.n_qubits(), m))
}

/// Tensor product of the factors, first factor on the most significant qubits.
pub fn product_state(factors: &[DensityMatrix]) -> Result<DensityMatrix, StateError> {
    let n: usize = factors.iter().map(|f| f.n_qubits()).sum();
    if n > super::MAX_QUBITS {
        return Err(StateError::TooManyQubits(n));
    }
    let m = kron_all(factors.iter().map(|f| f.matrix())).ok_or(StateError::ZeroVector)?;
    Ok(DensityMatrix::from_trusted(n, m))
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_pure_state(n_qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let amps: Vec<Complex64> = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    pure_state(&amps).expect("gaussian vector is non-zero")
}

/// Full-rank random state `G G^dag / tr(G G^dag)` with complex Gaussian `G`.
pub fn random_density_matrix(n_qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(n_qubits, m.scale_real(1.0 / tr))
}

/// Random element of U(2): a global phase times an SU(2) matrix from a uniform 3-sphere point.
pub fn random_single_qubit_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let a = gaussian(rng);
    let b = gaussian(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::from_vec(2, 2, vec![a * phase, b * phase, -b.conj() * phase, a.conj() * phase])
        .expect("finite entries")
}
