use crate::matcore::{hermitian_eigenvalues, ComplexMatrix};

use super::bipartition::qubit_mask;
use super::{Bipartition, DensityMatrix, StateError};

/// Transposes the tensor indices of the qubits in `part.left()`.
///
/// Works on any `2^n x 2^n` matrix, which lets the witness builder reuse it on
/// operators that are not states.
pub fn partial_transpose_matrix(m: &ComplexMatrix, part: &Bipartition) -> ComplexMatrix {
    let dim = 1usize << part.n_qubits();
    assert_eq!(m.rows(), dim, "matrix does not match bipartition size");
    assert_eq!(m.cols(), dim, "matrix does not match bipartition size");
    let mask = part.left_mask();
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let src_row = (i & !mask) | (j & mask);
        let src_col = (j & !mask) | (i & mask);
        m[(src_row, src_col)]
    })
}

pub fn partial_transpose(rho: &DensityMatrix, part: &Bipartition) -> ComplexMatrix {
    partial_transpose_matrix(rho.matrix(), part)
}

/// Traces out every qubit not in `keep`. Kept qubits retain their relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, StateError> {
    let n = rho.n_qubits();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(StateError::EmptyKeepSet);
    }
    if let Some(&q) = keep.iter().find(|&&q| q >= n) {
        return Err(StateError::InvalidQubit {
            index: q,
            n_qubits: n,
        });
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let kd = 1usize << k;
    let td = 1usize << traced.len();

    // Scatter a sub-register value onto the full basis index.
    let scatter = |qubits: &[usize], value: usize| -> usize {
        let width = qubits.len();
        qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
            if value & (1 << (width - 1 - pos)) != 0 {
                acc | qubit_mask(n, &[q])
            } else {
                acc
            }
        })
    };
    let keep_idx: Vec<usize> = (0..kd).map(|a| scatter(&keep, a)).collect();
    let trace_idx: Vec<usize> = (0..td).map(|t| scatter(&traced, t)).collect();

    let m = rho.matrix();
    let reduced = ComplexMatrix::from_fn(kd, kd, |a, b| {
        trace_idx
            .iter()
            .map(|&t| m[(keep_idx[a] | t, keep_idx[b] | t)])
            .sum()
    });
    Ok(DensityMatrix::from_trusted(k, reduced))
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix, part: &Bipartition) -> f64 {
    let pt = partial_transpose(rho, part);
    hermitian_eigenvalues(&pt)
        .expect("partial transpose of a state is Hermitian")
        .iter()
        .filter(|&&x| x < 0.0)
        .map(|x| -x)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ghz, maximally_mixed, product_state, pure_state, w_state, white_noise_mixture};
    use num_complex::Complex64;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        pure_state(&[s.into(), 0.0.into(), 0.0.into(), s.into()]).unwrap()
    }

    fn qubit(p0: f64, coh: Complex64) -> DensityMatrix {
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![p0.into(), coh, coh.conj(), (1.0 - p0).into()],
        )
        .unwrap();
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let a = Bipartition::new(2, &[0]).unwrap();
        let pt = partial_transpose(&bell(), &a);
        // By hand: the transpose on qubit 0 turns |00><11| + |11><00| into the swap
        // block on {|01>, |10>} with eigenvalues +-1/2, leaving 1/2, 1/2 elsewhere.
        let eig = hermitian_eigenvalues(&pt).unwrap();
        assert!((eig[0] + 0.5).abs() < 1e-13);
        for &e in &eig[1..] {
            assert!((e - 0.5).abs() < 1e-13);
        }
        assert!((negativity(&bell(), &a) - 0.5).abs() < 1e-13);
    }

    #[test]
    fn product_states_are_ppt() {
        let a = qubit(0.3, Complex64::new(0.2, -0.1));
        let bc = product_state(&[qubit(0.6, Complex64::new(0.1, 0.3)), qubit(0.9, 0.05.into())]).unwrap();
        let rho = product_state(&[a.clone(), bc.clone()]).unwrap();
        let part = Bipartition::new(3, &[0]).unwrap();
        let pt = partial_transpose(&rho, &part);
        let expected = a.matrix().transpose().kron(bc.matrix());
        assert!(pt.max_abs_diff(&expected) < 1e-15);
        assert!(hermitian_eigenvalues(&pt).unwrap()[0] > -1e-12);
        for p in Bipartition::all(3) {
            assert!(negativity(&rho, &p) < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_is_fixed() {
        let id = maximally_mixed(3);
        for p in Bipartition::all(3) {
            assert_eq!(partial_transpose(&id, &p), *id.matrix());
        }
    }

    #[test]
    fn involution_and_trace() {
        let rho = w_state(3).unwrap();
        for p in Bipartition::all(3) {
            let once = partial_transpose(&rho, &p);
            let twice = partial_transpose_matrix(&once, &p);
            assert_eq!(&twice, rho.matrix());
            assert_eq!(once.trace(), rho.matrix().trace());
            assert!(once.is_hermitian(0.0));
        }
    }

    #[test]
    fn ghz_marginal_is_maximally_mixed() {
        let r = partial_trace(&ghz(3).unwrap(), &[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&maximally_mixed(1).into_matrix()) < 1e-15);
    }

    #[test]
    fn product_marginal() {
        let a = qubit(0.7, Complex64::new(0.1, 0.2));
        let b = qubit(0.2, Complex64::new(-0.3, 0.0));
        let rho = product_state(&[a.clone(), b.clone()]).unwrap();
        assert!(partial_trace(&rho, &[0]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(partial_trace(&rho, &[1]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn w_marginal_by_direct_summation() {
        let rho = w_state(3).unwrap();
        let m = rho.matrix();
        // Oracle: sum over the 2x2 values of qubits 1 and 2 with explicit bit arithmetic.
        let mut oracle = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for q1 in 0..2 {
                    for q2 in 0..2 {
                        oracle[a][b] += m[(4 * a + 2 * q1 + q2, 4 * b + 2 * q1 + q2)];
                    }
                }
            }
        }
        let r = partial_trace(&rho, &[0]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((r.matrix()[(a, b)] - oracle[a][b]).norm() < 1e-15);
            }
        }
        assert!((oracle[0][0].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((oracle[1][1].re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = ghz(3).unwrap();
        assert!(matches!(partial_trace(&rho, &[]), Err(StateError::EmptyKeepSet)));
        assert!(matches!(
            partial_trace(&rho, &[5]),
            Err(StateError::InvalidQubit { index: 5, .. })
        ));
        let kept = partial_trace(&rho, &[2, 0]).unwrap();
        assert_eq!(kept.n_qubits(), 2);
    }

    #[test]
    fn ghz_mixture_negativity_threshold() {
        let part = Bipartition::new(3, &[0]).unwrap();
        // Oracle: the A-transposed GHZ mixture built entry by entry, bisected on its
        // lowest eigenvalue.
        let min_eig_oracle = |alpha: f64| {
            let mut m = ComplexMatrix::from_real_diagonal(&[(1.0 - alpha) / 8.0; 8]);
            m[(0, 0)] += alpha / 2.0;
            m[(7, 7)] += alpha / 2.0;
            // |000><111| -> |100><011| under transpose of qubit 0.
            m[(4, 3)] += alpha / 2.0;
            m[(3, 4)] += alpha / 2.0;
            hermitian_eigenvalues(&m).unwrap()[0]
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if min_eig_oracle(mid) < 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let alpha0 = 0.5 * (lo + hi);
        assert!((alpha0 - 0.2).abs() < 1e-9);
        let base = ghz(3).unwrap();
        for k in 0..=20 {
            let alpha = k as f64 / 20.0;
            if (alpha - alpha0).abs() < 1e-6 {
                continue;
            }
            let rho = white_noise_mixture(&base, alpha).unwrap();
            let n = negativity(&rho, &part);
            assert_eq!(n > 1e-12, alpha > alpha0, "alpha {alpha}: negativity {n}");
        }
    }
}
