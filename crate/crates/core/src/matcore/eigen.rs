use num_complex::Complex64;

use super::{ComplexMatrix, MatError, RealMatrix};
use crate::tolerance;

/// Spectral decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: RealMatrix,
}

/// Spectral decomposition of a complex Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V diag(lambda) V^dag`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let k = self.eigenvalues.len();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..k)
                .map(|j| v[(r, j)] * v[(c, j)].conj() * self.eigenvalues[j])
                .sum()
        })
    }
}

/// `H = A + iB  ->  [[A, -B], [B, A]]`.
///
/// The real matrix is symmetric iff `H` is Hermitian and carries every eigenvalue of
/// `H` twice.
pub fn real_embedding(h: &ComplexMatrix) -> RealMatrix {
    let n = h.rows();
    let m = h.cols();
    let mut out = RealMatrix::zeros(2 * n, 2 * m);
    for r in 0..n {
        for c in 0..m {
            let z = h[(r, c)];
            out[(r, c)] = z.re;
            out[(r + n, c + m)] = z.re;
            out[(r, c + m)] = -z.im;
            out[(r + n, c)] = z.im;
        }
    }
    out
}

/// Cyclic Jacobi eigensolver for real symmetric matrices.
pub fn symmetric_eig(a: &RealMatrix) -> Result<SymmetricEigen, MatError> {
    let n = a.rows();
    if n != a.cols() {
        return Err(MatError::NotSquare(a.rows(), a.cols()));
    }
    let mut m = a.clone();
    m.symmetrize();
    let mut v = RealMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = tolerance::JACOBI_OFF_DIAGONAL * scale;

    let mut converged = false;
    for _sweep in 0..tolerance::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // Skip elements already negligible against both diagonal entries.
                if apq.abs() < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > target {
        return Err(MatError::ConvergenceFailure {
            sweeps: tolerance::JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let mut eigenvectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &RealMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += m[(r, c)] * m[(r, c)];
            }
        }
    }
    s.sqrt()
}

/// `M <- J^T M J`, `V <- V J` for the plane rotation on coordinates `(p, q)`.
fn rotate(m: &mut RealMatrix, v: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Full spectral decomposition of a Hermitian matrix.
///
/// Runs Jacobi on the real embedding and folds the doubled spectrum back: each real
/// eigenvector `[a; b]` is a complex eigenvector `a + ib`, and the two members of
/// a pair span the same complex line.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen, MatError> {
    if !h.is_square() {
        return Err(MatError::NotSquare(h.rows(), h.cols()));
    }
    let n = h.rows();
    let err = h.hermiticity_error();
    if err > tolerance::HERMITIAN * h.max_abs().max(1.0) {
        return Err(MatError::NotHermitian(err));
    }
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let embedded = real_embedding(&h.hermitian_part());
    let real = symmetric_eig(&embedded)?;

    // Cluster the 2n real eigenvalues; every cluster has even size in exact arithmetic.
    let scale = real
        .eigenvalues
        .iter()
        .fold(1.0f64, |m, x| m.max(x.abs()));
    let gap = 1e-9 * scale;
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=2 * n {
        let split = i == 2 * n || real.eigenvalues[i] - real.eigenvalues[i - 1] > gap;
        if split && (i - start) % 2 == 0 {
            clusters.push((start, i));
            start = i;
        }
    }
    if start != 2 * n {
        clusters.push((start, 2 * n));
    }

    let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut values: Vec<f64> = Vec::with_capacity(n);
    for &(lo, hi) in &clusters {
        let want = (hi - lo) / 2;
        let mut candidates: Vec<Vec<Complex64>> = (lo..hi)
            .map(|j| {
                (0..n)
                    .map(|r| {
                        Complex64::new(real.eigenvectors[(r, j)], real.eigenvectors[(r + n, j)])
                    })
                    .collect()
            })
            .collect();
        let mean = real.eigenvalues[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        for _ in 0..want {
            // Greedy: orthogonalise every candidate, keep the one with the largest residual.
            let mut best: Option<(usize, f64)> = None;
            for (idx, cand) in candidates.iter_mut().enumerate() {
                let residual = project_out(cand, &accepted);
                if best.is_none_or(|(_, b)| residual > b) {
                    best = Some((idx, residual));
                }
            }
            let (idx, norm) = best.expect("cluster has candidates");
            let mut vec = candidates.swap_remove(idx);
            vec.iter_mut().for_each(|z| *z /= norm);
            accepted.push(vec);
            values.push(mean);
        }
    }
    // Refine values with Rayleigh quotients, which also splits pair averages correctly.
    let hh = h.hermitian_part();
    for (val, vec) in values.iter_mut().zip(&accepted) {
        let mut q = 0.0;
        for r in 0..n {
            let hv: Complex64 = (0..n).map(|c| hh[(r, c)] * vec[c]).sum();
            q += (vec[r].conj() * hv).re;
        }
        *val = q;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| accepted[order[c]][r]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Removes components along `basis` (orthonormal) from `v`; returns the remaining norm.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) -> f64 {
    for b in basis {
        let overlap: Complex64 = b.iter().zip(v.iter()).map(|(bi, vi)| bi.conj() * vi).sum();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= overlap * bi;
        }
    }
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>, MatError> {
    hermitian_eig(h).map(|e| e.eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        g.hermitian_part()
    }

    fn gram_error(v: &ComplexMatrix) -> f64 {
        (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.cols()))
    }

    #[test]
    fn diagonal_input_sorted() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.eigenvalues.len(), 3);
        for (got, want) in e.eigenvalues.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = hermitian_eig(&sx).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_complex_spectrum() {
        let sy = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eig(&sy).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&sy) < 1e-13);
    }

    #[test]
    fn random_8x8_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let h = random_hermitian(8, &mut rng);
            let e = hermitian_eig(&h).unwrap();
            let residual = (&e.reconstruct() - &h).frobenius_norm();
            assert!(residual < 1e-10, "residual {residual}");
            assert!(gram_error(&e.eigenvectors) < 1e-10);
            let sum: f64 = e.eigenvalues.iter().sum();
            assert!((sum - h.trace().re).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_spectrum_keeps_orthonormal_basis() {
        // Identity plus a rank-one term: eigenvalue 1 with multiplicity n-1.
        let v: Vec<Complex64> = (0..6).map(|k| Complex64::new(1.0, k as f64 * 0.3)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        let h = &ComplexMatrix::identity(6) + &ComplexMatrix::outer(&v);
        let e = hermitian_eig(&h).unwrap();
        assert!(gram_error(&e.eigenvectors) < 1e-10);
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        assert!((e.max_eigenvalue() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(MatError::NotHermitian(_))));
    }

    #[test]
    fn embedding_duplicates_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(5, &mut rng);
        let complex = hermitian_eig(&h).unwrap().eigenvalues;
        let real = symmetric_eig(&real_embedding(&h)).unwrap().eigenvalues;
        for (k, lam) in complex.iter().enumerate() {
            assert!((real[2 * k] - lam).abs() < 1e-11);
            assert!((real[2 * k + 1] - lam).abs() < 1e-11);
        }
    }
}
