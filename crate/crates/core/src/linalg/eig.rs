//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Rotations eliminate one off-diagonal pair at a time; sweeps repeat until
//! the off-diagonal mass is negligible relative to the matrix scale. At the
//! sizes this crate works with (≤ 64) the quadratic convergence of Jacobi
//! gives full accuracy in a handful of sweeps, with no dependencies.

use num_complex::Complex64;

use super::{CMatrix, LinalgError, ABS_FLOOR};

const MAX_SWEEPS: usize = 60;

impl CMatrix {
    /// All eigenvalues of a Hermitian matrix, ascending.
    ///
    /// The input must be Hermitian within `1e-10·‖m‖`; it is symmetrized
    /// before solving so roundoff-level asymmetry never leaks into results.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        Ok(self.hermitian_eigen()?.0)
    }

    /// Eigenvalues (ascending) and matching eigenvectors (columns).
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let scale = self.frobenius_norm();
        let deviation = self.hermitian_deviation();
        let bound = (1e-10 * scale).max(ABS_FLOOR);
        if deviation > bound {
            return Err(LinalgError::NotHermitian { deviation, bound });
        }

        let n = self.rows();
        let mut a = self.hermitian_part();
        let mut v = CMatrix::identity(n);
        let off_tol = (1e-15 * scale).max(1e-300);

        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= off_tol {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > off_tol {
            return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok((values, vectors))
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_hermitian_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.hermitian_eigenvalues()?[0])
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation zeroing the (p,q) entry of the Hermitian matrix `a`,
/// accumulated into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let beta = a[(p, q)];
    let abs_beta = beta.norm();
    if abs_beta == 0.0 {
        return;
    }
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let phase = beta / abs_beta;

    // tan of the rotation angle: smaller root of t² + 2τt − 1 = 0.
    let tau = (gamma - alpha) / (2.0 * abs_beta);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = phase * (t * c);

    let n = a.rows();
    // Right-multiply by G (columns p,q), G = [[c, s],[−s̄, c]].
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s.conj();
        a[(k, q)] = akp * s + akq * c;
    }
    // Left-multiply by G* (rows p,q).
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s.conj() + aqk * c;
    }
    // Clamp the eliminated pair and enforce real diagonal.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s.conj();
        v[(k, q)] = vkp * s + vkq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn identity_eigenvalues() {
        let eigs = CMatrix::identity(4).hermitian_eigenvalues().unwrap();
        assert_eq!(eigs.len(), 4);
        for e in eigs {
            assert!((e - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_sorted() {
        let m = CMatrix::diag_real(&[3.0, -1.0]);
        let eigs = m.hermitian_eigenvalues().unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-14 && (eigs[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_residuals() {
        let mut rng = SplitMix64::new(17);
        for n in [2usize, 3, 5, 8, 16] {
            let m = rng.hermitian(n);
            let scale = m.frobenius_norm().max(1.0);
            let (values, vectors) = m.hermitian_eigen().unwrap();
            for (j, &lambda) in values.iter().enumerate() {
                let v = vectors.block(0, j, n, 1);
                let residual =
                    (&(&m * &v) - &v.scale(Complex64::new(lambda, 0.0))).frobenius_norm();
                assert!(
                    residual <= 1e-9 * scale,
                    "residual {residual:.3e} for n={n}, eig {lambda}"
                );
            }
        }
    }

    #[test]
    fn converges_at_the_top_of_the_working_range() {
        let mut rng = SplitMix64::new(29);
        let n = 64;
        let m = rng.hermitian(n);
        let scale = m.frobenius_norm();
        let (values, vectors) = m.hermitian_eigen().unwrap();
        // Spot-check residuals at the spectrum's edges and middle.
        for &j in &[0usize, n / 2, n - 1] {
            let v = vectors.block(0, j, n, 1);
            let residual = (&(&m * &v) - &v.scale(Complex64::new(values[j], 0.0))).frobenius_norm();
            assert!(residual <= 1e-9 * scale, "residual {residual:.3e} at {j}");
        }
        // Trace equals the eigenvalue sum.
        let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
        let sum: f64 = values.iter().sum();
        assert!((trace - sum).abs() <= 1e-9 * scale);
    }

    #[test]
    fn direct_sum_spectrum_is_multiset_union() {
        let mut rng = SplitMix64::new(23);
        let a = rng.hermitian(3);
        let b = rng.hermitian(4);
        let mut expect = a.hermitian_eigenvalues().unwrap();
        expect.extend(b.hermitian_eigenvalues().unwrap());
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let got = a.direct_sum(&b).hermitian_eigenvalues().unwrap();
        for (x, y) in expect.iter().zip(&got) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            m.hermitian_eigenvalues(),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_non_square_input() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(
            m.hermitian_eigenvalues(),
            Err(LinalgError::NotSquare { .. })
        ));
    }
}
