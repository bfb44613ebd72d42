//! Cholesky, LU and QR factorizations sized for this crate's matrices.

use num_complex::Complex64;

use super::{CMatrix, LinalgError, ABS_FLOOR};

impl CMatrix {
    /// Positive-definiteness test by Cholesky factorization.
    ///
    /// Returns true iff every pivot stays above `1e-12·‖m‖`. The input must
    /// be Hermitian within tolerance; it is symmetrized before factoring.
    pub fn cholesky_pd(&self) -> Result<bool, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let scale = self.frobenius_norm();
        let deviation = self.hermitian_deviation();
        let herm_bound = (1e-10 * scale).max(ABS_FLOOR);
        if deviation > herm_bound {
            return Err(LinalgError::NotHermitian {
                deviation,
                bound: herm_bound,
            });
        }

        let n = self.rows();
        let a = self.hermitian_part();
        let floor = (1e-12 * scale).max(ABS_FLOOR);
        let mut l = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if d <= floor {
                return Ok(false);
            }
            let ljj = d.sqrt();
            l[(j, j)] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(true)
    }

    /// Matrix inverse by LU with partial pivoting.
    ///
    /// A pivot below `1e-12·‖m‖` signals "not invertible at this point".
    pub fn inverse(&self) -> Result<CMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let n = self.rows();
        let floor = (1e-12 * self.frobenius_norm()).max(ABS_FLOOR);
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let mag = lu[(i, k)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag <= floor {
                return Err(LinalgError::Singular {
                    pivot: pivot_mag,
                    floor,
                });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }

        // Solve for each unit column.
        let mut inv = CMatrix::zeros(n, n);
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..n {
            for i in 0..n {
                let mut s = if perm[i] == col {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                for k in 0..i {
                    s -= lu[(i, k)] * y[k];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for k in (i + 1)..n {
                    s -= lu[(i, k)] * inv[(k, col)];
                }
                inv[(i, col)] = s / lu[(i, i)];
            }
        }
        Ok(inv)
    }

    /// QR by twice-iterated modified Gram–Schmidt; R has positive diagonal.
    pub fn qr(&self) -> Result<(CMatrix, CMatrix), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let n = self.rows();
        let floor = (1e-12 * self.frobenius_norm()).max(ABS_FLOOR);
        let mut q = CMatrix::zeros(n, n);
        let mut r = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut v: Vec<Complex64> = (0..n).map(|i| self[(i, j)]).collect();
            for _pass in 0..2 {
                for k in 0..j {
                    let mut proj = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        proj += q[(i, k)].conj() * v[i];
                    }
                    r[(k, j)] += proj;
                    for i in 0..n {
                        let sub = proj * q[(i, k)];
                        v[i] -= sub;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= floor {
                return Err(LinalgError::Singular { pivot: norm, floor });
            }
            r[(j, j)] = Complex64::new(norm, 0.0);
            for i in 0..n {
                q[(i, j)] = v[i] / norm;
            }
        }
        Ok((q, r))
    }
}
