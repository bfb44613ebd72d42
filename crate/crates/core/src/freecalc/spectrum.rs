//! Eigenvalues of general complex matrices for the ampliation check.
//!
//! Householder reduction to Hessenberg form, then explicit QR iteration with
//! Wilkinson shifts. Shifted iteration is required here: ampliation spectra
//! are rotations of multiplicity n², exactly the equal-modulus configuration
//! on which unshifted QR stalls.

use num_complex::Complex64;

use crate::linalg::{CMatrix, LinalgError};

const MAX_ITERS_PER_EIGENVALUE: usize = 60;

/// All eigenvalues of a square complex matrix, unordered.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let scale = h.frobenius_norm().max(1.0);
    let deflate_tol = 1e-15 * scale;

    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iters = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            hi = 0;
            continue;
        }
        // Deflate wherever a subdiagonal entry has collapsed.
        let m_ix = hi - 1;
        let sub = h[(m_ix, m_ix - 1)].norm();
        if sub <= deflate_tol * (1.0 + h[(m_ix, m_ix)].norm() + h[(m_ix - 1, m_ix - 1)].norm()) {
            eigs.push(h[(m_ix, m_ix)]);
            hi -= 1;
            iters = 0;
            continue;
        }
        if iters >= MAX_ITERS_PER_EIGENVALUE * hi {
            return Err(LinalgError::NoConvergence { sweeps: iters });
        }
        // Wilkinson shift: trailing 2×2 eigenvalue closest to the corner,
        // with an exceptional perturbation when progress stalls.
        let mut shift = wilkinson_shift(&h, m_ix);
        if iters > 0 && iters.is_multiple_of(20) {
            shift += Complex64::new(sub, 0.5 * sub);
        }
        qr_step(&mut h, hi, shift);
        iters += 1;
    }
    Ok(eigs)
}

fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below the subdiagonal.
        let mut col: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let alpha = if col[0].norm() > 0.0 {
            -(col[0] / col[0].norm()) * norm
        } else {
            Complex64::new(-norm, 0.0)
        };
        col[0] -= alpha;
        let vnorm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= 1e-300 {
            continue;
        }
        for v in col.iter_mut() {
            *v /= vnorm;
        }
        // H ← (I − 2vv*) H (I − 2vv*)
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, v) in col.iter().enumerate() {
                dot += v.conj() * h[(k + 1 + i, j)];
            }
            for (i, v) in col.iter().enumerate() {
                let delta = 2.0 * v * dot;
                h[(k + 1 + i, j)] -= delta;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (j, v) in col.iter().enumerate() {
                dot += h[(i, k + 1 + j)] * *v;
            }
            for (j, v) in col.iter().enumerate() {
                let delta = 2.0 * dot * v.conj();
                h[(i, k + 1 + j)] -= delta;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn wilkinson_shift(h: &CMatrix, m_ix: usize) -> Complex64 {
    let a = h[(m_ix - 1, m_ix - 1)];
    let b = h[(m_ix - 1, m_ix)];
    let c = h[(m_ix, m_ix - 1)];
    let d = h[(m_ix, m_ix)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the leading k×k active block.
fn qr_step(h: &mut CMatrix, k: usize, shift: Complex64) {
    for i in 0..k {
        h[(i, i)] -= shift;
    }
    // Factor with Givens rotations; remember them to form RQ.
    let mut rotations = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let a = h[(i, i)];
        let b = h[(i + 1, i)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if r <= 1e-300 {
            rotations.push((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
            continue;
        }
        let c = a.conj() / r;
        let s = b.conj() / r;
        for j in 0..k {
            let top = h[(i, j)];
            let bot = h[(i + 1, j)];
            h[(i, j)] = c * top + s * bot;
            h[(i + 1, j)] = -s.conj() * top + c.conj() * bot;
        }
        rotations.push((c, s));
    }
    for (i, (c, s)) in rotations.iter().enumerate() {
        // Right-multiply by G*, touching columns i, i+1.
        for row in 0..k.min(i + 3) {
            let left = h[(row, i)];
            let right = h[(row, i + 1)];
            h[(row, i)] = left * c.conj() + right * s.conj();
            h[(row, i + 1)] = -left * *s + right * *c;
        }
    }
    for i in 0..k {
        h[(i, i)] += shift;
    }
}
