use num_complex::Complex64;

use super::ast::EvalError;
use crate::linalg::CMatrix;

/// Taylor coefficients c_0..c_order of an analytic scalar function at 0,
/// extracted by discretizing the Cauchy integral on |z| = radius.
///
/// With M = max(64, 8·order) equispaced samples the discretization error is
/// O((radius/R)^M) for a function analytic on |z| < R, far below all
/// tolerances used here as long as radius sits well inside R.
pub fn series_from_samples<E>(
    mut f: impl FnMut(Complex64) -> Result<Complex64, E>,
    radius: f64,
    order: usize,
) -> Result<Vec<Complex64>, E> {
    let m = 64.max(8 * order);
    let mut samples = Vec::with_capacity(m);
    for k in 0..m {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let z = Complex64::from_polar(radius, angle);
        samples.push(f(z)?);
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, s) in samples.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64;
            acc += s * Complex64::from_polar(1.0, angle);
        }
        coeffs.push(acc / (m as f64 * radius.powi(j as i32)));
    }
    Ok(coeffs)
}

/// Evaluate `Σ_j coeffs[j]·scale^j·N^j` for a nilpotent N.
///
/// N must satisfy `‖N^k‖ ≤ 1e-12` for some k ≤ dim(N); all terms of index ≥ k
/// vanish exactly, so the result is an exact polynomial value independent of
/// any coefficients past index k−1 (which must exist: coeffs.len() ≥ k).
pub fn evaluate_on_nilpotent(
    coeffs: &[Complex64],
    scale: Complex64,
    n: &CMatrix,
) -> Result<CMatrix, EvalError> {
    if !n.is_square() {
        return Err(EvalError::Linalg(crate::linalg::LinalgError::NotSquare {
            rows: n.rows(),
            cols: n.cols(),
        }));
    }
    let dim = n.rows();
    let mut powers = vec![CMatrix::identity(dim)];
    let mut order = None;
    for k in 1..=dim {
        let next = &powers[k - 1] * n;
        if next.frobenius_norm() <= 1e-12 {
            order = Some(k);
            break;
        }
        powers.push(next);
    }
    let Some(order) = order else {
        let norm = (&powers[dim - 1] * n).frobenius_norm();
        return Err(EvalError::NotNilpotent { order: dim, norm });
    };
    if coeffs.len() < order {
        return Err(EvalError::CoefficientsTooShort {
            needed: order,
            got: coeffs.len(),
        });
    }

    let mut acc = CMatrix::zeros(dim, dim);
    let mut scale_pow = Complex64::new(1.0, 0.0);
    for (j, p) in powers.iter().enumerate() {
        acc = &acc + &p.scale(coeffs[j] * scale_pow);
        scale_pow *= scale;
    }
    Ok(acc)
}

/// The k×k upper shift matrix, nilpotent of order k.
pub fn shift_matrix(k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |i, j| {
        if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
