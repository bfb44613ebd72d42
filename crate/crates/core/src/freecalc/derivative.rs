use num_complex::Complex64;
use serde::Serialize;

use super::CalcError;
use crate::freeexpr::FreeMapHandle;
use crate::linalg::{CMatrix, MatrixTuple};

/// Directional derivative `f′(X)[H]` by the block trick.
///
/// f applied to the tuple with components `[[X_j, s·H_j],[0, X_j]]` carries
/// `s·f′(X)[H]` in its upper-right block; the scaling s = min(1, 0.1/‖H‖)
/// keeps the block point evaluable for rational maps. The result is exact
/// for polynomial maps (the formula is algebraic, not a finite difference).
/// Adjoint-bearing expressions are rejected: they do not respect
/// similarity, so the block identity does not hold for them.
pub fn directional_derivative(
    f: &FreeMapHandle,
    x: &MatrixTuple,
    h: &MatrixTuple,
) -> Result<MatrixTuple, CalcError> {
    if f.has_adjoint() {
        return Err(CalcError::AdjointMap);
    }
    if x.arity() != h.arity() || x.n() != h.n() {
        return Err(CalcError::Shape(format!(
            "point is {}-tuple of size {}, direction is {}-tuple of size {}",
            x.arity(),
            x.n(),
            h.arity(),
            h.n()
        )));
    }
    let n = x.n();
    let h_norm = h.max_operator_norm();
    let s = if h_norm > 0.0 {
        (0.1 / h_norm).min(1.0)
    } else {
        1.0
    };
    let block_point = MatrixTuple::new(
        x.iter()
            .zip(h.iter())
            .map(|(xj, hj)| {
                let mut z = CMatrix::zeros(2 * n, 2 * n);
                z.insert_block(0, 0, xj);
                z.insert_block(n, n, xj);
                z.insert_block(0, n, &hj.scale(Complex64::new(s, 0.0)));
                z
            })
            .collect(),
    )?;
    let image = f.evaluate_map(&block_point)?;
    let inv_s = Complex64::new(1.0 / s, 0.0);
    Ok(MatrixTuple::new(
        image
            .iter()
            .map(|m| m.block(0, n, n, n).scale(inv_s))
            .collect(),
    )?)
}

/// The linear map `H ↦ f′(X)[H]` assembled as a (ĥ·n²)×(g·n²) matrix in the
/// matrix-unit basis, one block-trick evaluation per basis direction.
///
/// vec-ordering is row-major within each component, components stacked, so
/// column j·n² + p·n + q corresponds to the direction E_{p,q} in variable j.
pub fn derivative_matrix(
    f: &FreeMapHandle,
    x: &MatrixTuple,
) -> Result<DerivativeMatrix, CalcError> {
    let n = x.n();
    let g = f.arity();
    let h = f.co_arity();
    let mut mat = CMatrix::zeros(h * n * n, g * n * n);
    for j in 0..g {
        for p in 0..n {
            for q in 0..n {
                let mut components = vec![CMatrix::zeros(n, n); g];
                components[j][(p, q)] = Complex64::new(1.0, 0.0);
                let dir = MatrixTuple::new(components)?;
                let image = directional_derivative(f, x, &dir)?;
                let col = j * n * n + p * n + q;
                for (i, m) in image.iter().enumerate() {
                    for r in 0..n {
                        for c in 0..n {
                            mat[(i * n * n + r * n + c, col)] = m[(r, c)];
                        }
                    }
                }
            }
        }
    }
    Ok(DerivativeMatrix {
        base: x.clone(),
        arity: g,
        co_arity: h,
        n,
        matrix: mat,
    })
}

/// Matrix representation of f′(X) at a base point.
#[derive(Debug, Clone)]
pub struct DerivativeMatrix {
    base: MatrixTuple,
    arity: usize,
    co_arity: usize,
    n: usize,
    matrix: CMatrix,
}

impl DerivativeMatrix {
    pub fn base(&self) -> &MatrixTuple {
        &self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Apply through the matrix representation (used to cross-check
    /// linearity against direct block-trick evaluation).
    pub fn apply(&self, h: &MatrixTuple) -> Result<MatrixTuple, CalcError> {
        if h.arity() != self.arity || h.n() != self.n {
            return Err(CalcError::Shape(
                "direction does not match the derivative's base point".into(),
            ));
        }
        let n = self.n;
        let mut vec_in = vec![Complex64::new(0.0, 0.0); self.arity * n * n];
        for (j, m) in h.iter().enumerate() {
            for p in 0..n {
                for q in 0..n {
                    vec_in[j * n * n + p * n + q] = m[(p, q)];
                }
            }
        }
        let mut out = Vec::with_capacity(self.co_arity);
        for i in 0..self.co_arity {
            let mut m = CMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    let row = i * n * n + r * n + c;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (col, v) in vec_in.iter().enumerate() {
                        acc += self.matrix[(row, col)] * v;
                    }
                    m[(r, c)] = acc;
                }
            }
            out.push(m);
        }
        Ok(MatrixTuple::new(out)?)
    }

    /// Smallest singular value; positive means f′(X) is injective.
    pub fn smallest_singular_value(&self) -> f64 {
        self.matrix.smallest_singular_value()
    }

    /// Full eigenvalue spectrum (square representations only).
    pub fn spectrum(&self) -> Result<Vec<Complex64>, CalcError> {
        Ok(super::spectrum::eigenvalues(&self.matrix)?)
    }
}

/// Block-identity test data: points X (size n), Y (size m), an n×m
/// intertwiner candidate Γ and a scalar t. The assembled tuple Z(t) has
/// components [[X_j, t·C_j],[0, Y_j]] with C_j = X_jΓ − ΓY_j.
#[derive(Debug, Clone)]
pub struct BlockWitness {
    pub x: MatrixTuple,
    pub y: MatrixTuple,
    pub gamma: CMatrix,
    pub t: Complex64,
}

impl BlockWitness {
    pub fn new(
        x: MatrixTuple,
        y: MatrixTuple,
        gamma: CMatrix,
        t: Complex64,
    ) -> Result<Self, CalcError> {
        if x.arity() != y.arity() {
            return Err(CalcError::Shape("X and Y must share arity".into()));
        }
        if gamma.rows() != x.n() || gamma.cols() != y.n() {
            return Err(CalcError::Shape(format!(
                "Γ must be {}×{}, got {}×{}",
                x.n(),
                y.n(),
                gamma.rows(),
                gamma.cols()
            )));
        }
        Ok(Self { x, y, gamma, t })
    }

    /// C_j = X_jΓ − ΓY_j.
    pub fn intertwining_defects(&self) -> Vec<CMatrix> {
        self.x
            .iter()
            .zip(self.y.iter())
            .map(|(xj, yj)| &(xj * &self.gamma) - &(&self.gamma * yj))
            .collect()
    }

    /// The (n+m)-sized tuple Z(t), with the given scalar replacing `self.t`.
    pub fn z_tuple_at(&self, t: Complex64) -> MatrixTuple {
        let n = self.x.n();
        let m = self.y.n();
        let defects = self.intertwining_defects();
        MatrixTuple::new(
            self.x
                .iter()
                .zip(self.y.iter())
                .zip(defects.iter())
                .map(|((xj, yj), cj)| {
                    let mut z = CMatrix::zeros(n + m, n + m);
                    z.insert_block(0, 0, xj);
                    z.insert_block(n, n, yj);
                    z.insert_block(0, n, &cj.scale(t));
                    z
                })
                .collect(),
        )
        .expect("components share size n+m")
    }

    pub fn z_tuple(&self) -> MatrixTuple {
        self.z_tuple_at(self.t)
    }
}

/// Deviation of f(Z(t)) from the block form predicted by the intertwining
/// relation: [[f_j(X), t(f_j(X)Γ − Γf_j(Y))],[0, f_j(Y)]].
#[derive(Debug, Clone, Serialize)]
pub struct BlockFormulaReport {
    pub per_component_deviation: Vec<f64>,
    pub max_deviation: f64,
    /// Largest Frobenius norm among the compared blocks; deviations are
    /// meant to be read against `tol · scale`.
    pub scale: f64,
}

pub fn check_block_formula(
    f: &FreeMapHandle,
    w: &BlockWitness,
) -> Result<BlockFormulaReport, CalcError> {
    let z = w.z_tuple();
    let evaluated = f.evaluate_map(&z)?;
    let fx = f.evaluate_map(&w.x)?;
    let fy = f.evaluate_map(&w.y)?;
    let n = w.x.n();
    let m = w.y.n();

    let mut per = Vec::with_capacity(f.co_arity());
    let mut scale: f64 = 1.0;
    for (j, fz) in evaluated.iter().enumerate() {
        let mut predicted = CMatrix::zeros(n + m, n + m);
        predicted.insert_block(0, 0, &fx[j]);
        predicted.insert_block(n, n, &fy[j]);
        let upper_right = (&(&fx[j] * &w.gamma) - &(&w.gamma * &fy[j])).scale(w.t);
        predicted.insert_block(0, n, &upper_right);
        per.push((fz - &predicted).frobenius_norm());
        scale = scale.max(predicted.frobenius_norm());
    }
    let max_deviation = per.iter().copied().fold(0.0, f64::max);
    Ok(BlockFormulaReport {
        per_component_deviation: per,
        max_deviation,
        scale,
    })
}
