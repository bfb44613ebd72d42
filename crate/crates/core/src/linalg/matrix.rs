use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Dense complex matrix, row-major storage, value semantics.
///
/// The repo-wide JSON shape is
/// `{"rows":n,"cols":m,"re":[[...]],"im":[[...]]}` with `re`/`im` given as
/// row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(e, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(LinalgError::Empty);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                op: "from_rows",
                ar: rows.len(),
                ac: cols,
                br: rows.len(),
                bc: rows.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for real-entry literals in tests and builders.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
        .expect("literal rows are rectangular")
    }

    /// 1×1 matrix holding one scalar.
    pub fn scalar(z: Complex64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| c * z).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// (m + m*)/2; the input must be square.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            0.5 * (self[(i, j)] + self[(j, i)].conj())
        })
    }

    /// Deviation from Hermitian symmetry, ‖m − m*‖_F.
    pub fn hermitian_deviation(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// Kronecker product; block (i,j) of the result is `self[i,j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a * other[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.insert_block(0, 0, self);
        out.insert_block(self.rows, self.cols, other);
        out
    }

    /// Copy `block` into self with upper-left corner at (row, col).
    pub fn insert_block(&mut self, row: usize, col: usize, block: &Self) {
        debug_assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    /// Extract the (height×width) block with upper-left corner at (row, col).
    pub fn block(&self, row: usize, col: usize, height: usize, width: usize) -> Self {
        debug_assert!(row + height <= self.rows && col + width <= self.cols);
        Self::from_fn(height, width, |i, j| self[(row + i, col + j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value, sqrt of the top eigenvalue of m*·m.
    pub fn operator_norm(&self) -> f64 {
        if self.data.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return 0.0;
        }
        let gram = &self.adjoint() * self;
        let eigs = gram
            .hermitian_eigenvalues()
            .expect("Gram matrix is Hermitian");
        eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// Smallest singular value, sqrt of the bottom eigenvalue of m*·m.
    pub fn smallest_singular_value(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let eigs = gram
            .hermitian_eigenvalues()
            .expect("Gram matrix is Hermitian");
        eigs.first().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// Matrix power by repeated multiplication (exponents stay tiny here).
    pub fn pow(&self, k: usize) -> Self {
        debug_assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix addition requires equal shapes"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix subtraction requires equal shapes"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product requires inner dimensions to agree"
        );
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = String;

    fn try_from(j: MatrixJson) -> Result<Self, String> {
        if j.rows == 0 || j.cols == 0 {
            return Err("matrix must have positive dimensions".into());
        }
        let shape_ok =
            |grid: &Vec<Vec<f64>>| grid.len() == j.rows && grid.iter().all(|r| r.len() == j.cols);
        if !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(format!(
                "re/im grids do not match declared shape {}x{}",
                j.rows, j.cols
            ));
        }
        let mut m = CMatrix::zeros(j.rows, j.cols);
        for i in 0..j.rows {
            for c in 0..j.cols {
                let z = Complex64::new(j.re[i][c], j.im[i][c]);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(format!("non-finite entry at ({i},{c})"));
                }
                m[(i, c)] = z;
            }
        }
        Ok(m)
    }
}

impl From<CMatrix> for MatrixJson {
    fn from(m: CMatrix) -> Self {
        let re = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m[(i, j)].im).collect())
            .collect();
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re,
            im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identity_case() {
        let k = CMatrix::identity(2).kron(&CMatrix::identity(3));
        assert_eq!(k, CMatrix::identity(6));
    }

    #[test]
    fn kron_scalar_factor() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let b = CMatrix::scalar(c(2.0, 0.0));
        let k = a.kron(&b);
        assert_eq!(k, CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]));
    }

    #[test]
    fn kron_mixed_product_against_direct_multiplication() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let (a, b, cc, d) = (rng.matrix(2), rng.matrix(2), rng.matrix(2), rng.matrix(2));
            let lhs = &a.kron(&b) * &cc.kron(&d);
            let rhs = (&a * &cc).kron(&(&b * &d));
            let scale = lhs.frobenius_norm().max(1.0);
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn adjoint_of_product_reverses() {
        let mut rng = SplitMix64::new(5);
        let a = rng.matrix(3);
        let b = rng.matrix(3);
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        assert!((&lhs - &rhs).frobenius_norm() < 1e-13);
    }

    #[test]
    fn operator_norm_basics() {
        assert!((CMatrix::identity(5).operator_norm() - 1.0).abs() < 1e-13);
        let n = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((n.operator_norm() - 2.0).abs() < 1e-13);
        // ‖X − 1‖ = √2 at the scalar X = 1+√2.
        let x = CMatrix::scalar(c(1.0 + 2f64.sqrt(), 0.0));
        let diff = &x - &CMatrix::identity(1);
        assert!((diff.operator_norm() - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn operator_norm_unitary_invariance() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..10 {
            let x = rng.matrix(4);
            let u = rng.unitary(4);
            let rotated = &(&u * &x) * &u.adjoint();
            assert!((rotated.operator_norm() - x.operator_norm()).abs() < 1e-11);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |entries| {
                CMatrix::from_fn(n, n, |i, j| {
                    let (re, im) = entries[i * n + j];
                    Complex64::new(re, im)
                })
            })
        }

        proptest! {
            #[test]
            fn adjoint_is_an_involution(m in arb_matrix(3)) {
                prop_assert_eq!(m.adjoint().adjoint(), m);
            }

            #[test]
            fn kron_mixed_product(
                a in arb_matrix(2),
                b in arb_matrix(2),
                c in arb_matrix(2),
                d in arb_matrix(2),
            ) {
                let lhs = &a.kron(&b) * &c.kron(&d);
                let rhs = (&a * &c).kron(&(&b * &d));
                let scale = lhs.frobenius_norm().max(1.0);
                prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12 * scale);
            }

            #[test]
            fn product_adjoint_reverses(a in arb_matrix(3), b in arb_matrix(3)) {
                let lhs = (&a * &b).adjoint();
                let rhs = &b.adjoint() * &a.adjoint();
                prop_assert!((&lhs - &rhs).frobenius_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut rng = SplitMix64::new(2);
        let m = rng.matrix(3);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"rows\":3"));
        let back: CMatrix = serde_json::from_str(&s).unwrap();
        assert!((&m - &back).frobenius_norm() < 1e-15);
    }

    #[test]
    fn matrix_json_rejects_bad_shapes() {
        let bad = r#"{"rows":2,"cols":2,"re":[[1,0]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<CMatrix>(bad).is_err());
    }
}
