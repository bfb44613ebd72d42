use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CMatrix, LinalgError};

/// A point X ∈ M_n(ℂ)^g: an ordered g-tuple of square matrices of one size.
///
/// Serialized as a plain JSON array of matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CMatrix>", into = "Vec<CMatrix>")]
pub struct MatrixTuple {
    components: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(components: Vec<CMatrix>) -> Result<Self, LinalgError> {
        if components.is_empty() {
            return Err(LinalgError::Empty);
        }
        let n = components[0].rows();
        if components.iter().any(|m| !m.is_square() || m.rows() != n) {
            return Err(LinalgError::MixedTuple);
        }
        Ok(Self { components })
    }

    /// The zero tuple in M_n(ℂ)^g.
    pub fn zero(g: usize, n: usize) -> Self {
        Self::new(vec![CMatrix::zeros(n, n); g]).expect("g ≥ 1, square zeros")
    }

    /// Tuple of 1×1 matrices from scalars.
    pub fn from_scalars(values: &[Complex64]) -> Self {
        Self::new(values.iter().map(|&z| CMatrix::scalar(z)).collect())
            .expect("non-empty scalar list")
    }

    /// Matrix size n shared by every component.
    pub fn n(&self) -> usize {
        self.components[0].rows()
    }

    /// Number of variables g.
    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.components
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CMatrix> {
        self.components.iter()
    }

    /// Componentwise direct sum, the tuple X ⊕ Y.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.arity() != other.arity() {
            return Err(LinalgError::MixedTuple);
        }
        Self::new(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            components: self.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.arity() != other.arity() || self.n() != other.n() {
            return Err(LinalgError::MixedTuple);
        }
        Self::new(self.iter().zip(other.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Simultaneous unitary conjugation U* X U.
    pub fn unitary_conj(&self, u: &CMatrix) -> Self {
        let ua = u.adjoint();
        Self {
            components: self.iter().map(|m| &(&ua * m) * u).collect(),
        }
    }

    /// Simultaneous similarity S X S⁻¹.
    pub fn similarity_conj(&self, s: &CMatrix, s_inv: &CMatrix) -> Self {
        Self {
            components: self.iter().map(|m| &(s * m) * s_inv).collect(),
        }
    }

    /// Largest component operator norm; the tuple-level size measure.
    pub fn max_operator_norm(&self) -> f64 {
        self.iter().map(|m| m.operator_norm()).fold(0.0, f64::max)
    }

    pub fn max_frobenius_norm(&self) -> f64 {
        self.iter().map(|m| m.frobenius_norm()).fold(0.0, f64::max)
    }

    /// Largest componentwise distance to another tuple.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).frobenius_norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for MatrixTuple {
    type Output = CMatrix;
    fn index(&self, j: usize) -> &CMatrix {
        &self.components[j]
    }
}

impl TryFrom<Vec<CMatrix>> for MatrixTuple {
    type Error = String;
    fn try_from(v: Vec<CMatrix>) -> Result<Self, String> {
        Self::new(v).map_err(|e| e.to_string())
    }
}

impl From<MatrixTuple> for Vec<CMatrix> {
    fn from(t: MatrixTuple) -> Self {
        t.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn rejects_mixed_sizes_and_empty() {
        assert!(MatrixTuple::new(vec![]).is_err());
        assert!(MatrixTuple::new(vec![CMatrix::identity(2), CMatrix::identity(3)]).is_err());
        assert!(MatrixTuple::new(vec![CMatrix::zeros(2, 3)]).is_err());
    }

    #[test]
    fn direct_sum_shapes() {
        let mut rng = SplitMix64::new(1);
        let x = rng.tuple(2, 2);
        let y = rng.tuple(2, 3);
        let s = x.direct_sum(&y).unwrap();
        assert_eq!(s.n(), 5);
        assert_eq!(s.arity(), 2);
        assert_eq!(s[0].block(0, 0, 2, 2), x[0]);
        assert_eq!(s[1].block(2, 2, 3, 3), y[1]);
    }

    #[test]
    fn tuple_json_round_trip() {
        let mut rng = SplitMix64::new(2);
        let x = rng.tuple(3, 2);
        let s = serde_json::to_string(&x).unwrap();
        let back: MatrixTuple = serde_json::from_str(&s).unwrap();
        assert!(x.max_distance(&back) < 1e-15);
    }

    #[test]
    fn tuple_json_rejects_mixed_sizes() {
        let bad = r#"[{"rows":1,"cols":1,"re":[[0]],"im":[[0]]},
                      {"rows":2,"cols":2,"re":[[0,0],[0,0]],"im":[[0,0],[0,0]]}]"#;
        assert!(serde_json::from_str::<MatrixTuple>(bad).is_err());
    }
}
