//! Dense complex linear algebra kernel.
//!
//! Everything here is sized for the toolkit's working range (matrices up to
//! roughly 64×64): a value-semantic matrix type, Kronecker products and
//! direct sums, a cyclic Jacobi eigensolver for Hermitian matrices, Cholesky
//! positive-definiteness tests, LU inversion and QR. Tolerances are relative
//! to the input scale with an absolute floor of [`ABS_FLOOR`].

mod decomp;
mod eig;
mod matrix;
mod tuple;

pub use matrix::CMatrix;
pub use tuple::MatrixTuple;

use thiserror::Error;

/// Absolute floor under every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch in {op}: ({ar}x{ac}) vs ({br}x{bc})")]
    DimensionMismatch {
        op: &'static str,
        ar: usize,
        ac: usize,
        br: usize,
        bc: usize,
    },
    #[error(
        "matrix is not Hermitian within tolerance (deviation {deviation:.3e}, bound {bound:.3e})"
    )]
    NotHermitian { deviation: f64, bound: f64 },
    #[error("matrix not invertible at this point (pivot {pivot:.3e} below floor {floor:.3e})")]
    Singular { pivot: f64, floor: f64 },
    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("empty matrix or tuple not allowed")]
    Empty,
    #[error("matrix tuple components must be square and share one size")]
    MixedTuple,
}
