//! Numerical toolkit for free (non-commutative) function theory.
//!
//! A free map is a sequence of functions on g-tuples of n×n complex matrices,
//! one per size n, that respects direct sums and simultaneous similarity.
//! This crate evaluates such maps (polynomials, rationals with inversion,
//! truncated series) on matrix tuples, represents the non-commutative domains
//! they live on (ε-neighborhoods of 0, LMI pencil domains, polynomial-defined
//! domains), and runs the rigidity diagnostics that make sense numerically:
//! block-trick derivatives, intertwining and direct-sum verification,
//! injectivity and properness probes, ampliation and circularity checks.
//!
//! The [`elliptic`] module carries the special-function pipeline for the
//! non-commutative ellipse: Carlson's R_F, incomplete/complete elliptic
//! integrals of the first kind, the conformal map of the disk onto the
//! ellipse, and the nonexistence witness built from them.
//!
//! Everything is plain value-semantic data; all operations are pure and safe
//! to call concurrently.

pub mod domains;
pub mod elliptic;
pub mod freecalc;
pub mod freeexpr;
pub mod linalg;
pub mod report;
pub mod rng;

pub use linalg::{CMatrix, LinalgError, MatrixTuple};
pub use num_complex::Complex64;
