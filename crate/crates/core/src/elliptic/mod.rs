//! Elliptic integrals and the non-commutative ellipse pipeline.
//!
//! Numerics for the one concrete no-go example this toolkit reproduces: the
//! ellipse LMI domain on which no proper self-map with derivative i at the
//! origin exists. The ingredients, bottom to top: Carlson's symmetric R_F,
//! the incomplete/complete elliptic integrals of the first kind, the
//! conformal map of the unit disk onto the ellipse, its Newton inverse, the
//! composed self-map candidate b(z) = f(i·f⁻¹(z)), and finally the witness
//! computation on a nilpotent ray.

mod carlson;
mod ellipse;
mod integrals;

pub use carlson::carlson_rf;
pub use ellipse::{build_ellipse, EllipseModel, WitnessReport};
pub use integrals::{elliptic_k, elliptic_k_incomplete, mu};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("R_F argument on the negative real axis: {arg}")]
    BranchCut { arg: Complex64 },
    #[error("R_F requires at most one zero argument")]
    TooManyZeros,
    #[error("branch ambiguity: z² real and ≥ 1 (z = {z})")]
    BranchAmbiguity { z: Complex64 },
    #[error("modulus must lie in (0,1), got {t}")]
    ModulusOutOfRange { t: f64 },
    #[error("Newton inversion did not converge (last iterate {last}, residual {residual:.3e})")]
    NoConvergence { last: Complex64, residual: f64 },
    #[error("R_F duplication did not converge")]
    RfNoConvergence,
    #[error("stage `{stage}` failed: {message}")]
    Stage {
        stage: &'static str,
        message: String,
    },
}

impl EllipticError {
    pub(crate) fn at_stage(stage: &'static str, message: impl std::fmt::Display) -> Self {
        EllipticError::Stage {
            stage,
            message: message.to_string(),
        }
    }
}
