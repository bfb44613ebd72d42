//! Free-calculus and rigidity diagnostics.
//!
//! The derivative of a free map comes from the block trick: evaluating f at
//! the 2×2 block tuple `[[X, H],[0, X]]` puts `f′(X)[H]` in the upper-right
//! block, exactly, with no finite-difference error. On top of that sit the
//! probes: intertwining/block-formula verification, injectivity and
//! properness sweeps, the ampliation (I_n ⊗ φ′(0)) spectrum check,
//! circular-domain linearity and same-derivative uniqueness checks.
//!
//! Probes return structured reports and never claim proofs: verdicts are
//! three-valued and every tolerance is carried in the report.

mod derivative;
mod probes;
mod spectrum;

pub use derivative::{
    check_block_formula, derivative_matrix, directional_derivative, BlockFormulaReport,
    BlockWitness, DerivativeMatrix,
};
pub use probes::{
    ampliation_check, circular_linearity_check, injectivity_probe, properness_probe,
    uniqueness_check, AmpliationReport, CircularityReport, InjectivityReport, InjectivityVerdict,
    PropernessPoint, PropernessRayReport, PropernessReport, UniquenessReport,
};
pub use spectrum::eigenvalues;

use thiserror::Error;

use crate::domains::DomainError;
use crate::freeexpr::EvalError;
use crate::linalg::LinalgError;

#[derive(Debug, Error)]
pub enum CalcError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map contains adjoint variables and is not a free map; the block-trick derivative does not apply")]
    AdjointMap,
    #[error("map must fix the origin for this check (‖f(0)‖ = {norm:.3e})")]
    DoesNotFixOrigin { norm: f64 },
    #[error("map must have equal arity and co-arity for this check ({arity} vs {co_arity})")]
    NotSelfMap { arity: usize, co_arity: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
