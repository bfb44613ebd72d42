//! Free (non-commutative) expressions: AST, parser, evaluator, series tools.
//!
//! An expression is a tree over variables `x1..xg`, their adjoints `x1'..`,
//! complex constants (acting as multiples of the identity), sums, products,
//! scalar multiples, inverses and truncated univariate power series. A
//! [`FreeMapHandle`] bundles several expressions into a map
//! U ⊂ M(ℂ)^g → M(ℂ)^ĥ evaluated levelwise on matrix tuples.
//!
//! The concrete grammar accepted by [`parse`] is
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := number | 'i' | 'x' uint | 'x' uint "'" | '(' expr ')'
//!         | 'inv(' expr ')' | 'exp(' expr ')'
//! ```
//!
//! `'` is the adjoint, `inv` is matrix inversion, and `exp` is permitted only
//! on constant subexpressions, where it is folded at parse time (so complex
//! units like `exp(i*0.7)` are ordinary constants). Numbers are unsigned
//! decimal literals with optional fraction and exponent; complex constants
//! are written `a+b*i`. The leading `'-'` is a convenience extension over the
//! minimal grammar. Parsed expressions are kept in a normal form (flattened
//! sums/products, constants folded, scalar factors pulled into `Scale`) and
//! printing a parsed expression yields text that re-parses to the identical
//! tree; `Series` nodes are built programmatically and print in a
//! diagnostic-only notation outside the grammar.

mod ast;
mod parse;
mod random;
mod series;

pub use ast::{EvalError, FreeExpr, FreeMapHandle};
pub use parse::{parse, ParseError};
pub use random::{random_polynomial_map, random_self_map_fixing_zero};
pub use series::{evaluate_on_nilpotent, series_from_samples, shift_matrix};

use num_complex::Complex64;

/// Default truncation order for series work when the caller has no reason
/// to choose one.
pub const DEFAULT_SERIES_ORDER: usize = 8;

/// The Möbius self-map f_θ(x) = e^{iθ}·x·(1 + x − e^{iθ}x)⁻¹ of the disk
/// ‖X−1‖ < √2, as a one-variable map handle.
pub fn mobius(theta: f64) -> FreeMapHandle {
    let t = format!("{theta:?}");
    let src = format!("exp(({t})*i)*x1*inv(1 + x1 - exp(({t})*i)*x1)");
    let expr = parse(&src, 1).expect("Möbius template is grammatical");
    FreeMapHandle::new(1, vec![expr]).expect("single-variable component")
}

/// The identity map on g variables.
pub fn identity_map(g: usize) -> FreeMapHandle {
    FreeMapHandle::new(g, (1..=g).map(FreeExpr::Var).collect()).expect("g ≥ 1")
}

/// A linear pencil-row map x ↦ Σ c_j x_j as a one-component handle.
pub fn linear_map(coefficients: &[Complex64]) -> FreeMapHandle {
    let terms = coefficients
        .iter()
        .enumerate()
        .map(|(j, &c)| FreeExpr::scaled(c, FreeExpr::Var(j + 1)))
        .collect();
    FreeMapHandle::new(coefficients.len(), vec![FreeExpr::sum(terms)])
        .expect("at least one coefficient")
}
