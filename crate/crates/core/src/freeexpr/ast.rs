use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{CMatrix, LinalgError, MatrixTuple};

/// AST of a free expression in variables `x1..xg` and their adjoints.
///
/// Constants act as scalar multiples of the identity at every matrix size.
/// Variable indices are 1-based. Trees built by the parser or the smart
/// constructors below are in normal form: sums and products are flattened,
/// constant subtrees are folded, and scalar factors live in `Scale` nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum FreeExpr {
    Const(Complex64),
    Var(usize),
    AdjVar(usize),
    Sum(Vec<FreeExpr>),
    Prod(Vec<FreeExpr>),
    Scale(Complex64, Box<FreeExpr>),
    Inv(Box<FreeExpr>),
    Series {
        coeffs: Vec<Complex64>,
        arg: Box<FreeExpr>,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("variable x{index} out of range for a {arity}-tuple")]
    VarOutOfRange { index: usize, arity: usize },
    #[error("singular at this point: inv node `{node}`")]
    SingularInverse { node: String },
    #[error("arity mismatch: map expects {expected} variables, tuple has {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("matrix is not nilpotent to tolerance (‖N^{order}‖ = {norm:.3e})")]
    NotNilpotent { order: usize, norm: f64 },
    #[error("coefficient list too short: nilpotency order {needed}, got {got} coefficients")]
    CoefficientsTooShort { needed: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl FreeExpr {
    pub fn constant(c: Complex64) -> Self {
        FreeExpr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        FreeExpr::Const(Complex64::new(x, 0.0))
    }

    /// Normalized sum: flattens nested sums, folds constant terms to one
    /// trailing constant, collapses singletons.
    pub fn sum(terms: Vec<FreeExpr>) -> Self {
        let mut flat = Vec::new();
        let mut constant = Complex64::new(0.0, 0.0);
        let mut saw_const = false;
        let mut stack: Vec<FreeExpr> = terms.into_iter().rev().collect();
        while let Some(t) = stack.pop() {
            match t {
                FreeExpr::Sum(inner) => stack.extend(inner.into_iter().rev()),
                FreeExpr::Const(c) => {
                    constant += c;
                    saw_const = true;
                }
                other => flat.push(other),
            }
        }
        if saw_const && (constant != Complex64::new(0.0, 0.0) || flat.is_empty()) {
            flat.push(FreeExpr::Const(constant));
        }
        match flat.len() {
            0 => FreeExpr::Const(Complex64::new(0.0, 0.0)),
            1 => flat.pop().unwrap(),
            _ => FreeExpr::Sum(flat),
        }
    }

    /// Normalized product: flattens nested products, folds constant factors
    /// into a scalar prefactor carried by a `Scale` node.
    pub fn product(factors: Vec<FreeExpr>) -> Self {
        let mut flat = Vec::new();
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut stack: Vec<FreeExpr> = factors.into_iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f {
                FreeExpr::Prod(inner) => stack.extend(inner.into_iter().rev()),
                FreeExpr::Const(c) => coeff *= c,
                FreeExpr::Scale(c, inner) => {
                    coeff *= c;
                    stack.push(*inner);
                }
                other => flat.push(other),
            }
        }
        let body = match flat.len() {
            0 => return FreeExpr::Const(coeff),
            1 => flat.pop().unwrap(),
            _ => FreeExpr::Prod(flat),
        };
        FreeExpr::scaled(coeff, body)
    }

    /// Normalized scalar multiple.
    pub fn scaled(c: Complex64, e: FreeExpr) -> Self {
        if c == Complex64::new(1.0, 0.0) {
            return e;
        }
        match e {
            FreeExpr::Const(inner) => FreeExpr::Const(c * inner),
            FreeExpr::Scale(inner_c, inner) => {
                let combined = c * inner_c;
                if combined == Complex64::new(1.0, 0.0) {
                    *inner
                } else {
                    FreeExpr::Scale(combined, inner)
                }
            }
            other => FreeExpr::Scale(c, Box::new(other)),
        }
    }

    pub fn negated(e: FreeExpr) -> Self {
        FreeExpr::scaled(Complex64::new(-1.0, 0.0), e)
    }

    /// e^k as a normalized repeated product; k = 0 is the constant 1.
    pub fn power(e: FreeExpr, k: u32) -> Self {
        match k {
            0 => FreeExpr::Const(Complex64::new(1.0, 0.0)),
            1 => e,
            _ => FreeExpr::product(vec![e; k as usize]),
        }
    }

    /// Largest variable index appearing in the tree (0 when constant).
    pub fn max_var_index(&self) -> usize {
        match self {
            FreeExpr::Const(_) => 0,
            FreeExpr::Var(j) | FreeExpr::AdjVar(j) => *j,
            FreeExpr::Sum(v) | FreeExpr::Prod(v) => {
                v.iter().map(FreeExpr::max_var_index).max().unwrap_or(0)
            }
            FreeExpr::Scale(_, e) | FreeExpr::Inv(e) => e.max_var_index(),
            FreeExpr::Series { arg, .. } => arg.max_var_index(),
        }
    }

    pub fn has_adjoint(&self) -> bool {
        match self {
            FreeExpr::AdjVar(_) => true,
            FreeExpr::Const(_) | FreeExpr::Var(_) => false,
            FreeExpr::Sum(v) | FreeExpr::Prod(v) => v.iter().any(FreeExpr::has_adjoint),
            FreeExpr::Scale(_, e) | FreeExpr::Inv(e) => e.has_adjoint(),
            FreeExpr::Series { arg, .. } => arg.has_adjoint(),
        }
    }

    pub fn has_inv(&self) -> bool {
        match self {
            FreeExpr::Inv(_) => true,
            FreeExpr::Const(_) | FreeExpr::Var(_) | FreeExpr::AdjVar(_) => false,
            FreeExpr::Sum(v) | FreeExpr::Prod(v) => v.iter().any(FreeExpr::has_inv),
            FreeExpr::Scale(_, e) => e.has_inv(),
            FreeExpr::Series { arg, .. } => arg.has_inv(),
        }
    }

    /// True for plain non-commutative polynomials: no adjoints, no
    /// inverses, no series nodes.
    pub fn is_polynomial(&self) -> bool {
        match self {
            FreeExpr::Const(_) | FreeExpr::Var(_) => true,
            FreeExpr::AdjVar(_) | FreeExpr::Inv(_) | FreeExpr::Series { .. } => false,
            FreeExpr::Sum(v) | FreeExpr::Prod(v) => v.iter().all(FreeExpr::is_polynomial),
            FreeExpr::Scale(_, e) => e.is_polynomial(),
        }
    }

    /// Evaluate at a matrix tuple by canonical substitution.
    pub fn evaluate(&self, x: &MatrixTuple) -> Result<CMatrix, EvalError> {
        let n = x.n();
        match self {
            FreeExpr::Const(c) => Ok(CMatrix::identity(n).scale(*c)),
            FreeExpr::Var(j) => {
                if *j == 0 || *j > x.arity() {
                    return Err(EvalError::VarOutOfRange {
                        index: *j,
                        arity: x.arity(),
                    });
                }
                Ok(x[*j - 1].clone())
            }
            FreeExpr::AdjVar(j) => {
                if *j == 0 || *j > x.arity() {
                    return Err(EvalError::VarOutOfRange {
                        index: *j,
                        arity: x.arity(),
                    });
                }
                Ok(x[*j - 1].adjoint())
            }
            FreeExpr::Sum(terms) => {
                let mut acc = CMatrix::zeros(n, n);
                for t in terms {
                    acc = &acc + &t.evaluate(x)?;
                }
                Ok(acc)
            }
            FreeExpr::Prod(factors) => {
                let mut acc = CMatrix::identity(n);
                for f in factors {
                    acc = &acc * &f.evaluate(x)?;
                }
                Ok(acc)
            }
            FreeExpr::Scale(c, e) => Ok(e.evaluate(x)?.scale(*c)),
            FreeExpr::Inv(e) => {
                let inner = e.evaluate(x)?;
                inner.inverse().map_err(|err| match err {
                    LinalgError::Singular { .. } => EvalError::SingularInverse {
                        node: format!("inv({e})"),
                    },
                    other => EvalError::Linalg(other),
                })
            }
            FreeExpr::Series { coeffs, arg } => {
                let a = arg.evaluate(x)?;
                let id = CMatrix::identity(n);
                let mut acc = CMatrix::zeros(n, n);
                for &c in coeffs.iter().rev() {
                    acc = &(&acc * &a) + &id.scale(c);
                }
                Ok(acc)
            }
        }
    }
}

/// Operator precedence for printing: sums bind loosest, atoms tightest.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Sum = 0,
    Prod = 1,
    Atom = 2,
}

impl FreeExpr {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: Prec) -> fmt::Result {
        match self {
            FreeExpr::Const(c) => fmt_const(f, *c, prec),
            FreeExpr::Var(j) => write!(f, "x{j}"),
            FreeExpr::AdjVar(j) => write!(f, "x{j}'"),
            FreeExpr::Sum(terms) => {
                let parens = prec > Prec::Sum;
                if parens {
                    write!(f, "(")?;
                }
                let mut first = true;
                for t in terms {
                    fmt_sum_term(f, t, first)?;
                    first = false;
                }
                if parens {
                    write!(f, ")")?;
                }
                Ok(())
            }
            FreeExpr::Prod(factors) => {
                let parens = prec > Prec::Prod;
                if parens {
                    write!(f, "(")?;
                }
                for (i, fac) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    fac.fmt_prec(f, Prec::Atom)?;
                }
                if parens {
                    write!(f, ")")?;
                }
                Ok(())
            }
            FreeExpr::Scale(c, e) => {
                let parens = prec > Prec::Prod;
                if parens {
                    write!(f, "(")?;
                }
                fmt_const(f, *c, Prec::Atom)?;
                write!(f, "*")?;
                e.fmt_prec(f, Prec::Atom)?;
                if parens {
                    write!(f, ")")?;
                }
                Ok(())
            }
            FreeExpr::Inv(e) => {
                write!(f, "inv(")?;
                e.fmt_prec(f, Prec::Sum)?;
                write!(f, ")")
            }
            FreeExpr::Series { coeffs, arg } => {
                // Diagnostic notation; series nodes are not in the grammar.
                write!(f, "series([")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}{:+}i", c.re, c.im)?;
                }
                write!(f, "]; ")?;
                arg.fmt_prec(f, Prec::Sum)?;
                write!(f, ")")
            }
        }
    }
}

/// Print one term of a sum with its joining sign, pulling negative real
/// prefactors through the `-` operator so output stays in the grammar.
fn fmt_sum_term(f: &mut fmt::Formatter<'_>, term: &FreeExpr, first: bool) -> fmt::Result {
    // A constant term prints as up to two primitive terms (real, imaginary).
    if let FreeExpr::Const(c) = term {
        return fmt_const_as_terms(f, *c, first);
    }
    let (negative, inner) = match term {
        FreeExpr::Scale(c, e) if c.im == 0.0 && c.re < 0.0 => (
            true,
            FreeExpr::scaled(Complex64::new(-c.re, -c.im), (**e).clone()),
        ),
        other => (false, other.clone()),
    };
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else if negative {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    inner.fmt_prec(f, Prec::Prod)
}

/// Write a complex constant where a single factor/atom is expected.
fn fmt_const(f: &mut fmt::Formatter<'_>, c: Complex64, prec: Prec) -> fmt::Result {
    let composite = !(c.im == 0.0 && c.re >= 0.0 || c.re == 0.0 && c.im > 0.0);
    if composite && prec > Prec::Sum {
        write!(f, "(")?;
        fmt_const_as_terms(f, c, true)?;
        return write!(f, ")");
    }
    fmt_const_as_terms(f, c, true)
}

fn fmt_const_as_terms(f: &mut fmt::Formatter<'_>, c: Complex64, first: bool) -> fmt::Result {
    if c.re == 0.0 && c.im == 0.0 {
        return if first {
            write!(f, "0")
        } else {
            write!(f, " + 0")
        };
    }
    let mut lead = first;
    if c.re != 0.0 || c.im == 0.0 {
        write_signed(f, c.re, lead)?;
        lead = false;
    }
    if c.im != 0.0 {
        write_signed_imag(f, c.im, lead)?;
    }
    Ok(())
}

fn write_signed(f: &mut fmt::Formatter<'_>, x: f64, first: bool) -> fmt::Result {
    if first {
        if x < 0.0 {
            write!(f, "-{:?}", -x)
        } else {
            write!(f, "{x:?}")
        }
    } else if x < 0.0 {
        write!(f, " - {:?}", -x)
    } else {
        write!(f, " + {x:?}")
    }
}

fn write_signed_imag(f: &mut fmt::Formatter<'_>, x: f64, first: bool) -> fmt::Result {
    let mag = x.abs();
    let unit = if mag == 1.0 {
        "i".to_string()
    } else {
        format!("{mag:?}*i")
    };
    if first {
        if x < 0.0 {
            write!(f, "-{unit}")
        } else {
            write!(f, "{unit}")
        }
    } else if x < 0.0 {
        write!(f, " - {unit}")
    } else {
        write!(f, " + {unit}")
    }
}

impl fmt::Display for FreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, Prec::Sum)
    }
}

/// A free map U ⊂ M(ℂ)^g → M(ℂ)^ĥ given by ĥ component expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeMapHandle {
    arity: usize,
    components: Vec<FreeExpr>,
}

impl FreeMapHandle {
    pub fn new(arity: usize, components: Vec<FreeExpr>) -> Result<Self, EvalError> {
        if arity == 0 || components.is_empty() {
            return Err(EvalError::ArityMismatch {
                expected: arity.max(1),
                got: 0,
            });
        }
        for c in &components {
            let max = c.max_var_index();
            if max > arity {
                return Err(EvalError::VarOutOfRange { index: max, arity });
            }
        }
        Ok(Self { arity, components })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn co_arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[FreeExpr] {
        &self.components
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(FreeExpr::is_polynomial)
    }

    pub fn has_adjoint(&self) -> bool {
        self.components.iter().any(FreeExpr::has_adjoint)
    }

    /// Componentwise evaluation; the tuple arity must match exactly.
    pub fn evaluate_map(&self, x: &MatrixTuple) -> Result<MatrixTuple, EvalError> {
        if x.arity() != self.arity {
            return Err(EvalError::ArityMismatch {
                expected: self.arity,
                got: x.arity(),
            });
        }
        let values: Result<Vec<CMatrix>, EvalError> =
            self.components.iter().map(|c| c.evaluate(x)).collect();
        Ok(MatrixTuple::new(values?)?)
    }

    /// Whether the map sends 0 to 0 (tested at the scalar level).
    pub fn fixes_origin(&self) -> Result<bool, EvalError> {
        let at_zero = self.evaluate_map(&MatrixTuple::zero(self.arity, 1))?;
        Ok(at_zero.max_frobenius_norm() <= 1e-12)
    }
}
