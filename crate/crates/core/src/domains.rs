//! Non-commutative domains and their membership machinery.
//!
//! A domain is a sequence of open sets, one per matrix size n, cut out by a
//! positive-definiteness condition on a defining matrix:
//!
//! * ε-neighborhood of 0: ε²·I − Σ X_jX_j* ≻ 0;
//! * LMI pencil domain: I + Σ A_j⊗X_j + Σ A_j*⊗X_j* ≻ 0 for a truly linear
//!   pencil L(x) = Σ A_j x_j;
//! * polynomial domain: I + q(X) + q(X)* ≻ 0 for an expression q with
//!   q(0) = 0, restricted to the connected component of the origin.
//!
//! Membership in the origin component is decided by the defining-matrix test
//! plus a 64-step segment homotopy from 0; for ε-neighborhoods and pencil
//! domains the positivity set is already convex, so the homotopy is exact
//! there. "Distance" to the boundary is reported as the spectral gap (the
//! smallest eigenvalue of the defining matrix), not a metric distance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freeexpr::{parse, EvalError, FreeExpr, ParseError};
use crate::linalg::{CMatrix, LinalgError, MatrixTuple, ABS_FLOOR};
use crate::rng::SplitMix64;

/// Steps of the segment homotopy used for the origin-component test.
pub const HOMOTOPY_STEPS: usize = 64;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("tuple arity {got} does not match domain arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("pencil coefficients must be square matrices of one size")]
    BadPencil,
    #[error("polynomial domain requires q(0) = 0, got ‖q(0)‖ = {norm:.3e}")]
    NonvanishingAtOrigin { norm: f64 },
    #[error("evaluation of the defining expression failed: {0}")]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("domain expression failed to parse: {0}")]
    Parse(#[from] ParseError),
}

/// A truly linear pencil L(x) = Σ A_j x_j with d×d coefficients.
///
/// The associated LMI is 𝓛(X) = I + Σ A_j⊗X_j + Σ A_j*⊗X_j* ≻ 0; the
/// constant term is the identity by construction, so 𝓛(0) = I.
///
/// JSON shape: `{"d":d,"g":g,"A":[<matrix>,...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PencilJson", into = "PencilJson")]
pub struct TrulyLinearPencil {
    coefficients: Vec<CMatrix>,
}

impl TrulyLinearPencil {
    pub fn new(coefficients: Vec<CMatrix>) -> Result<Self, DomainError> {
        if coefficients.is_empty() {
            return Err(DomainError::BadPencil);
        }
        let d = coefficients[0].rows();
        if coefficients.iter().any(|a| !a.is_square() || a.rows() != d) {
            return Err(DomainError::BadPencil);
        }
        Ok(Self { coefficients })
    }

    /// Coefficient size d.
    pub fn d(&self) -> usize {
        self.coefficients[0].rows()
    }

    /// Variable count g.
    pub fn g(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[CMatrix] {
        &self.coefficients
    }

    /// 𝓛(X) = I_{dn} + Σ A_j⊗X_j + Σ A_j*⊗X_j* by canonical substitution.
    pub fn lmi_matrix(&self, x: &MatrixTuple) -> Result<CMatrix, DomainError> {
        if x.arity() != self.g() {
            return Err(DomainError::ArityMismatch {
                expected: self.g(),
                got: x.arity(),
            });
        }
        let n = x.n();
        let mut out = CMatrix::identity(self.d() * n);
        for (a, xj) in self.coefficients.iter().zip(x.iter()) {
            out = &out + &a.kron(xj);
            out = &out + &a.adjoint().kron(&xj.adjoint());
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PencilJson {
    d: usize,
    g: usize,
    #[serde(rename = "A")]
    a: Vec<CMatrix>,
}

impl TryFrom<PencilJson> for TrulyLinearPencil {
    type Error = String;
    fn try_from(j: PencilJson) -> Result<Self, String> {
        let pencil = TrulyLinearPencil::new(j.a).map_err(|e| e.to_string())?;
        if pencil.d() != j.d || pencil.g() != j.g {
            return Err(format!(
                "declared d={}, g={} do not match coefficients (d={}, g={})",
                j.d,
                j.g,
                pencil.d(),
                pencil.g()
            ));
        }
        Ok(pencil)
    }
}

impl From<TrulyLinearPencil> for PencilJson {
    fn from(p: TrulyLinearPencil) -> Self {
        PencilJson {
            d: p.d(),
            g: p.g(),
            a: p.coefficients,
        }
    }
}

/// Three-valued membership verdict under the pivot floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// A non-commutative domain.
#[derive(Debug, Clone)]
pub enum NCDomain {
    /// N_ε: tuples with Σ X_jX_j* ≺ ε²·I.
    EpsNeighborhood { g: usize, eps: f64 },
    /// LMI domain of a truly linear pencil.
    Pencil(TrulyLinearPencil),
    /// Origin component of I + q(X) + q(X)* ≻ 0 for an expression q, q(0)=0.
    Polynomial { g: usize, q: FreeExpr },
}

impl NCDomain {
    pub fn eps_neighborhood(g: usize, eps: f64) -> Self {
        assert!(g >= 1 && eps > 0.0, "need g ≥ 1 and ε > 0");
        NCDomain::EpsNeighborhood { g, eps }
    }

    pub fn pencil(p: TrulyLinearPencil) -> Self {
        NCDomain::Pencil(p)
    }

    /// Polynomial domain from a defining expression with q(0) = 0.
    pub fn polynomial(g: usize, q: FreeExpr) -> Result<Self, DomainError> {
        let at_zero = q.evaluate(&MatrixTuple::zero(g, 1))?;
        let norm = at_zero.frobenius_norm();
        if norm > 1e-12 {
            return Err(DomainError::NonvanishingAtOrigin { norm });
        }
        Ok(NCDomain::Polynomial { g, q })
    }

    pub fn arity(&self) -> usize {
        match self {
            NCDomain::EpsNeighborhood { g, .. } => *g,
            NCDomain::Pencil(p) => p.g(),
            NCDomain::Polynomial { g, .. } => *g,
        }
    }

    /// The Hermitian matrix whose positive-definiteness defines membership.
    pub fn defining_matrix(&self, x: &MatrixTuple) -> Result<CMatrix, DomainError> {
        if x.arity() != self.arity() {
            return Err(DomainError::ArityMismatch {
                expected: self.arity(),
                got: x.arity(),
            });
        }
        match self {
            NCDomain::EpsNeighborhood { eps, .. } => {
                let n = x.n();
                let mut out = CMatrix::identity(n).scale(Complex64::new(eps * eps, 0.0));
                for xj in x.iter() {
                    out = &out - &(xj * &xj.adjoint());
                }
                Ok(out)
            }
            NCDomain::Pencil(p) => p.lmi_matrix(x),
            NCDomain::Polynomial { q, .. } => {
                let qx = q.evaluate(x)?;
                let n = x.n();
                Ok(&(&CMatrix::identity(n) + &qx) + &qx.adjoint())
            }
        }
    }

    /// Spectral gap at x: the smallest eigenvalue of the defining matrix.
    /// Positive inside, ≈ 0 on the boundary, negative outside.
    pub fn boundary_distance(&self, x: &MatrixTuple) -> Result<f64, DomainError> {
        Ok(self.defining_matrix(x)?.min_hermitian_eigenvalue()?)
    }

    /// Strict membership in the origin component: the defining matrix is
    /// positive definite at x and along the 64-step segment t·x, t ∈ (0,1].
    pub fn is_member(&self, x: &MatrixTuple) -> Result<bool, DomainError> {
        for k in (1..=HOMOTOPY_STEPS).rev() {
            let t = k as f64 / HOMOTOPY_STEPS as f64;
            let point = if k == HOMOTOPY_STEPS {
                x.clone()
            } else {
                x.scale(Complex64::new(t, 0.0))
            };
            match self.defining_matrix(&point) {
                Ok(m) => {
                    if !m.cholesky_pd()? {
                        return Ok(false);
                    }
                }
                // A singular inverse inside the defining expression means the
                // segment has left the evaluable set, hence the component.
                Err(DomainError::Eval(EvalError::SingularInverse { .. })) => return Ok(false),
                Err(other) => return Err(other),
            }
        }
        Ok(true)
    }

    /// Three-valued membership: points whose spectral gap sits within the
    /// pivot floor `1e-12·‖defining matrix‖` are classified Boundary.
    pub fn membership(&self, x: &MatrixTuple) -> Result<(Membership, f64), DomainError> {
        let m = self.defining_matrix(x)?;
        let gap = m.min_hermitian_eigenvalue()?;
        let floor = (1e-12 * m.frobenius_norm()).max(ABS_FLOOR);
        let verdict = if gap.abs() <= floor {
            Membership::Boundary
        } else if gap > 0.0 && self.is_member(x)? {
            Membership::Inside
        } else {
            Membership::Outside
        };
        Ok((verdict, gap))
    }

    /// Random member drawn by scaling a random direction back from the
    /// boundary; deterministic in the generator state.
    pub fn sample_member(
        &self,
        n: usize,
        rng: &mut SplitMix64,
    ) -> Result<MatrixTuple, DomainError> {
        loop {
            let dir = rng.tuple(self.arity(), n);
            let Some(r_star) = self.ray_exit_scale(&dir)? else {
                // Unbounded along this direction; pick a modest scale.
                let candidate = dir.scale(Complex64::new(rng.uniform_in(0.05, 2.0), 0.0));
                if self.is_member(&candidate)? {
                    return Ok(candidate);
                }
                continue;
            };
            if r_star <= 0.0 {
                continue;
            }
            let r = r_star * rng.uniform_in(0.05, 0.95);
            let candidate = dir.scale(Complex64::new(r, 0.0));
            if self.is_member(&candidate)? {
                return Ok(candidate);
            }
        }
    }

    /// Largest r with r·dir still inside, by doubling then bisection on the
    /// spectral-gap sign; `None` if the ray never exits (unbounded domain).
    pub fn ray_exit_scale(&self, dir: &MatrixTuple) -> Result<Option<f64>, DomainError> {
        let gap_at = |r: f64| -> Result<f64, DomainError> {
            match self.boundary_distance(&dir.scale(Complex64::new(r, 0.0))) {
                Ok(g) => Ok(g),
                Err(DomainError::Eval(EvalError::SingularInverse { .. })) => Ok(f64::NEG_INFINITY),
                Err(e) => Err(e),
            }
        };
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut exited = false;
        for _ in 0..60 {
            if gap_at(hi)? <= 0.0 {
                exited = true;
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        if !exited {
            return Ok(None);
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if gap_at(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(lo))
    }
}

/// The (g+1)×(g+1) pencil whose LMI domain equals N_ε.
///
/// The variables sit in the last row scaled by 1/ε; the Schur complement of
/// the LMI then reads I − ε⁻²·Σ X_jX_j* ≻ 0, which is exactly N_ε. (With
/// the variables in the last column the complement comes out as Σ X_j*X_j,
/// a different set once g ≥ 2.)
pub fn eps_neighborhood_pencil(g: usize, eps: f64) -> TrulyLinearPencil {
    assert!(g >= 1 && eps > 0.0, "need g ≥ 1 and ε > 0");
    let d = g + 1;
    let coefficients = (0..g)
        .map(|j| {
            let mut a = CMatrix::zeros(d, d);
            a[(g, j)] = Complex64::new(1.0 / eps, 0.0);
            a
        })
        .collect();
    TrulyLinearPencil::new(coefficients).expect("square coefficients of one size")
}

/// The univariate 2×2 pencil with A = `[[1,1],[0,0]]`; its LMI domain is the
/// disk ‖X − 1‖ < √2.
pub fn disk_pencil() -> TrulyLinearPencil {
    TrulyLinearPencil::new(vec![CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]])])
        .expect("one 2×2 coefficient")
}

/// Result of checking the boundedness certificate C²·I − Σ X_jX_j* ≻ 0 on a
/// list of sample tuples. Sampling evidence only, not a proof.
#[derive(Debug, Clone, Serialize)]
pub struct BoundednessReport {
    pub c: f64,
    pub samples: Vec<BoundednessSample>,
    /// True when every in-domain sample passed the certificate.
    pub all_members_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundednessSample {
    pub index: usize,
    pub in_domain: bool,
    pub certificate_gap: f64,
    pub passes: bool,
}

/// Check C²·I − Σ X_jX_j* ≻ 0 for each sample that lies in the domain.
pub fn boundedness_certificate(
    dom: &NCDomain,
    c: f64,
    samples: &[MatrixTuple],
) -> Result<BoundednessReport, DomainError> {
    assert!(c > 0.0, "need C > 0");
    let ball = NCDomain::eps_neighborhood(dom.arity(), c);
    let mut out = Vec::with_capacity(samples.len());
    let mut all_pass = true;
    for (index, x) in samples.iter().enumerate() {
        let in_domain = dom.is_member(x)?;
        let gap = ball.boundary_distance(x)?;
        let passes = gap > 0.0;
        if in_domain && !passes {
            all_pass = false;
        }
        out.push(BoundednessSample {
            index,
            in_domain,
            certificate_gap: gap,
            passes,
        });
    }
    Ok(BoundednessReport {
        c,
        samples: out,
        all_members_pass: all_pass,
    })
}

/// Tagged JSON form: `{"kind":"eps"|"pencil"|"poly", ...}` with the pencil
/// inlined and polynomial domains carried as an expression string.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum DomainJson {
    #[serde(rename = "eps")]
    Eps { g: usize, eps: f64 },
    #[serde(rename = "pencil")]
    Pencil {
        d: usize,
        g: usize,
        #[serde(rename = "A")]
        a: Vec<CMatrix>,
    },
    #[serde(rename = "poly")]
    Poly { g: usize, q: String },
}

impl NCDomain {
    pub fn to_json(&self) -> serde_json::Value {
        let j = match self {
            NCDomain::EpsNeighborhood { g, eps } => DomainJson::Eps { g: *g, eps: *eps },
            NCDomain::Pencil(p) => DomainJson::Pencil {
                d: p.d(),
                g: p.g(),
                a: p.coefficients().to_vec(),
            },
            NCDomain::Polynomial { g, q } => DomainJson::Poly {
                g: *g,
                q: q.to_string(),
            },
        };
        serde_json::to_value(j).expect("domain serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, DomainError> {
        let j: DomainJson = serde_json::from_value(value.clone()).map_err(|e| {
            DomainError::Parse(ParseError {
                pos: 0,
                message: format!("invalid domain JSON: {e}"),
            })
        })?;
        match j {
            DomainJson::Eps { g, eps } => {
                if g == 0 || eps <= 0.0 {
                    return Err(DomainError::Parse(ParseError {
                        pos: 0,
                        message: "eps domain requires g ≥ 1 and eps > 0".into(),
                    }));
                }
                Ok(NCDomain::eps_neighborhood(g, eps))
            }
            DomainJson::Pencil { a, .. } => Ok(NCDomain::Pencil(TrulyLinearPencil::new(a)?)),
            DomainJson::Poly { g, q } => {
                let expr = parse(&q, g)?;
                NCDomain::polynomial(g, expr)
            }
        }
    }
}
