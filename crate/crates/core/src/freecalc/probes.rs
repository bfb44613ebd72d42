use num_complex::Complex64;
use serde::Serialize;

use super::derivative::{derivative_matrix, BlockWitness};
use super::CalcError;
use crate::domains::NCDomain;
use crate::freeexpr::FreeMapHandle;
use crate::linalg::{CMatrix, MatrixTuple};

/// Probe verdicts are three-valued; the probe never claims a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InjectivityVerdict {
    /// Hypothesis held and XΓ = ΓY followed, as properness predicts.
    ConsistentWithInjectivity,
    /// f(X)Γ = Γf(Y) held but XΓ ≠ ΓY: evidence against properness.
    CounterexampleCandidate,
    /// The intertwining hypothesis f(X)Γ = Γf(Y) was not met.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub verdict: InjectivityVerdict,
    /// ‖f(X)Γ − Γf(Y)‖, the hypothesis residual.
    pub hypothesis_residual: f64,
    /// ‖XΓ − ΓY‖, what the theorem forces to vanish for proper maps.
    pub intertwining_residual: f64,
    pub tolerance: f64,
    /// Largest t with Z(t) still in the domain (0 when the sweep was skipped).
    pub t_max: f64,
    /// Max deviation of f(Z(t)) from f(X)⊕f(Y) along the geometric t-grid.
    pub max_f_deviation: f64,
    /// Grid points where Z(t) fell outside the domain, if any.
    pub outside_t: Vec<f64>,
}

/// One injectivity probe built on the block identity: when f(X)Γ = Γf(Y),
/// sweep Z(t) and confirm f is constant along it, then check whether
/// XΓ = ΓY as properness would force.
pub fn injectivity_probe(
    f: &FreeMapHandle,
    dom: &NCDomain,
    x: &MatrixTuple,
    y: &MatrixTuple,
    gamma: &CMatrix,
    tol: f64,
) -> Result<InjectivityReport, CalcError> {
    let witness = BlockWitness::new(
        x.clone(),
        y.clone(),
        gamma.clone(),
        Complex64::new(0.0, 0.0),
    )?;
    let fx = f.evaluate_map(x)?;
    let fy = f.evaluate_map(y)?;

    let hypothesis_residual = fx
        .iter()
        .zip(fy.iter())
        .map(|(a, b)| (&(a * gamma) - &(gamma * b)).frobenius_norm())
        .fold(0.0, f64::max);
    let intertwining_residual = witness
        .intertwining_defects()
        .iter()
        .map(CMatrix::frobenius_norm)
        .fold(0.0, f64::max);

    if hypothesis_residual > tol {
        return Ok(InjectivityReport {
            verdict: InjectivityVerdict::Inconclusive,
            hypothesis_residual,
            intertwining_residual,
            tolerance: tol,
            t_max: 0.0,
            max_f_deviation: 0.0,
            outside_t: Vec::new(),
        });
    }

    // Largest t ≤ 1 with Z(t) in the domain, by bisection on membership.
    let member_at = |t: f64| -> Result<bool, CalcError> {
        Ok(dom.is_member(&witness.z_tuple_at(Complex64::new(t, 0.0)))?)
    };
    let mut t_max = 0.0f64;
    if member_at(1.0)? {
        t_max = 1.0;
    } else {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if member_at(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        t_max = t_max.max(lo);
    }

    // Block identity: along the sweep, f(Z(t)) must equal f(X)⊕f(Y).
    let block_diag = fx.direct_sum(&fy)?;
    let mut max_f_deviation: f64 = 0.0;
    let mut outside_t = Vec::new();
    if t_max > 0.0 {
        for i in 0..16 {
            let t = t_max * 1e-3f64.powf(i as f64 / 15.0);
            let z = witness.z_tuple_at(Complex64::new(t, 0.0));
            if !dom.is_member(&z)? {
                outside_t.push(t);
                continue;
            }
            let fz = f.evaluate_map(&z)?;
            max_f_deviation = max_f_deviation.max(fz.max_distance(&block_diag));
        }
    }

    let verdict = if intertwining_residual <= tol {
        InjectivityVerdict::ConsistentWithInjectivity
    } else {
        InjectivityVerdict::CounterexampleCandidate
    };
    Ok(InjectivityReport {
        verdict,
        hypothesis_residual,
        intertwining_residual,
        tolerance: tol,
        t_max,
        max_f_deviation,
        outside_t,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PropernessPoint {
    pub r: f64,
    pub domain_gap: f64,
    pub codomain_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropernessRayReport {
    pub ray_index: usize,
    /// Largest scale with r·ray inside the domain.
    pub r_star: f64,
    pub points: Vec<PropernessPoint>,
    /// Codomain gap at the last grid point (r = r_star up to bisection
    /// tolerance). Near 0 for boundary-to-boundary behavior.
    pub terminal_codomain_gap: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropernessReport {
    pub rays: Vec<PropernessRayReport>,
    /// Largest terminal codomain gap over all rays that evaluated cleanly.
    pub max_terminal_gap: f64,
}

/// Walk each ray toward the domain boundary and record how the image
/// approaches (or fails to approach) the codomain boundary.
pub fn properness_probe(
    f: &FreeMapHandle,
    dom: &NCDomain,
    codom: &NCDomain,
    rays: &[MatrixTuple],
    steps: usize,
) -> Result<PropernessReport, CalcError> {
    let steps = steps.max(2);
    let mut reports = Vec::with_capacity(rays.len());
    let mut max_terminal: f64 = 0.0;
    for (ray_index, ray) in rays.iter().enumerate() {
        let report = probe_one_ray(f, dom, codom, ray, ray_index, steps);
        match report {
            Ok(r) => {
                max_terminal = max_terminal.max(r.terminal_codomain_gap.abs());
                reports.push(r);
            }
            Err(CalcError::Eval(e)) => reports.push(PropernessRayReport {
                ray_index,
                r_star: 0.0,
                points: Vec::new(),
                terminal_codomain_gap: f64::NAN,
                error: Some(e.to_string()),
            }),
            Err(other) => return Err(other),
        }
    }
    Ok(PropernessReport {
        rays: reports,
        max_terminal_gap: max_terminal,
    })
}

fn probe_one_ray(
    f: &FreeMapHandle,
    dom: &NCDomain,
    codom: &NCDomain,
    ray: &MatrixTuple,
    ray_index: usize,
    steps: usize,
) -> Result<PropernessRayReport, CalcError> {
    if ray.max_frobenius_norm() == 0.0 {
        return Ok(PropernessRayReport {
            ray_index,
            r_star: 0.0,
            points: Vec::new(),
            terminal_codomain_gap: f64::NAN,
            error: Some("zero ray direction".into()),
        });
    }
    let Some(r_star) = dom.ray_exit_scale(ray)? else {
        return Ok(PropernessRayReport {
            ray_index,
            r_star: f64::INFINITY,
            points: Vec::new(),
            terminal_codomain_gap: f64::NAN,
            error: Some("ray never exits the domain".into()),
        });
    };

    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        // Geometric approach to r_star, ending on it exactly: the bisected
        // r_star is the last scale still verified inside.
        let r = if i + 1 == steps {
            r_star
        } else {
            r_star * (1.0 - 10f64.powf(-1.0 - 7.0 * i as f64 / (steps - 1) as f64))
        };
        let point = ray.scale(Complex64::new(r, 0.0));
        let domain_gap = dom.boundary_distance(&point)?;
        let image = f.evaluate_map(&point)?;
        let codomain_gap = codom.boundary_distance(&image)?;
        points.push(PropernessPoint {
            r,
            domain_gap,
            codomain_gap,
        });
    }
    let terminal = points.last().map(|p| p.codomain_gap).unwrap_or(f64::NAN);
    Ok(PropernessRayReport {
        ray_index,
        r_star,
        points,
        terminal_codomain_gap: terminal,
        error: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AmpliationReport {
    pub n: usize,
    /// Level-1 derivative spectrum as (re, im) pairs.
    pub level1_spectrum: Vec<(f64, f64)>,
    /// Level-n derivative spectrum as (re, im) pairs.
    pub level_n_spectrum: Vec<(f64, f64)>,
    /// Expected multiplicity of each level-1 eigenvalue at level n.
    pub multiplicity: usize,
    /// Worst eigenvalue match distance under greedy pairing.
    pub max_match_distance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Check that f′(0) at level n is I_n ⊗ φ′(0) ⊗ I_n in vec coordinates:
/// its spectrum is the level-1 spectrum with every multiplicity scaled
/// by n².
pub fn ampliation_check(
    f: &FreeMapHandle,
    n: usize,
    tol: f64,
) -> Result<AmpliationReport, CalcError> {
    if f.arity() != f.co_arity() {
        return Err(CalcError::NotSelfMap {
            arity: f.arity(),
            co_arity: f.co_arity(),
        });
    }
    let at_zero = f.evaluate_map(&MatrixTuple::zero(f.arity(), 1))?;
    let norm = at_zero.max_frobenius_norm();
    if norm > 1e-12 {
        return Err(CalcError::DoesNotFixOrigin { norm });
    }

    let d1 = derivative_matrix(f, &MatrixTuple::zero(f.arity(), 1))?;
    let dn = derivative_matrix(f, &MatrixTuple::zero(f.arity(), n))?;
    let spec1 = d1.spectrum()?;
    let spec_n = dn.spectrum()?;

    let multiplicity = n * n;
    let mut remaining: Vec<Complex64> = spec_n.clone();
    let mut max_match: f64 = 0.0;
    let mut pass = remaining.len() == spec1.len() * multiplicity;
    for lambda in &spec1 {
        for _ in 0..multiplicity {
            let Some((best_ix, best_dist)) = remaining
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - lambda).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            else {
                pass = false;
                break;
            };
            if best_dist > tol {
                pass = false;
            }
            max_match = max_match.max(best_dist);
            remaining.swap_remove(best_ix);
        }
    }
    if !remaining.is_empty() {
        pass = false;
    }

    Ok(AmpliationReport {
        n,
        level1_spectrum: spec1.iter().map(|z| (z.re, z.im)).collect(),
        level_n_spectrum: spec_n.iter().map(|z| (z.re, z.im)).collect(),
        multiplicity,
        max_match_distance: max_match,
        tolerance: tol,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CircularityReport {
    /// Max over samples and angles of ‖f(e^{iθ}x) − e^{iθ}f(x)‖/‖f(x)‖.
    pub max_relative_deviation: f64,
    pub evaluated: usize,
    /// (sample index, θ) pairs skipped because the rotation left the domain.
    pub skipped: Vec<(usize, f64)>,
}

/// Homogeneity consequence of linearity on circular domains: for linear f,
/// f(e^{iθ}x) = e^{iθ}f(x) whenever both points are in the domain.
pub fn circular_linearity_check(
    f: &FreeMapHandle,
    dom: &NCDomain,
    thetas: &[f64],
    samples: &[MatrixTuple],
) -> Result<CircularityReport, CalcError> {
    let at_zero = f.evaluate_map(&MatrixTuple::zero(f.arity(), 1))?;
    let norm = at_zero.max_frobenius_norm();
    if norm > 1e-12 {
        return Err(CalcError::DoesNotFixOrigin { norm });
    }

    let mut max_dev: f64 = 0.0;
    let mut evaluated = 0usize;
    let mut skipped = Vec::new();
    for (ix, x) in samples.iter().enumerate() {
        if !dom.is_member(x)? {
            skipped.push((ix, 0.0));
            continue;
        }
        let fx = f.evaluate_map(x)?;
        let fx_norm = fx.max_frobenius_norm();
        for &theta in thetas {
            let phase = Complex64::from_polar(1.0, theta);
            let rotated = x.scale(phase);
            if !dom.is_member(&rotated)? {
                skipped.push((ix, theta));
                continue;
            }
            let lhs = f.evaluate_map(&rotated)?;
            let rhs = fx.scale(phase);
            let dev = lhs.max_distance(&rhs);
            let rel = if fx_norm > 1e-12 { dev / fx_norm } else { dev };
            max_dev = max_dev.max(rel);
            evaluated += 1;
        }
    }
    Ok(CircularityReport {
        max_relative_deviation: max_dev,
        evaluated,
        skipped,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    /// ‖f′(0) − g′(0)‖_F at level 1.
    pub derivative_difference: f64,
    pub same_derivative: bool,
    /// Max pointwise deviation over the samples, when derivatives agree.
    pub max_sample_deviation: Option<f64>,
    pub verdict: String,
}

/// Empirical face of the same-derivative uniqueness theorem: two maps fixing
/// 0 with equal derivative at 0 should agree pointwise.
pub fn uniqueness_check(
    f: &FreeMapHandle,
    g2: &FreeMapHandle,
    samples: &[MatrixTuple],
) -> Result<UniquenessReport, CalcError> {
    for map in [f, g2] {
        let at_zero = map.evaluate_map(&MatrixTuple::zero(map.arity(), 1))?;
        let norm = at_zero.max_frobenius_norm();
        if norm > 1e-12 {
            return Err(CalcError::DoesNotFixOrigin { norm });
        }
    }
    if f.arity() != g2.arity() || f.co_arity() != g2.co_arity() {
        return Err(CalcError::Shape(
            "maps must share arity and co-arity".into(),
        ));
    }
    let df = derivative_matrix(f, &MatrixTuple::zero(f.arity(), 1))?;
    let dg = derivative_matrix(g2, &MatrixTuple::zero(g2.arity(), 1))?;
    let derivative_difference = (df.matrix() - dg.matrix()).frobenius_norm();
    let same = derivative_difference <= 1e-9;
    if !same {
        return Ok(UniquenessReport {
            derivative_difference,
            same_derivative: false,
            max_sample_deviation: None,
            verdict: "distinct maps".into(),
        });
    }
    let mut max_dev: f64 = 0.0;
    for x in samples {
        let dev = f.evaluate_map(x)?.max_distance(&g2.evaluate_map(x)?);
        max_dev = max_dev.max(dev);
    }
    Ok(UniquenessReport {
        derivative_difference,
        same_derivative: true,
        max_sample_deviation: Some(max_dev),
        verdict: "consistent-with-uniqueness".into(),
    })
}
