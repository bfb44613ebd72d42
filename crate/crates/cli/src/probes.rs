//! `probe-proper` and `probe-injective`.

use std::path::Path;

use ncfree::Complex64;
use serde_json::json;

use ncfree::domains::NCDomain;
use ncfree::freecalc::{injectivity_probe, properness_probe, InjectivityVerdict};
use ncfree::freeexpr::FreeMapHandle;
use ncfree::linalg::{CMatrix, MatrixTuple};
use ncfree::rng::SplitMix64;

use crate::io::{expr_as_map, inputs_hash, load_domain, CliError, CommandOutput};

#[allow(clippy::too_many_arguments)]
pub fn cmd_probe_proper(
    src: &str,
    domain_path: &Path,
    codomain_path: &Path,
    rays: usize,
    steps: usize,
    seed: u64,
    gap_tol: Option<f64>,
    arity: Option<usize>,
) -> Result<CommandOutput, CliError> {
    let dom = load_domain(domain_path)?;
    let codom = load_domain(codomain_path)?;
    let arity = arity.unwrap_or_else(|| dom.arity());
    let f = expr_as_map(src, arity)?;
    let mut rng = SplitMix64::new(seed);
    let ray_tuples: Vec<MatrixTuple> = (0..rays.max(1))
        .map(|i| rng.tuple(arity, 1 + (i % 2)))
        .collect();

    let probe = properness_probe(&f, &dom, &codom, &ray_tuples, steps)?;
    let errors: Vec<String> = probe.rays.iter().filter_map(|r| r.error.clone()).collect();
    let ok = errors.is_empty() && gap_tol.is_none_or(|tol| probe.max_terminal_gap <= tol);

    let mut text = format!("properness probe: {} rays, {} steps\n", rays, steps);
    for ray in &probe.rays {
        match &ray.error {
            Some(e) => text.push_str(&format!("  ray {}: error: {e}\n", ray.ray_index)),
            None => text.push_str(&format!(
                "  ray {}: r* = {:.9}, terminal codomain gap {:.6e}\n",
                ray.ray_index, ray.r_star, ray.terminal_codomain_gap
            )),
        }
    }
    text.push_str(&format!(
        "max terminal gap: {:.6e}{}\n",
        probe.max_terminal_gap,
        gap_tol
            .map(|t| format!(" (tolerance {t:.1e}: {})", if ok { "pass" } else { "FAIL" }))
            .unwrap_or_default()
    ));

    let report = json!({
        "op": "probe-proper",
        "inputs": {
            "hash": inputs_hash(&[src, &rays.to_string(), &steps.to_string(), &seed.to_string()]),
            "expr": src,
            "rays": rays,
            "steps": steps,
            "seed": seed,
        },
        "verdict": if ok { "pass" } else { "fail" },
        "max_terminal_gap": probe.max_terminal_gap,
        "gap_tolerance": gap_tol,
        "samples": serde_json::to_value(&probe.rays).expect("ray reports serialize"),
    });
    Ok(CommandOutput { report, text, ok })
}

pub fn cmd_probe_injective(
    src: &str,
    domain_path: &Path,
    trials: usize,
    seed: u64,
    tol: f64,
    arity: Option<usize>,
) -> Result<CommandOutput, CliError> {
    let dom = load_domain(domain_path)?;
    let arity = arity.unwrap_or_else(|| dom.arity());
    let f = expr_as_map(src, arity)?;
    let mut rng = SplitMix64::new(seed);

    let mut consistent = 0usize;
    let mut counterexamples = 0usize;
    let mut inconclusive = 0usize;
    let mut worst_f_dev: f64 = 0.0;
    for trial in 0..trials {
        let n = 1 + (trial % 2);
        let (x, y, gamma) = generate_probe_inputs(&f, &dom, n, trial, &mut rng)?;
        let report = injectivity_probe(&f, &dom, &x, &y, &gamma, tol)?;
        worst_f_dev = worst_f_dev.max(report.max_f_deviation);
        match report.verdict {
            InjectivityVerdict::ConsistentWithInjectivity => consistent += 1,
            InjectivityVerdict::CounterexampleCandidate => counterexamples += 1,
            InjectivityVerdict::Inconclusive => inconclusive += 1,
        }
    }
    let ok = counterexamples == 0;

    let report = json!({
        "op": "probe-injective",
        "inputs": {
            "hash": inputs_hash(&[src, &trials.to_string(), &seed.to_string()]),
            "expr": src,
            "trials": trials,
            "seed": seed,
            "tolerance": tol,
        },
        "verdict": if ok { "no-counterexample" } else { "counterexample-candidates-found" },
        "consistent": consistent,
        "counterexample_candidates": counterexamples,
        "inconclusive": inconclusive,
        "max_f_deviation_along_sweeps": worst_f_dev,
    });
    let text = format!(
        "injectivity probe: {trials} trials\n  consistent-with-injectivity: {consistent}\n  \
         counterexample-candidates:   {counterexamples}\n  inconclusive:                {inconclusive}\n",
    );
    Ok(CommandOutput { report, text, ok })
}

/// Rotate through four generation strategies: same point with a commutant
/// intertwiner, a genuinely intertwined similarity pair, an antipodal pair
/// (catches even-symmetric collisions like x ↦ x²), and an independent
/// random pair (hypothesis almost surely unmet).
pub fn generate_probe_inputs(
    f: &FreeMapHandle,
    dom: &NCDomain,
    n: usize,
    trial: usize,
    rng: &mut SplitMix64,
) -> Result<(MatrixTuple, MatrixTuple, CMatrix), CliError> {
    let g = f.arity();
    match trial % 4 {
        0 => {
            // x = y; Γ a low-degree polynomial in the components of x, which
            // commutes with the evaluation of any univariate expression.
            let x = dom.sample_member(n, rng)?;
            let mut gamma = CMatrix::identity(n).scale(rng.complex());
            for c in x.components() {
                gamma = &gamma + &c.scale(rng.complex());
                gamma = &gamma + &(c * c).scale(rng.complex());
            }
            if g > 1 {
                // Several variables need a commutant of the whole tuple;
                // scalars are always safe.
                gamma = CMatrix::identity(n).scale(rng.complex());
            }
            Ok((x.clone(), x, gamma))
        }
        1 => {
            // Intertwined pair: y = S⁻¹xS with S close to the identity, so
            // xS = Sy holds by construction; retry until y stays inside.
            for _ in 0..50 {
                let x = dom.sample_member(n, rng)?;
                let s = &CMatrix::identity(n) + &rng.matrix(n).scale(Complex64::new(0.15, 0.0));
                let Ok(s_inv) = s.inverse() else { continue };
                let y = x.similarity_conj(&s_inv, &s);
                if dom.is_member(&y)? {
                    return Ok((x, y, s));
                }
            }
            // Fall back to the trivial witness when the domain is too tight.
            let x = dom.sample_member(n, rng)?;
            Ok((x.clone(), x, CMatrix::identity(n)))
        }
        2 => {
            let x = dom.sample_member(n, rng)?;
            let y = x.scale(Complex64::new(-1.0, 0.0));
            if dom.is_member(&y)? {
                Ok((x, y, CMatrix::identity(n)))
            } else {
                Ok((x.clone(), x, CMatrix::identity(n)))
            }
        }
        _ => {
            let x = dom.sample_member(n, rng)?;
            let y = dom.sample_member(n, rng)?;
            Ok((x, y, rng.matrix(n)))
        }
    }
}
