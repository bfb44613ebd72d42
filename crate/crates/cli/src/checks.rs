//! `check`: randomized free-map property suites with pinned tolerances.

use ncfree::Complex64;
use serde_json::json;

use ncfree::freecalc::{
    ampliation_check, check_block_formula, directional_derivative, BlockWitness,
};
use ncfree::freeexpr::{random_polynomial_map, random_self_map_fixing_zero};
use ncfree::linalg::CMatrix;
use ncfree::rng::SplitMix64;

use crate::io::{inputs_hash, CliError, CommandOutput};
use crate::CheckSuite;

// Tolerances, relative to per-trial scale.
const TOL_DIRECT_SUM: f64 = 1e-10;
const TOL_BLOCKS: f64 = 1e-10;
const TOL_SIMILARITY: f64 = 1e-9;
const TOL_DERIVATIVE_FD: f64 = 1e-6;
const TOL_SQUARE_EXACT: f64 = 1e-12;
const TOL_AMPLIATION: f64 = 1e-8;

pub fn cmd_check(
    suite: CheckSuite,
    trials: usize,
    seed: u64,
    tol_override: Option<f64>,
) -> Result<CommandOutput, CliError> {
    let mut rng = SplitMix64::new(seed);
    let (name, mut tol, max_dev, mut violations) = match suite {
        CheckSuite::Sums => run_sums(&mut rng, trials)?,
        CheckSuite::Blocks => run_blocks(&mut rng, trials)?,
        CheckSuite::Similarity => run_similarity(&mut rng, trials)?,
        CheckSuite::Derivative => run_derivative(&mut rng, trials)?,
        CheckSuite::Ampliation => run_ampliation(&mut rng, trials)?,
    };
    if let Some(t) = tol_override {
        // Re-judge the worst observed deviation against the override.
        tol = t;
        violations = usize::from(max_dev > t);
    }
    let ok = violations == 0;
    let report = json!({
        "op": "check",
        "inputs": {
            "hash": inputs_hash(&[name, &trials.to_string(), &seed.to_string()]),
            "suite": name,
            "trials": trials,
            "seed": seed,
        },
        "verdict": if ok { "pass" } else { "fail" },
        "max_deviation": max_dev,
        "tolerance": tol,
        "violations": violations,
    });
    Ok(CommandOutput {
        text: format!(
            "check {name}: {} ({} trials, max relative deviation {max_dev:.3e}, tolerance {tol:.1e})\n",
            if ok { "pass" } else { "FAIL" },
            trials
        ),
        report,
        ok,
    })
}

type SuiteResult = (&'static str, f64, f64, usize);

fn run_sums(rng: &mut SplitMix64, trials: usize) -> Result<SuiteResult, CliError> {
    let mut max_dev: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..trials {
        let f = random_polynomial_map(rng, 2, 2, 3, 3);
        let n1 = 1 + rng.below(3);
        let n2 = 1 + rng.below(3);
        let x = rng.tuple(2, n1);
        let y = rng.tuple(2, n2);
        let lhs = f.evaluate_map(&x.direct_sum(&y)?)?;
        let rhs = f.evaluate_map(&x)?.direct_sum(&f.evaluate_map(&y)?)?;
        let scale = lhs.max_frobenius_norm().max(1.0);
        let dev = lhs.max_distance(&rhs) / scale;
        max_dev = max_dev.max(dev);
        if dev > TOL_DIRECT_SUM {
            violations += 1;
        }
    }
    Ok(("sums", TOL_DIRECT_SUM, max_dev, violations))
}

fn run_blocks(rng: &mut SplitMix64, trials: usize) -> Result<SuiteResult, CliError> {
    let mut max_dev: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..trials {
        let f = random_polynomial_map(rng, 2, 2, 3, 3);
        let w = BlockWitness::new(
            rng.tuple(2, 2).scale(Complex64::new(0.5, 0.0)),
            rng.tuple(2, 2).scale(Complex64::new(0.5, 0.0)),
            rng.matrix(2).scale(Complex64::new(0.5, 0.0)),
            Complex64::new(1.0, 0.0),
        )?;
        let report = check_block_formula(&f, &w)?;
        let dev = report.max_deviation / report.scale.max(1.0);
        max_dev = max_dev.max(dev);
        if dev > TOL_BLOCKS {
            violations += 1;
        }
    }
    Ok(("blocks", TOL_BLOCKS, max_dev, violations))
}

fn run_similarity(rng: &mut SplitMix64, trials: usize) -> Result<SuiteResult, CliError> {
    let mut max_dev: f64 = 0.0;
    let mut violations = 0;
    let mut done = 0;
    while done < trials {
        let f = random_polynomial_map(rng, 2, 1, 3, 3);
        let n = 2 + rng.below(2);
        let x = rng.tuple(2, n);
        let s = &CMatrix::identity(n) + &rng.matrix(n).scale(Complex64::new(0.3, 0.0));
        let s_inv = match s.inverse() {
            Ok(inv) => inv,
            Err(_) => continue,
        };
        if s.operator_norm() * s_inv.operator_norm() > 10.0 {
            continue;
        }
        let lhs = f.evaluate_map(&x.similarity_conj(&s, &s_inv))?;
        let fx = f.evaluate_map(&x)?;
        let rhs_mat = &(&s * &fx[0]) * &s_inv;
        let scale = rhs_mat.frobenius_norm().max(1.0);
        let dev = (&lhs[0] - &rhs_mat).frobenius_norm() / scale;
        max_dev = max_dev.max(dev);
        if dev > TOL_SIMILARITY {
            violations += 1;
        }
        done += 1;
    }
    Ok(("similarity", TOL_SIMILARITY, max_dev, violations))
}

fn run_derivative(rng: &mut SplitMix64, trials: usize) -> Result<SuiteResult, CliError> {
    let mut max_dev: f64 = 0.0;
    let mut violations = 0;
    let square = ncfree::freeexpr::parse("x1*x1", 1).expect("literal");
    let square_map =
        ncfree::freeexpr::FreeMapHandle::new(1, vec![square]).expect("single component");
    for _ in 0..trials {
        // Block trick vs central finite differences on random polynomials.
        let f = random_polynomial_map(rng, 2, 2, 4, 3);
        let n = 1 + rng.below(4);
        let x = rng.tuple(2, n);
        let h = rng.tuple(2, n);
        let algebraic = directional_derivative(&f, &x, &h)?;
        let s = 1e-5;
        let plus = f.evaluate_map(&x.add(&h.scale(Complex64::new(s, 0.0))).unwrap())?;
        let minus = f.evaluate_map(&x.sub(&h.scale(Complex64::new(s, 0.0))).unwrap())?;
        let fd = plus
            .sub(&minus)
            .unwrap()
            .scale(Complex64::new(0.5 / s, 0.0));
        let scale = algebraic.max_frobenius_norm().max(1.0);
        let dev = algebraic.max_distance(&fd) / scale;
        max_dev = max_dev.max(dev);
        if dev > TOL_DERIVATIVE_FD {
            violations += 1;
        }

        // Exact symbolic check: f(x) = x² has derivative XH + HX.
        let xs = rng.tuple(1, n);
        let hs = rng.tuple(1, n);
        let got = directional_derivative(&square_map, &xs, &hs)?;
        let expect = &(&xs[0] * &hs[0]) + &(&hs[0] * &xs[0]);
        let sq_scale = expect.frobenius_norm().max(1.0);
        let sq_dev = (&got[0] - &expect).frobenius_norm() / sq_scale;
        if sq_dev > TOL_SQUARE_EXACT {
            violations += 1;
        }
    }
    Ok(("derivative", TOL_DERIVATIVE_FD, max_dev, violations))
}

fn run_ampliation(rng: &mut SplitMix64, trials: usize) -> Result<SuiteResult, CliError> {
    let mut max_dev: f64 = 0.0;
    let mut violations = 0;
    for i in 0..trials {
        let f = random_self_map_fixing_zero(rng, 1, 3, 2);
        let n = 2 + (i % 2);
        let report = ampliation_check(&f, n, TOL_AMPLIATION)?;
        max_dev = max_dev.max(report.max_match_distance);
        if !report.pass {
            violations += 1;
        }
    }
    Ok(("ampliation", TOL_AMPLIATION, max_dev, violations))
}
