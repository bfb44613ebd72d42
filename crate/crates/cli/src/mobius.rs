//! `mobius`: the proper self-map family f_θ on the disk ‖X−1‖ < √2.

use ncfree::Complex64;
use serde_json::json;

use ncfree::domains::{disk_pencil, NCDomain};
use ncfree::freecalc::{directional_derivative, properness_probe};
use ncfree::freeexpr::mobius;
use ncfree::linalg::MatrixTuple;
use ncfree::rng::SplitMix64;

use crate::io::{inputs_hash, CliError, CommandOutput};

const MEMBERSHIP_SIZES: [usize; 4] = [1, 2, 3, 4];
const PROPERNESS_RAYS: usize = 8;
const PROPERNESS_STEPS: usize = 20;
const TOL_TERMINAL_GAP: f64 = 1e-6;
const TOL_DERIVATIVE: f64 = 1e-10;
const TOL_INVERSE: f64 = 1e-9;

pub fn cmd_mobius(theta: f64, trials: usize, seed: u64) -> Result<CommandOutput, CliError> {
    let f = mobius(theta);
    let dom = NCDomain::pencil(disk_pencil());
    let mut rng = SplitMix64::new(seed);

    // 1. Membership preservation on random members, n ≤ 4.
    let mut membership_failures = 0usize;
    for i in 0..trials {
        let n = MEMBERSHIP_SIZES[i % MEMBERSHIP_SIZES.len()];
        let x = dom.sample_member(n, &mut rng)?;
        let image = f.evaluate_map(&x)?;
        if !dom.is_member(&image)? {
            membership_failures += 1;
        }
    }

    // 2. Properness probe along 8 random rays.
    let rays: Vec<MatrixTuple> = (0..PROPERNESS_RAYS)
        .map(|i| rng.tuple(1, 1 + (i % 2)))
        .collect();
    let properness = properness_probe(&f, &dom, &dom, &rays, PROPERNESS_STEPS)?;
    let ray_errors: Vec<String> = properness
        .rays
        .iter()
        .filter_map(|r| r.error.clone())
        .collect();
    let properness_ok = ray_errors.is_empty() && properness.max_terminal_gap <= TOL_TERMINAL_GAP;

    // 3. Derivative at 0 equals e^{iθ}.
    let d0 = directional_derivative(
        &f,
        &MatrixTuple::zero(1, 1),
        &MatrixTuple::from_scalars(&[Complex64::new(1.0, 0.0)]),
    )?;
    let derivative = d0[0][(0, 0)];
    let derivative_error = (derivative - Complex64::from_polar(1.0, theta)).norm();

    // 4. Inverse check: f_θ∘f_θ′ = id with θ′ = −θ (composition law
    //    f_θ∘f_φ = f_{θ+φ}).
    let theta_prime = -theta;
    let f_inv = mobius(theta_prime);
    let mut inverse_deviation: f64 = 0.0;
    for i in 0..10.min(trials.max(1)) {
        let n = MEMBERSHIP_SIZES[i % MEMBERSHIP_SIZES.len()];
        let x = dom.sample_member(n, &mut rng)?;
        let round_trip = f.evaluate_map(&f_inv.evaluate_map(&x)?)?;
        inverse_deviation = inverse_deviation.max(round_trip.max_distance(&x));
    }

    let membership_ok = membership_failures == 0;
    let derivative_ok = derivative_error <= TOL_DERIVATIVE;
    let inverse_ok = inverse_deviation <= TOL_INVERSE;
    let ok = membership_ok && properness_ok && derivative_ok && inverse_ok;

    let report = json!({
        "op": "mobius",
        "inputs": {
            "hash": inputs_hash(&[&format!("{theta:?}"), &trials.to_string(), &seed.to_string()]),
            "theta": theta,
            "trials": trials,
            "seed": seed,
        },
        "verdict": if ok { "pass" } else { "fail" },
        "membership": {
            "checked": trials,
            "failures": membership_failures,
            "pass": membership_ok,
        },
        "properness": {
            "rays": PROPERNESS_RAYS,
            "steps": PROPERNESS_STEPS,
            "max_terminal_gap": properness.max_terminal_gap,
            "tolerance": TOL_TERMINAL_GAP,
            "errors": ray_errors,
            "pass": properness_ok,
        },
        "derivative_at_zero": {
            "re": derivative.re,
            "im": derivative.im,
            "error": derivative_error,
            "tolerance": TOL_DERIVATIVE,
            "pass": derivative_ok,
        },
        "inverse": {
            "theta_prime": theta_prime,
            "max_deviation": inverse_deviation,
            "tolerance": TOL_INVERSE,
            "pass": inverse_ok,
        },
    });

    let text = format!(
        "mobius theta={theta}\n\
         membership preservation: {}/{} images inside ({})\n\
         properness: max terminal codomain gap {:.3e} (tol {:.1e}) ({})\n\
         derivative at 0: {:.12}{:+.12}i, error {:.3e} ({})\n\
         inverse f_(-theta): max round-trip deviation {:.3e} ({})\n\
         overall: {}\n",
        trials - membership_failures,
        trials,
        pass_str(membership_ok),
        properness.max_terminal_gap,
        TOL_TERMINAL_GAP,
        pass_str(properness_ok),
        derivative.re,
        derivative.im,
        derivative_error,
        pass_str(derivative_ok),
        inverse_deviation,
        pass_str(inverse_ok),
        if ok { "pass" } else { "FAIL" },
    );
    Ok(CommandOutput { report, text, ok })
}

fn pass_str(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}
