//! `eval`, `member`, and `deriv`.

use std::path::Path;

use serde_json::json;

use ncfree::domains::Membership;
use ncfree::freecalc::{derivative_matrix, directional_derivative};
use ncfree::freeexpr::FreeMapHandle;

use crate::io::{
    expr_as_map, inputs_hash, load_domain, load_tuple, parse_expr, CliError, CommandOutput,
};

pub fn cmd_eval(
    src: &str,
    tuple_path: &Path,
    arity: Option<usize>,
) -> Result<CommandOutput, CliError> {
    let x = load_tuple(tuple_path)?;
    let arity = arity.unwrap_or_else(|| x.arity());
    let expr = parse_expr(src, arity)?;
    let value = expr.evaluate(&x)?;

    let report = json!({
        "op": "eval",
        "inputs": {
            "hash": inputs_hash(&[src, &tuple_path.display().to_string()]),
            "expr": src,
            "arity": arity,
        },
        "result": serde_json::to_value(&value).expect("matrix serializes"),
    });
    Ok(CommandOutput {
        text: format!("{value}"),
        report,
        ok: true,
    })
}

pub fn cmd_member(domain_path: &Path, tuple_path: &Path) -> Result<CommandOutput, CliError> {
    let dom = load_domain(domain_path)?;
    let x = load_tuple(tuple_path)?;
    let (verdict, gap) = dom.membership(&x)?;
    let verdict_str = match verdict {
        Membership::Inside => "inside",
        Membership::Boundary => "boundary",
        Membership::Outside => "outside",
    };
    let report = json!({
        "op": "member",
        "inputs": {
            "hash": inputs_hash(&[
                &domain_path.display().to_string(),
                &tuple_path.display().to_string(),
            ]),
        },
        "verdict": verdict_str,
        "gap": gap,
    });
    Ok(CommandOutput {
        text: format!("verdict: {verdict_str}\ngap: {gap:.12e}\n"),
        report,
        ok: true,
    })
}

pub fn cmd_deriv(
    src: &str,
    tuple_path: &Path,
    dir_path: Option<&Path>,
    arity: Option<usize>,
) -> Result<CommandOutput, CliError> {
    let x = load_tuple(tuple_path)?;
    let arity = arity.unwrap_or_else(|| x.arity());
    let f: FreeMapHandle = expr_as_map(src, arity)?;

    match dir_path {
        Some(dir) => {
            let h = load_tuple(dir)?;
            let d = directional_derivative(&f, &x, &h)?;
            let report = json!({
                "op": "deriv",
                "inputs": {
                    "hash": inputs_hash(&[src, &tuple_path.display().to_string(),
                                          &dir.display().to_string()]),
                    "expr": src,
                },
                "directional": serde_json::to_value(&d[0]).expect("matrix serializes"),
            });
            Ok(CommandOutput {
                text: format!("{}", d[0]),
                report,
                ok: true,
            })
        }
        None => {
            let d = derivative_matrix(&f, &x)?;
            let sigma_min = d.smallest_singular_value();
            let report = json!({
                "op": "deriv",
                "inputs": {
                    "hash": inputs_hash(&[src, &tuple_path.display().to_string()]),
                    "expr": src,
                },
                "rows": d.matrix().rows(),
                "cols": d.matrix().cols(),
                "smallest_singular_value": sigma_min,
                "matrix": serde_json::to_value(d.matrix()).expect("matrix serializes"),
            });
            Ok(CommandOutput {
                text: format!(
                    "derivative matrix {}x{}, smallest singular value {sigma_min:.6e}\n",
                    d.matrix().rows(),
                    d.matrix().cols()
                ),
                report,
                ok: true,
            })
        }
    }
}
