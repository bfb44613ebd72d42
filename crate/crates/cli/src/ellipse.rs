//! `ellipse`: the nonexistence witness on the non-commutative ellipse.

use serde_json::json;

use ncfree::elliptic::build_ellipse;

use crate::io::{inputs_hash, CliError, CommandOutput};

pub fn cmd_ellipse() -> Result<CommandOutput, CliError> {
    let model = build_ellipse()?;
    let witness = model.nonexistence_witness()?;
    let ok = witness.all_match();

    let mut criteria_json = Vec::new();
    let mut lines = String::from("ellipse nonexistence witness\n");
    for (name, got, target, tol) in witness.criteria() {
        let pass = (got - target).abs() <= tol;
        lines.push_str(&format!(
            "  {name:<8} = {got:.10}  (target {target} ± {tol:.0e})  {}\n",
            if pass { "pass" } else { "FAIL" }
        ));
        criteria_json.push(json!({
            "name": name,
            "value": got,
            "target": target,
            "tolerance": tol,
            "pass": pass,
        }));
    }
    lines.push_str(&format!(
        "  signed c3/c1 = {:.10}, c5/c1 = {:.10}\n",
        witness.c3_over_c1, witness.c5_over_c1
    ));
    lines.push_str(&format!("  branch: {}\n", witness.branch));
    lines.push_str(&format!(
        "  min_eig {:.7} > 0: b(r0*N) is interior while r0*N is on the boundary;\n  \
         boundary-to-boundary fails, so the proper self-map does not exist.\n",
        witness.min_eig
    ));
    lines.push_str(&format!("overall: {}\n", if ok { "pass" } else { "FAIL" }));

    let mut report = witness.to_json();
    if let serde_json::Value::Object(map) = &mut report {
        map.insert("op".into(), json!("ellipse"));
        map.insert(
            "inputs".into(),
            json!({"hash": inputs_hash(&["ellipse"]), "modulus": model.modulus()}),
        );
        map.insert("criteria".into(), json!(criteria_json));
        map.insert("verdict".into(), json!(if ok { "pass" } else { "fail" }));
    }
    Ok(CommandOutput {
        report,
        text: lines,
        ok,
    })
}
