//! Diff-stable JSON serialization for probe and pipeline reports.
//!
//! Reports are ordinary `serde_json::Value` trees; this module prints them
//! with every float at 17 significant digits and object keys in sorted
//! order, so identical runs produce byte-identical output.

use serde_json::Value;

/// Render a value as JSON text with floats at 17 significant digits.
pub fn to_json_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

/// Pretty variant with two-space indentation, same number formatting.
pub fn to_json_string_pretty(value: &Value) -> String {
    let mut out = String::new();
    write_value_indented(value, &mut out, 0);
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&escape(s)),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            // serde_json's default map is ordered by key, which keeps this
            // deterministic without extra sorting.
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&escape(k));
                out.push(':');
                write_value(v, out);
            }
            out.push('}');
        }
    }
}

fn write_value_indented(value: &Value, out: &mut String, level: usize) {
    match value {
        Value::Array(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                indent(out, level + 1);
                write_value_indented(item, out, level + 1);
            }
            out.push('\n');
            indent(out, level);
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                indent(out, level + 1);
                out.push_str(&escape(k));
                out.push_str(": ");
                write_value_indented(v, out, level + 1);
            }
            out.push('\n');
            indent(out, level);
            out.push('}');
        }
        other => write_value(other, out),
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn format_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        return i.to_string();
    }
    if let Some(u) = n.as_u64() {
        return u.to_string();
    }
    let x = n.as_f64().unwrap_or(0.0);
    format_f64(x)
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        // JSON has no non-finite numbers; reports never produce them, but a
        // parse-safe fallback beats a panic.
        return "null".to_string();
    }
    format!("{:.16e}", x)
}

/// FNV-1a 64-bit hash of a byte string, as fixed-width hex.
///
/// Used to fingerprint report inputs; stable across platforms.
pub fn fnv1a64_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    format!("{hash:016x}")
}

fn escape(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_17_significant_digits() {
        let v = json!({"x": 0.1});
        assert_eq!(to_json_string(&v), "{\"x\":1.0000000000000001e-1}");
    }

    #[test]
    fn integers_stay_integers() {
        let v = json!({"n": 42, "m": -3});
        assert_eq!(to_json_string(&v), "{\"m\":-3,\"n\":42}");
    }

    #[test]
    fn formatted_floats_round_trip() {
        for &x in &[1.0, 0.1, 1e-17, 2.0f64.sqrt(), -1.00033368, 0.0114903324] {
            let s = format_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn deterministic_output() {
        let v = json!({"b": [1.5, 2.5], "a": {"k": true}});
        assert_eq!(to_json_string(&v), to_json_string(&v));
    }

    #[test]
    fn fnv_hash_reference() {
        // FNV-1a of the empty string is the offset basis.
        assert_eq!(fnv1a64_hex(b""), "cbf29ce484222325");
    }

    fn escape_is_json(s: &str) -> bool {
        serde_json::from_str::<String>(&escape(s)).is_ok()
    }

    #[test]
    fn string_escaping() {
        assert!(escape_is_json("plain"));
        assert!(escape_is_json(
            "with \"quotes\" and \\slashes\\ and \n newlines"
        ));
    }
}
