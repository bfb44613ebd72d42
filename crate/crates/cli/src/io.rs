//! Shared command plumbing: input loading, error-to-exit-code mapping.

use std::fmt;
use std::path::Path;

use ncfree::domains::{DomainError, NCDomain};
use ncfree::freeexpr::{parse, EvalError, FreeExpr, FreeMapHandle};
use ncfree::linalg::MatrixTuple;

/// One finished command: its JSON report, human text, and pass/fail flag.
pub struct CommandOutput {
    pub report: serde_json::Value,
    pub text: String,
    pub ok: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Exit 2: expression or input-format parse failure.
    Parse(String),
    /// Exit 3: evaluation failure (singular inverse, arity mismatch, ...).
    Eval(String),
    /// Exit 4: filesystem problems.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Eval(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Eval(m) => write!(f, "evaluation error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Eval(e.to_string())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        match e {
            // Malformed domain definitions are input problems, not
            // evaluation failures.
            DomainError::Parse(_)
            | DomainError::BadPencil
            | DomainError::NonvanishingAtOrigin { .. } => CliError::Parse(e.to_string()),
            other => CliError::Eval(other.to_string()),
        }
    }
}

impl From<ncfree::freecalc::CalcError> for CliError {
    fn from(e: ncfree::freecalc::CalcError) -> Self {
        CliError::Eval(e.to_string())
    }
}

impl From<ncfree::linalg::LinalgError> for CliError {
    fn from(e: ncfree::linalg::LinalgError) -> Self {
        CliError::Eval(e.to_string())
    }
}

impl From<ncfree::elliptic::EllipticError> for CliError {
    fn from(e: ncfree::elliptic::EllipticError) -> Self {
        CliError::Eval(e.to_string())
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn load_tuple(path: &Path) -> Result<MatrixTuple, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Parse(format!(
            "{} is not a valid matrix tuple: {e}",
            path.display()
        ))
    })
}

pub fn load_domain(path: &Path) -> Result<NCDomain, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{} is not valid JSON: {e}", path.display())))?;
    Ok(NCDomain::from_json(&value)?)
}

pub fn parse_expr(src: &str, arity: usize) -> Result<FreeExpr, CliError> {
    parse(src, arity).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn expr_as_map(src: &str, arity: usize) -> Result<FreeMapHandle, CliError> {
    let expr = parse_expr(src, arity)?;
    FreeMapHandle::new(arity, vec![expr]).map_err(|e| CliError::Parse(e.to_string()))
}

/// FNV-1a fingerprint of a command's inputs for the report envelope.
pub fn inputs_hash(parts: &[&str]) -> String {
    ncfree::report::fnv1a64_hex(parts.join("\u{1f}").as_bytes())
}
