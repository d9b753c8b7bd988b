//! JSON-lines curve catalog: one `{"label": ..., "a": [...]}` object per line.
//!
//! `a` holds either the five long Weierstrass coefficients or the short pair `A, B`.
//! Coefficients are JSON integers or strings `"n"` / `"n/d"`.

use std::path::Path;

use num_rational::BigRational;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numeric::parse_rational;
use crate::RationalCurve;

pub const SHIPPED_CATALOG: &str = include_str!("../data/curves.jsonl");

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub label: String,
    /// Coefficients exactly as listed.
    pub a_invariants: Vec<BigRational>,
    /// The short model `y^2 = x^3 + A x + B`.
    pub curve: RationalCurve,
}

impl CatalogEntry {
    pub fn is_long_form(&self) -> bool {
        self.a_invariants.len() == 5
    }
}

fn coefficient(v: &Value, line: usize) -> Result<BigRational> {
    let bad = |what: String| Error::Parse { line, message: what };
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).ok_or_else(|| bad(format!("bad coefficient {n}")))
        }
        Value::Number(n) => Err(bad(format!("coefficient {n} is not an integer; write fractions as \"n/d\""))),
        Value::String(s) => parse_rational(s).ok_or_else(|| bad(format!("bad coefficient {s:?}"))),
        other => Err(bad(format!("coefficient must be an integer or string, got {other}"))),
    }
}

fn parse_line(text: &str, line: usize) -> Result<CatalogEntry> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse { line, message: e.to_string() })?;
    let label = v
        .get("label")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse { line, message: "missing string field `label`".into() })?
        .to_string();
    let raw = v
        .get("a")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse { line, message: format!("{label}: missing array field `a`") })?;
    let a_invariants = raw.iter().map(|c| coefficient(c, line)).collect::<Result<Vec<_>>>()?;
    let curve = match a_invariants.as_slice() {
        [a1, a2, a3, a4, a6] => {
            RationalCurve::from_long_form(&[a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone()])
        }
        [a, b] => RationalCurve::from_short(a.clone(), b.clone()),
        other => {
            return Err(Error::Parse { line, message: format!("{label}: expected 5 or 2 coefficients, got {}", other.len()) })
        }
    }
    .map_err(|_| Error::input(format!("{label} (line {line}) is singular")))?
    .with_label(label.clone());
    Ok(CatalogEntry { label, a_invariants, curve })
}

/// Parses catalog text. Blank lines are skipped; line numbers start at 1.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry = parse_line(line, i + 1)?;
        if out.iter().any(|e| e.label == entry.label) {
            return Err(Error::Parse { line: i + 1, message: format!("duplicate label {}", entry.label) });
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn ingest_catalog(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    parse_catalog(&text)
}

pub fn shipped_catalog() -> Vec<CatalogEntry> {
    parse_catalog(SHIPPED_CATALOG).expect("shipped catalog is valid")
}

/// Looks a label up in the shipped catalog.
pub fn lookup(label: &str) -> Option<RationalCurve> {
    shipped_catalog().into_iter().find(|e| e.label == label).map(|e| e.curve)
}
