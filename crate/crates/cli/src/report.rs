//! Machine-readable results. Every command yields one [`Report`]; `--json` prints it as is.

use std::fmt;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted,
    Conditional,
    Error,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Conditional => "conditional",
            Verdict::Error => "error",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        [Verdict::Verified, Verdict::Refuted, Verdict::Conditional, Verdict::Error].into_iter().find(|v| v.tag() == s)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Refuted => 1,
            Verdict::Error => 2,
            Verdict::Conditional => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub result: Value,
    /// Axioms, constants and seeds the result depends on.
    pub provenance: Map<String, Value>,
    /// Human-readable rendering, not part of the JSON.
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &[String], verdict: Verdict, result: Value) -> Self {
        let mut provenance = Map::new();
        provenance.insert("tool".into(), json!("bielliptic"));
        provenance.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Report { command: command.to_vec(), verdict, result, provenance, lines: Vec::new() }
    }

    pub fn error(command: &[String], message: impl Into<String>) -> Self {
        let message = message.into();
        let mut r = Report::new(command, Verdict::Error, json!({ "message": message }));
        r.lines.push(format!("error: {message}"));
        r
    }

    pub fn with_lines(mut self, lines: Vec<String>) -> Self {
        self.lines = lines;
        self
    }

    pub fn cite(mut self, key: &str, value: Value) -> Self {
        self.provenance.insert(key.into(), value);
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "verdict": self.verdict.tag(),
            "result": self.result,
            "provenance": self.provenance,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("values always serialize")
    }

    /// Inverse of [`Report::to_json`] up to the human-readable lines.
    pub fn from_json(text: &str) -> Result<Report, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let command = v["command"]
            .as_array()
            .ok_or("missing command")?
            .iter()
            .map(|a| a.as_str().map(str::to_string).ok_or("command entries must be strings"))
            .collect::<Result<Vec<_>, _>>()?;
        let verdict = v["verdict"].as_str().and_then(Verdict::from_tag).ok_or("bad verdict")?;
        let provenance = v["provenance"].as_object().ok_or("missing provenance")?.clone();
        Ok(Report { command, verdict, result: v["result"].clone(), provenance, lines: Vec::new() })
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let cmd = vec!["surface".to_string(), "bound".to_string()];
        let r = Report::new(&cmd, Verdict::Conditional, json!({"z": [1, "2/3"], "a": {"b": null}}))
            .cite("seed", json!(7));
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.verdict, Verdict::Conditional);
        assert_eq!(back.exit_code(), 3);
    }

    #[test]
    fn tags() {
        for v in [Verdict::Verified, Verdict::Refuted, Verdict::Conditional, Verdict::Error] {
            assert_eq!(Verdict::from_tag(v.tag()), Some(v));
        }
        assert_eq!(Verdict::from_tag("maybe"), None);
    }
}
