//! Pass/fail reports rendered as JSON and markdown.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "title": "cz-entangler",
//!   "passed": true,
//!   "checks": [
//!     { "name": "generators", "passed": true, "detail": "…", "witnesses": ["…"] }
//!   ],
//!   "data": { … }
//! }
//! ```
//!
//! `witnesses` is omitted when empty. `data` holds scenario-specific values.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Observables, factors or values that caused a failure.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<String>) -> Self {
        self.witnesses = witnesses;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            passed: false,
            checks: Vec::new(),
            data: Value::Object(Default::default()),
        }
    }

    /// A report passes when it has at least one check and all of them pass.
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn set_data(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report data serializes");
        if let Value::Object(map) = &mut self.data {
            map.insert(key.to_string(), value);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "# {}: {verdict}\n", self.title);
        let _ = writeln!(out, "| check | result | detail |");
        let _ = writeln!(out, "|---|---|---|");
        for c in &self.checks {
            let result = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "| {} | {result} | {} |",
                c.name,
                c.detail.replace('|', "\\|")
            );
        }
        let witnessed: Vec<&Check> = self
            .checks
            .iter()
            .filter(|c| !c.witnesses.is_empty())
            .collect();
        if !witnessed.is_empty() {
            let _ = writeln!(out, "\n## Witnesses");
            for c in witnessed {
                let _ = writeln!(out, "\n### {}\n", c.name);
                for w in &c.witnesses {
                    let _ = writeln!(out, "- `{w}`");
                }
            }
        }
        if self.data.as_object().is_some_and(|m| !m.is_empty()) {
            let _ = writeln!(
                out,
                "\n## Data\n\n```json\n{}\n```",
                serde_json::to_string_pretty(&self.data).expect("serializes")
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_state_tracks_checks() {
        let mut r = Report::new("demo");
        assert!(!r.passed);
        r.push(Check::new("a", true, "ok"));
        assert!(r.passed);
        r.push(Check::new("b", false, "moved").with_witnesses(vec!["IX".into()]));
        assert!(!r.passed);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("demo");
        r.push(Check::new("a", true, "x | y"));
        r.set_data("values", [1.0, 2.0]);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_json().contains("witnesses"));
        let md = r.to_markdown();
        assert!(md.starts_with("# demo: PASS"));
        assert!(md.contains("x \\| y"));
    }
}
