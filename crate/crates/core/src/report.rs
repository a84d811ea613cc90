//! Verdicts and machine-readable reports shared by every checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a sufficient-condition checker. There is deliberately no
/// negative variant: failing a sufficient condition proves nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    EffectiveDescent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::EffectiveDescent => "effective_descent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A counterexample attached to a named verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub condition: String,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub budget: u64,
    pub oracle: bool,
}

/// What a CLI command prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub verdicts: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, serde_json::Value>,
    pub witnesses: Vec<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub metadata: Metadata,
}

impl Report {
    pub fn new(command: impl Into<String>, input: impl Into<String>, metadata: Metadata) -> Self {
        Self {
            command: command.into(),
            input: input.into(),
            verdict: None,
            verdicts: BTreeMap::new(),
            values: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            metadata,
        }
    }

    pub fn flag(&mut self, name: &str, value: bool) -> &mut Self {
        self.verdicts.insert(name.to_string(), value);
        self
    }

    pub fn value(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn witness(&mut self, condition: &str, detail: impl Serialize) -> &mut Self {
        let detail = serde_json::to_value(detail).expect("witnesses serialize");
        self.witnesses.push(WitnessRecord { condition: condition.to_string(), detail });
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.input);
        if let Some(v) = self.verdict {
            out += &format!("verdict: {v}\n");
        }
        for (name, value) in &self.verdicts {
            out += &format!("  {name}: {value}\n");
        }
        for (name, value) in &self.values {
            out += &format!("  {name} = {value}\n");
        }
        for w in &self.witnesses {
            out += &format!("  witness [{}]: {}\n", w.condition, w.detail);
        }
        for n in &self.notes {
            out += &format!("  note: {n}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_preserves_verdicts() {
        let mut r = Report::new("fam classify", "m3.json", Metadata { budget: 10, oracle: true });
        r.flag("is_regular_epi", true).flag("is_stable_regular_epi", false).witness("stability", 3);
        r.verdict = Some(Verdict::Inconclusive);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_text().contains("verdict: inconclusive"));
    }
}
