//! Machine- and human-readable reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Commands that compute rather than test.
    Ok,
}

/// A report value. Numbers are always carried as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Output {
    Text(String),
    List(Vec<String>),
    Map(BTreeMap<String, Output>),
}

impl Output {
    pub fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> Self {
        Self::List(items.into_iter().map(|x| x.to_string()).collect())
    }
}

impl From<String> for Output {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl From<&str> for Output {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input_sha: String,
    pub verdict: Verdict,
    pub witness_index: Option<String>,
    pub witness_value: Option<String>,
    pub outputs: BTreeMap<String, Output>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: impl Into<String>, input: &[u8], verdict: Verdict) -> Self {
        Self {
            command: command.into(),
            input_sha: sha256_hex(input),
            verdict,
            witness_index: None,
            witness_value: None,
            outputs: BTreeMap::new(),
        }
    }

    pub fn with_witness(mut self, index: impl ToString, value: impl ToString) -> Self {
        self.witness_index = Some(index.to_string());
        self.witness_value = Some(value.to_string());
        self
    }

    pub fn output(mut self, key: &str, value: impl Into<Output>) -> Self {
        self.outputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Verdict::Fails => 1,
            Verdict::Holds | Verdict::Ok => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn write_output(
    f: &mut fmt::Formatter<'_>,
    key: &str,
    value: &Output,
    indent: usize,
) -> fmt::Result {
    let pad = "  ".repeat(indent);
    match value {
        Output::Text(s) => writeln!(f, "{pad}{key}: {s}"),
        Output::List(items) => writeln!(f, "{pad}{key}: {}", items.join(", ")),
        Output::Map(map) => {
            writeln!(f, "{pad}{key}:")?;
            map.iter()
                .try_for_each(|(k, v)| write_output(f, k, v, indent + 1))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        match (&self.verdict, &self.witness_index, &self.witness_value) {
            (Verdict::Fails, Some(i), Some(w)) => {
                writeln!(f, "verdict: fails at {i} (witness {w})")?
            }
            (Verdict::Holds, Some(i), _) => writeln!(f, "verdict: holds through {i}")?,
            (Verdict::Holds, ..) => writeln!(f, "verdict: holds")?,
            (Verdict::Fails, ..) => writeln!(f, "verdict: fails")?,
            (Verdict::Ok, ..) => {}
        }
        self.outputs
            .iter()
            .try_for_each(|(k, v)| write_output(f, k, v, 0))
    }
}
