//! JSON reports: tool and version, field prime, hashed inputs, results, and a
//! map of named boolean checks. Keys keep insertion order so identical runs
//! give identical bytes.

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const TOOL: &str = "tacx";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    command: String,
    prime: u32,
    inputs: Vec<(String, String)>,
    results: Map<String, Value>,
    checks: Map<String, Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: impl Into<String>, prime: u32) -> Self {
        Self {
            command: command.into(),
            prime,
            inputs: Vec::new(),
            results: Map::new(),
            checks: Map::new(),
        }
    }

    pub fn set_prime(&mut self, prime: u32) {
        self.prime = prime;
    }

    pub fn add_input(&mut self, path: impl Into<String>, contents: &[u8]) {
        let path = path.into();
        if !self.inputs.iter().any(|(p, _)| *p == path) {
            self.inputs.push((path, sha256_hex(contents)));
        }
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), v);
    }

    pub fn check(&mut self, name: &str, value: bool) {
        self.checks.insert(name.to_string(), Value::Bool(value));
    }

    pub fn results(&self) -> &Map<String, Value> {
        &self.results
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, bool)> {
        self.checks.iter().map(|(k, v)| (k.as_str(), v.as_bool().unwrap_or(false)))
    }

    /// Every recorded check is true.
    pub fn ok(&self) -> bool {
        self.checks().all(|(_, v)| v)
    }

    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("tool".into(), TOOL.into());
        root.insert("version".into(), VERSION.into());
        root.insert("command".into(), self.command.clone().into());
        root.insert("prime".into(), self.prime.into());
        let inputs = self
            .inputs
            .iter()
            .map(|(p, h)| {
                let mut m = Map::new();
                m.insert("path".into(), p.clone().into());
                m.insert("sha256".into(), h.clone().into());
                Value::Object(m)
            })
            .collect();
        root.insert("inputs".into(), Value::Array(inputs));
        root.insert("results".into(), Value::Object(self.results.clone()));
        root.insert("checks".into(), Value::Object(self.checks.clone()));
        root.insert("ok".into(), self.ok().into());
        Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn write_report(report: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ShortAlgebra;
    use crate::fixtures;

    #[test]
    fn yoshino_fields_for_counterexample() {
        let alg = ShortAlgebra::build(&fixtures::ring("counterex_r.ring").unwrap());
        let y = alg.yoshino_check();
        let mut r = Report::new("ring info", 32003);
        r.result("dim1", y.dim1);
        r.result("dim2", y.dim2);
        r.result("yoshino_b", y.dim_condition);
        r.check("yoshino_b", y.dim_condition);
        let json = r.to_json();
        assert!(json.contains("\"dim1\": 6"));
        assert!(json.contains("\"dim2\": 3"));
        assert!(json.contains("\"yoshino_b\": false"));
        assert!(!r.ok());
    }

    #[test]
    fn key_order_and_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let mut r = Report::new("complex verify", 5);
        r.add_input("a.cx", b"abc");
        r.result("exact_at", serde_json::json!({"0": false}));
        r.result("ezd", true);
        r.check("totally_acyclic", false);
        write_report(&r, &path).unwrap();
        write_report(&r, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, r.to_json());
        assert!(text.contains("\"exact_at\": {\n      \"0\": false\n    }"));
        assert!(text.contains("\"ezd\": true"));
        assert!(text.contains("ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"));
        let keys: Vec<&str> = ["\"tool\"", "\"version\"", "\"command\"", "\"prime\"", "\"inputs\"", "\"results\"", "\"checks\"", "\"ok\""]
            .into_iter()
            .collect();
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}
