use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Outcome of one check. `margin` is oriented so that a nonnegative value
/// means the inequality holds; `pass` is `margin >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, Value>,
}

/// Diagnostics key excluded from canonical output.
pub const RUNTIME_KEY: &str = "runtime_ms";

impl CheckReport {
    /// Report with `margin = lhs - rhs`.
    pub fn new(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::with_margin(name, lhs, rhs, lhs - rhs, tolerance)
    }

    pub fn with_margin(name: &str, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        Self {
            check_name: name.to_string(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn diag(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    /// Tightens the margin with an extra requirement (`extra >= 0` to pass).
    pub fn require(mut self, extra: f64) -> Self {
        if extra < self.margin || extra.is_nan() {
            self.margin = extra;
        }
        self.pass = self.margin >= -self.tolerance;
        self
    }

    /// `pass` agrees with the margin and tolerance.
    pub fn is_consistent(&self) -> bool {
        self.pass == (self.margin >= -self.tolerance)
    }

    /// Stable ordering key: check name, then the serialized parameters.
    pub fn sort_key(&self) -> (String, String) {
        (self.check_name.clone(), serde_json::to_string(&self.params).unwrap_or_default())
    }
}

/// Runs `f` and records its wall time in the report diagnostics.
pub fn timed<F>(f: F) -> Result<CheckReport>
where
    F: FnOnce() -> Result<CheckReport>,
{
    let start = Instant::now();
    let report = f()?;
    Ok(report.diag(RUNTIME_KEY, start.elapsed().as_millis() as u64))
}

/// JSON array with the runtime entries removed, suitable for byte comparison.
pub fn canonical_json(reports: &[CheckReport]) -> Result<String> {
    let stripped: Vec<CheckReport> = reports
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.diagnostics.remove(RUNTIME_KEY);
            r
        })
        .collect();
    Ok(serde_json::to_string_pretty(&stripped)? + "\n")
}

pub fn to_json(reports: &[CheckReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)? + "\n")
}

pub fn from_json(text: &str) -> Result<Vec<CheckReport>> {
    Ok(serde_json::from_str(text)?)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV with one row per report and one column per parameter key.
pub fn to_csv(reports: &[CheckReport]) -> Result<String> {
    let mut keys: Vec<&String> = reports.iter().flat_map(|r| r.params.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["check_name", "pass", "lhs", "rhs", "margin", "tolerance"];
    header.extend(keys.iter().map(|k| k.as_str()));
    w.write_record(&header).map_err(|e| Error::Parse(e.to_string()))?;
    for r in reports {
        let mut row = vec![
            r.check_name.clone(),
            r.pass.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.margin.to_string(),
            r.tolerance.to_string(),
        ];
        row.extend(keys.iter().map(|k| r.params.get(*k).map(cell).unwrap_or_default()));
        w.write_record(&row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_margin() {
        let r = CheckReport::new("x", 1.0, 1.0 + 5e-4, 1e-3);
        assert!(r.pass && r.is_consistent());
        let r = r.require(-2e-3);
        assert!(!r.pass && r.is_consistent());
    }

    #[test]
    fn json_round_trip_and_canonical_form() {
        let r = CheckReport::new("a", 2.0, 1.0, 0.0).param("t", 0.5).diag(RUNTIME_KEY, 12).diag("cutoff", 60);
        let text = to_json(std::slice::from_ref(&r)).unwrap();
        let back = from_json(&text).unwrap();
        assert_eq!(back, vec![r.clone()]);
        let canon = canonical_json(&[r]).unwrap();
        assert!(!canon.contains(RUNTIME_KEY) && canon.contains("cutoff"));
        for key in ["check_name", "params", "lhs", "rhs", "margin", "tolerance", "pass", "diagnostics"] {
            assert!(canon.contains(&format!("\"{key}\"")));
        }
    }

    #[test]
    fn csv_flattens_params() {
        let a = CheckReport::new("a", 1.0, 0.0, 0.0).param("k", 2);
        let b = CheckReport::new("b", 1.0, 0.0, 0.0).param("t", "0.5");
        let text = to_csv(&[a, b]).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first, "check_name,pass,lhs,rhs,margin,tolerance,k,t");
        assert_eq!(text.lines().count(), 3);
    }
}
