use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use super::config::{Format, JobConfig};
use crate::bigarith::{BigComplex, BigReal};
use crate::error::{Error, Result};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub artifact_version: &'static str,
    pub command: String,
    pub precision_bits: u32,
    pub ladder: Vec<usize>,
    pub thresholds: BTreeMap<String, String>,
    /// Rungs run one at a time; the budget is echoed, not needed.
    pub memory_budget_mb: Option<u64>,
}

impl Provenance {
    pub fn new(job: &JobConfig, bits: u32, ladder: Vec<usize>) -> Self {
        Provenance {
            artifact_version: ARTIFACT_VERSION,
            command: job.command.to_string(),
            precision_bits: bits,
            ladder,
            thresholds: BTreeMap::new(),
            memory_budget_mb: job.memory_budget_mb,
        }
    }

    pub fn threshold(mut self, key: &str, value: impl ToString) -> Self {
        self.thresholds.insert(key.to_string(), value.to_string());
        self
    }
}

/// Plot-ready rows for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub provenance: Provenance,
    pub result: Value,
    pub table: Table,
    /// Exit status when the run finished but a check inside it failed.
    pub status: i32,
}

pub fn real(v: &BigReal) -> Value {
    Value::String(v.to_decimal_string())
}

pub fn reals(vs: &[BigReal]) -> Value {
    Value::Array(vs.iter().map(real).collect())
}

pub fn complex(z: &BigComplex) -> Value {
    Value::Array(vec![real(&z.re), real(&z.im)])
}

/// Shortest round-trip decimal for a double.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Replaces every non-integer JSON number by its decimal string.
pub fn decimal_strings(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => Value::String(float(n.as_f64().expect("f64"))),
        Value::Array(items) => Value::Array(items.into_iter().map(decimal_strings).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, decimal_strings(v))).collect()),
        other => other,
    }
}

/// Serializes a report struct with every float as a decimal string.
pub fn to_value<T: Serialize>(value: &T) -> Value {
    decimal_strings(serde_json::to_value(value).expect("reports serialize"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let doc = serde_json::json!({ "provenance": to_value(&report.provenance), "result": report.result });
            Ok(serde_json::to_string_pretty(&doc).expect("json") + "\n")
        }
        Format::Csv => {
            if report.table.columns.is_empty() {
                return Err(Error::Config(format!("{} has no CSV form", report.provenance.command)));
            }
            let p = &report.provenance;
            let mut out = format!(
                "# artifact_version: {}\n# command: {}\n# precision_bits: {}\n# ladder: {}\n",
                p.artifact_version,
                p.command,
                p.precision_bits,
                p.ladder.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
            );
            for (k, v) in &p.thresholds {
                out += &format!("# threshold {k}: {v}\n");
            }
            out += &(report.table.columns.join(",") + "\n");
            for row in &report.table.rows {
                out += &(row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",") + "\n");
            }
            Ok(out)
        }
    }
}

pub fn emit(report: &Report, job: &JobConfig) -> Result<()> {
    let text = render(report, job.format)?;
    match &job.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_become_strings() {
        let v = decimal_strings(serde_json::json!({"c": 0.5, "n": 3, "xs": [1.25, 2]}));
        assert_eq!(v, serde_json::json!({"c": "5e-1", "n": 3, "xs": ["1.25e0", 2]}));
        assert_eq!(float(f64::INFINITY), "inf");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
