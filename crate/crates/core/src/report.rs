//! Machine-readable run reports and flat CSV views of command outputs.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::explorer::format_float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// Exit codes shared by every subcommand.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: &'static str,
    pub config: BTreeMap<&'static str, Value>,
    pub outputs: Value,
    pub warnings: Vec<String>,
    pub status: Status,
    pub exit_code: i32,
    /// Only present when timing was requested, so reports stay
    /// byte-identical across runs by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, config: BTreeMap<&'static str, Value>) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            config,
            outputs: Value::Null,
            warnings: Vec::new(),
            status: Status::Ok,
            exit_code: EXIT_OK,
            wall_time_s: None,
        }
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.status = Status::Failed;
        self.exit_code = EXIT_FAILURE;
        self.warnings.push(message.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::Number(n) => {
            let text = match (n.as_i64(), n.as_f64()) {
                (Some(i), _) => i.to_string(),
                (None, Some(f)) => format_float(f),
                _ => n.to_string(),
            };
            out.push((prefix.to_string(), text));
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

/// Two-column `key,value` view of a nested output object; nested keys are
/// joined with dots.
pub fn outputs_csv(outputs: &Value) -> Result<String> {
    let mut rows = Vec::new();
    flatten("", outputs, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidParameter(format!("csv output: {e}"));
    w.write_record(["key", "value"]).map_err(err)?;
    for (k, v) in rows {
        w.write_record([k, v]).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// JSON number, or null for NaN and infinities.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flat_csv() {
        let v = json!({"b": {"x": 1.5, "y": [1, 2]}, "a": "text", "n": null});
        let csv = outputs_csv(&v).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "key,value");
        assert_eq!(lines[1], "a,text");
        assert_eq!(lines[2], "b.x,1.5000000000000000e0");
        assert_eq!(lines[3], "b.y.0,1");
        assert_eq!(lines[5], "n,");
    }

    #[test]
    fn report_is_stable_and_timing_optional() {
        let mut r = RunReport::new(
            "bias",
            BTreeMap::from([("z.key", json!(1.0)), ("a.key", json!(2))]),
        );
        r.outputs = json!({"gap_m": 4.76e-10});
        let a = r.to_json();
        assert_eq!(a, r.clone().to_json());
        assert!(!a.contains("wall_time_s"));
        assert!(a.find("a.key").unwrap() < a.find("z.key").unwrap());
        r.wall_time_s = Some(0.5);
        assert!(r.to_json().contains("wall_time_s"));
        r.fail("boom");
        assert_eq!(r.exit_code, EXIT_FAILURE);
        assert_eq!(number(f64::NAN), Value::Null);
    }
}
