use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::config::{Format, RunConfig};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column-major numeric table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Table {
    pub fn push(&mut self, name: &str, values: Vec<f64>) {
        debug_assert!(self.columns.first().is_none_or(|c| c.1.len() == values.len()));
        self.columns.push((name.to_string(), values));
    }

    fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.1.len())
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (name, v) in &self.columns {
            m.insert(name.clone(), Value::from(v.iter().map(|&x| number(x)).collect::<Vec<_>>()));
        }
        Value::Object(m)
    }
}

/// What a command produced: a JSON report and optionally sampled data.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub report: Value,
    pub table: Option<Table>,
}

/// Twelve significant digits, the precision of every emitted number.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

fn header(command: &str, config: &RunConfig) -> Map<String, Value> {
    let mut h = Map::new();
    h.insert("schema_version".into(), json!(SCHEMA_VERSION));
    h.insert("tool".into(), json!(TOOL));
    h.insert("version".into(), json!(VERSION));
    h.insert("command".into(), json!(command));
    let mut c = serde_json::to_value(config).unwrap_or(Value::Null);
    round_value(&mut c);
    h.insert("config".into(), c);
    h
}

impl Document {
    fn json(&self, config: &RunConfig, with_data: bool) -> Value {
        let mut h = header(self.command, config);
        let mut r = self.report.clone();
        round_value(&mut r);
        h.insert("report".into(), r);
        if let (true, Some(t)) = (with_data, &self.table) {
            h.insert("data".into(), t.to_json());
        }
        Value::Object(h)
    }

    fn csv(&self, config: &RunConfig) -> String {
        let mut s = String::new();
        s.push_str(&format!("# {TOOL} {VERSION}\n"));
        s.push_str(&format!("# schema_version: {SCHEMA_VERSION}\n"));
        s.push_str(&format!("# command: {}\n", self.command));
        let meta = self.json(config, false);
        s.push_str(&format!("# config: {}\n", meta["config"]));
        s.push_str(&format!("# report: {}\n", meta["report"]));
        if let Some(t) = &self.table {
            let names: Vec<&str> = t.columns.iter().map(|c| c.0.as_str()).collect();
            s.push_str(&names.join(","));
            s.push('\n');
            for i in 0..t.rows() {
                let row: Vec<String> = t.columns.iter().map(|c| format!("{:.11e}", c.1[i])).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
        }
        s
    }

    /// Write to `config.out` (a directory) or to `stdout`.
    pub fn emit(&self, config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
        let io = |e: std::io::Error| Error::numeric("output", e.to_string());
        match &config.out {
            None => {
                let text = match config.format {
                    Format::Json => pretty(&self.json(config, true)),
                    Format::Csv if self.table.is_some() => self.csv(config),
                    Format::Csv => pretty(&self.json(config, true)),
                };
                stdout.write_all(text.as_bytes()).map_err(io)
            }
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(io)?;
                let csv = config.format == Format::Csv && self.table.is_some();
                write(&dir.join(format!("{}.json", self.command)), &pretty(&self.json(config, !csv)))?;
                if csv {
                    write(&dir.join(format!("{}.csv", self.command)), &self.csv(config))?;
                }
                Ok(())
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::numeric("output", format!("{}: {e}", path.display())))
}

/// JSON body reported on failure.
pub fn error_body(e: &Error, exit_code: i32) -> String {
    pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL,
        "version": VERSION,
        "error": { "kind": e.kind(), "message": e.to_string() },
        "exit_code": exit_code,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(1.234567890123456), 1.23456789012);
        assert!(round12(f64::NAN).is_nan());
    }

    #[test]
    fn csv_has_metadata_header_and_fixed_precision() {
        let mut t = Table::default();
        t.push("x", vec![0.0, 1.0 / 3.0]);
        t.push("y", vec![-2.5, 1e-20]);
        let d = Document {
            command: "demo",
            report: json!({"k": 1.0 / 3.0}),
            table: Some(t),
        };
        let text = d.csv(&RunConfig::default());
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# lame-susy"));
        assert!(lines[4].contains("0.333333333333"));
        assert_eq!(lines[5], "x,y");
        assert_eq!(lines[7], "3.33333333333e-1,1.00000000000e-20");
    }
}
