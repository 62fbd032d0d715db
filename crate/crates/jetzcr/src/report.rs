//! Deterministic verdict reports.
//!
//! Reports are key-sorted JSON objects (or an equivalent plain-text
//! rendering). With `--no-timing` the output is byte-stable for a given
//! input, which is what the golden tests pin.

use serde_json::{json, Map, Value};

use jetzcr_core::expr::DiffFunction;
use jetzcr_core::liealg::MatrixFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Overall outcome of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// All requested verdicts hold (or the command is a pure computation).
    Pass,
    /// At least one verdict is negative.
    Fail,
    /// The input could not be processed.
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// A finished report, ready for rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub fields: Map<String, Value>,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Report {
        Report {
            command: command.to_string(),
            status,
            fields: Map::new(),
            timing_ms: None,
        }
    }

    pub fn field(mut self, key: &str, value: Value) -> Report {
        self.fields.insert(key.to_string(), value);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut root = Map::new();
                root.insert("command".to_string(), json!(self.command));
                root.insert("status".to_string(), json!(self.status.label()));
                for (k, v) in &self.fields {
                    root.insert(k.clone(), v.clone());
                }
                if let Some(ms) = self.timing_ms {
                    root.insert("timing_ms".to_string(), json!(ms as u64));
                }
                let mut out =
                    serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes");
                out.push('\n');
                out
            }
            Format::Text => {
                let mut out = String::new();
                out.push_str(&format!("command: {}\n", self.command));
                out.push_str(&format!("status: {}\n", self.status.label()));
                for (k, v) in &self.fields {
                    render_text_field(&mut out, k, v, 0);
                }
                if let Some(ms) = self.timing_ms {
                    out.push_str(&format!("timing_ms: {ms}\n"));
                }
                out
            }
        }
    }
}

fn render_text_field(out: &mut String, key: &str, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render_text_field(out, k, v, indent + 1);
            }
        }
        Value::Array(items) if items.iter().all(|v| v.is_array() || v.is_object()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, v) in items.iter().enumerate() {
                render_text_field(out, &i.to_string(), v, indent + 1);
            }
        }
        other => {
            out.push_str(&format!("{pad}{key}: {}\n", render_scalar(other)));
        }
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(render_scalar).collect();
            format!("[{}]", inner.join(", "))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A matrix as nested arrays of expression strings.
pub fn matrix_value(m: &MatrixFunction) -> Value {
    let rows: Vec<Value> = (0..m.size())
        .map(|i| {
            let row: Vec<Value> = (0..m.size())
                .map(|j| Value::String(m.entry(i, j).to_string()))
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn function_value(f: &DiffFunction) -> Value {
    Value::String(f.to_string())
}

pub fn bools_value(bs: &[bool]) -> Value {
    Value::Array(bs.iter().map(|&b| Value::Bool(b)).collect())
}
