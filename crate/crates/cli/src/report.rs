//! Command reports: a JSON tree with sorted keys, printed either as JSON or
//! as flattened `key: value` lines.

use serde_json::{json, Map, Value};

use curvemf::exactalg::{MPoly, PolyMatrix, Rat};

#[derive(Debug, Default)]
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    checks: Map<String, Value>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), v.into());
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }

    pub fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_string(), Value::Bool(ok));
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    /// All recorded checks hold.
    pub fn checks_pass(&self) -> bool {
        self.checks.values().all(|v| v == &Value::Bool(true))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks,
            "warnings": self.warnings,
        })
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut lines = vec![format!("command: {}", self.command)];
        for (section, map) in [
            ("inputs", &self.inputs),
            ("results", &self.results),
            ("checks", &self.checks),
        ] {
            if map.is_empty() {
                continue;
            }
            lines.push(format!("{section}:"));
            for (k, v) in map {
                flatten(&format!("  {k}"), v, &mut lines);
            }
        }
        for w in &self.warnings {
            lines.push(format!("warning: {w}"));
        }
        lines.join("\n") + "\n"
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("none".to_string()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = a.iter().map(|x| scalar(x).unwrap()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    if let Some(s) = scalar(v) {
        out.push(format!("{prefix}: {s}"));
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => unreachable!(),
    }
}

pub fn poly(p: &MPoly) -> Value {
    Value::String(p.to_string())
}

pub fn rat(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn rats(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat).collect())
}

pub fn matrix(m: &PolyMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(poly).collect()))
            .collect(),
    )
}
