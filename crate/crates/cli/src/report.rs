//! Deterministic run reports: stable field order, no timestamps, a
//! machine-readable mirror behind `--json`.

use serde_json::{json, Map, Value};

pub struct Report {
    pub command: String,
    pub lines: Vec<String>,
    pub payload: Map<String, Value>,
    pub discrepancies: Vec<String>,
    pub exit: i32,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            lines: Vec::new(),
            payload: Map::new(),
            discrepancies: Vec::new(),
            exit: 0,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn field(&mut self, key: &str, value: Value) {
        self.payload.insert(key.to_string(), value);
    }

    pub fn discrepancy(&mut self, s: impl Into<String>) {
        self.discrepancies.push(s.into());
    }

    /// Input-level failure: prints and exits 2.
    pub fn input_error(command: &str, msg: impl std::fmt::Display) -> Report {
        let mut r = Report::new(command);
        r.line(format!("error: {msg}"));
        r.field("error", json!(msg.to_string()));
        r.exit = 2;
        r
    }

    pub fn render(&self, json_mode: bool) -> String {
        if json_mode {
            let v = json!({
                "command": self.command,
                "results": Value::Object(self.payload.clone()),
                "discrepancies": self.discrepancies,
                "exit": self.exit,
            });
            serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
        } else {
            let mut out = String::new();
            out.push_str(&format!("command: {}\n", self.command));
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
            if self.discrepancies.is_empty() {
                out.push_str("discrepancies: none\n");
            } else {
                out.push_str(&format!("discrepancies: {}\n", self.discrepancies.len()));
                for d in &self.discrepancies {
                    out.push_str(&format!("  - {d}\n"));
                }
            }
            out.push_str(&format!("exit: {}\n", self.exit));
            out
        }
    }
}
