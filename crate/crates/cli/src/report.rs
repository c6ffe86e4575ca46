use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A pass/fail line attached to every report.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Column names and their meaning, shared by the CSV header and `--schema`.
pub type Schema = &'static [(&'static str, &'static str)];

pub struct Report {
    pub command: &'static str,
    /// Every input parameter, in a fixed order.
    pub params: Vec<(&'static str, String)>,
    pub summary: Vec<(&'static str, String)>,
    pub checks: Vec<Check>,
    pub schema: Schema,
    pub rows: Vec<Vec<String>>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, schema: Schema) -> Self {
        Self {
            command,
            params: Vec::new(),
            summary: Vec::new(),
            checks: Vec::new(),
            schema,
            rows: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl ToString) {
        self.params.push((key, value.to_string()));
    }

    pub fn summarize(&mut self, key: &'static str, value: impl ToString) {
        self.summary.push((key, value.to_string()));
    }

    pub fn check(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# version: {}", hrtlab_core::VERSION)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k}: {v}")?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "# result.{k}: {v}")?;
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            writeln!(out, "# check.{}: {verdict} ({})", c.name, c.detail)?;
        }
        writeln!(out, "# status: {}", if self.passed() { "pass" } else { "FAIL" })?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.schema.iter().map(|(name, _)| *name))?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        json!({
            "command": self.command,
            "version": hrtlab_core::VERSION,
            "parameters": params,
            "status": if self.passed() { "pass" } else { "fail" },
            "checks": checks,
            "result": self.result,
        })
    }
}

pub fn write_schema(schemas: &[(&str, Schema)], out: &mut dyn Write) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["command", "column", "meaning"])?;
    for (cmd, schema) in schemas {
        for (col, meaning) in schema.iter() {
            w.write_record([cmd, col, meaning])?;
        }
    }
    w.flush()
}

/// Shortest round-trip text for a float, empty for a missing value.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
