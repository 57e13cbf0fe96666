//! Output assembly: every run emits a reproducibility header (the fully
//! resolved configuration) plus a tabular result, rendered as JSON
//! (schema 1), CSV, or a markdown table.

use std::fmt::Write as _;

use serde_json::{json, Value};

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    MarkdownTable,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown-table" => Ok(Format::MarkdownTable),
            other => Err(format!("unknown format {other} (json, csv, markdown-table)")),
        }
    }
}

/// A finished run: resolved config echo, scalar results, and a table.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub command: String,
    /// Resolved configuration, echoed verbatim into every rendering.
    pub config: Vec<(String, Value)>,
    /// Named scalar results, in emission order.
    pub scalars: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Artifact {
    pub fn new(command: &str) -> Self {
        Artifact {
            command: command.to_string(),
            config: Vec::new(),
            scalars: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.config.push((key.to_string(), value.into()));
        self
    }

    pub fn scalar(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.scalars.push((key.to_string(), value.into()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
            Format::MarkdownTable => self.render_markdown(),
        }
    }

    fn render_json(&self) -> String {
        let config: serde_json::Map<String, Value> =
            self.config.iter().cloned().collect();
        let mut result: serde_json::Map<String, Value> =
            self.scalars.iter().cloned().collect();
        result.insert("columns".into(), json!(self.columns));
        result.insert("rows".into(), json!(self.rows));
        let doc = json!({
            "schema": 1,
            "command": self.command,
            "config": config,
            "result": result,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
        s.push('\n');
        s
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schema=1");
        let _ = writeln!(s, "# command={}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(s, "# config.{k}={}", plain(v));
        }
        for (k, v) in &self.scalars {
            let _ = writeln!(s, "# {k}={}", plain(v));
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    fn render_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "## {} (schema 1)", self.command);
        let _ = writeln!(s);
        for (k, v) in &self.config {
            let _ = writeln!(s, "- config {k}: {}", plain(v));
        }
        for (k, v) in &self.scalars {
            let _ = writeln!(s, "- {k}: {}", plain(v));
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "| {} |", self.columns.join(" | "));
        let _ = writeln!(s, "|{}|", vec!["---"; self.columns.len()].join("|"));
        for row in &self.rows {
            let _ = writeln!(s, "| {} |", row.join(" | "));
        }
        s
    }
}

/// Scalar JSON value without quotes, for the CSV/markdown renderings.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
