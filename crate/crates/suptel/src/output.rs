use std::io::{self, Write};

use serde_json::{json, Map, Value};
use suptel_core::rational::{self, Rational};
use suptel_core::IntegerSubset;

use crate::cli::Format;

pub const DECIMAL_DIGITS: usize = 12;

/// Result of one subcommand, renderable as an aligned table, JSON or CSV.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json_rows: Vec<Value>,
    /// Extra JSON fields next to `rows`.
    pub body: Map<String, Value>,
    /// `key: value` lines printed under the table.
    pub summary: Vec<(String, String)>,
    pub verdict: Option<bool>,
}

impl Report {
    pub fn new(command: &'static str, parameters: Value) -> Self {
        Report {
            command,
            parameters,
            seed: None,
            columns: Vec::new(),
            rows: Vec::new(),
            json_rows: Vec::new(),
            body: Map::new(),
            summary: Vec::new(),
            verdict: None,
        }
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.columns = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn row(&mut self, cells: Vec<String>, json: Value) {
        self.rows.push(cells);
        self.json_rows.push(json);
    }

    pub fn summary(&mut self, key: &str, value: impl Into<String>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn field(&mut self, key: &str, value: Value) {
        self.body.insert(key.to_string(), value);
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Table => self.render_table(out),
            Format::Csv => self.render_csv(out),
            Format::Json => {
                let mut root = Map::new();
                root.insert("command".into(), json!(self.command));
                root.insert(
                    "provenance".into(),
                    json!({
                        "version": env!("CARGO_PKG_VERSION"),
                        "seed": self.seed,
                        "parameters": self.parameters,
                    }),
                );
                for (k, v) in &self.body {
                    root.insert(k.clone(), v.clone());
                }
                root.insert("rows".into(), Value::Array(self.json_rows.clone()));
                if let Some(pass) = self.verdict {
                    root.insert("verdict".into(), json!(verdict_word(pass)));
                }
                let text = serde_json::to_string_pretty(&Value::Object(root)).map_err(io::Error::other)?;
                writeln!(out, "{text}")
            }
        }
    }

    fn render_table(&self, out: &mut dyn Write) -> io::Result<()> {
        if !self.columns.is_empty() {
            let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
            for row in &self.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&self.columns))?;
            for row in &self.rows {
                writeln!(out, "{}", line(row))?;
            }
        }
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}")?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "{k}: {v}")?;
        }
        if let Some(pass) = self.verdict {
            writeln!(out, "verdict: {}", verdict_word(pass))?;
        }
        Ok(())
    }

    fn render_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns).map_err(io::Error::other)?;
        for row in &self.rows {
            writer.write_record(row).map_err(io::Error::other)?;
        }
        writer.flush()
    }
}

pub fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn exact(r: &Rational) -> String {
    rational::to_string(r)
}

pub fn decimal(r: &Rational) -> String {
    rational::to_decimal(r, DECIMAL_DIGITS)
}

/// An exact value as a JSON string, with a decimal rendering when asked.
pub fn exact_json(r: &Rational, approx: bool) -> Value {
    if approx {
        json!({ "exact": exact(r), "decimal": decimal(r) })
    } else {
        json!(exact(r))
    }
}

/// A binary64 value with the context that bounds its accuracy.
pub fn float_json(value: f64, context: &str) -> Value {
    json!({ "value": finite_or_string(value), "context": context })
}

/// A Monte Carlo estimate with its standard error.
pub fn estimate_json(estimate: f64, stderr: f64) -> Value {
    json!({
        "estimate": finite_or_string(estimate),
        "stderr": finite_or_string(stderr),
        "context": "Monte Carlo mean; stderr = sample sd / sqrt(samples)",
    })
}

fn finite_or_string(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

pub fn subset_json(s: &IntegerSubset) -> Value {
    let intervals: Vec<Value> = s.intervals().iter().map(|iv| json!([iv.start(), iv.end()])).collect();
    json!({ "intervals": intervals })
}

pub fn float_cell(v: f64) -> String {
    format!("{v:.12e}")
}
