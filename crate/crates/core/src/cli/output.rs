//! Column frames rendered as CSV or JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::numerics::Ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    /// Rendered as a decimal at the output precision.
    Exact(Ratio),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self, precision: usize) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Exact(r) => r.to_decimal(precision),
            Cell::Float(x) if x.is_finite() => format!("{x:.precision$}"),
            Cell::Float(x) => x.to_string().to_lowercase(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Exact(r) => json!(r.rounded_f64(precision)),
            Cell::Float(x) if x.is_finite() => {
                json!(format!("{x:.precision$}").parse::<f64>().expect("formatted float"))
            }
            Cell::Float(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<Ratio> for Cell {
    fn from(r: Ratio) -> Self {
        Cell::Exact(r)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// A labelled table. JSON output is `{"label", <meta>..., "rows": [{..}]}`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub label: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
}

impl Frame {
    pub fn new(label: impl Into<String>, columns: &[&str]) -> Self {
        Frame {
            label: label.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn meta(mut self, key: &str, value: Value) -> Self {
        self.meta.insert(key.to_string(), value);
        self
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv(precision)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        let mut obj = Map::new();
        obj.insert("label".into(), json!(self.label));
        obj.extend(self.meta.clone());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> =
                    self.columns.iter().cloned().zip(row.iter().map(|c| c.json(precision))).collect();
                Value::Object(m)
            })
            .collect();
        obj.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("frames serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => self.to_csv(precision),
            Format::Json => self.to_json(precision),
        }
    }
}
