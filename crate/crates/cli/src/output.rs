//! Tables rendered as CSV or JSON, with the provenance header first.

use crate::config::Ctx;
use clap::ValueEnum;
use serde_json::{json, Map, Value};
use zerodist::numeric::fmt_sig;

/// Every float leaves the program with this many significant digits.
pub const SIG_DIGITS: usize = 15;

pub fn fmt_num(x: f64) -> String {
    fmt_sig(x, SIG_DIGITS)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // round first so JSON carries the same digits as CSV
            Cell::Num(x) => fmt_num(*x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    meta: Vec<(String, Cell)>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn key_value() -> Self {
        Self::new(&["key", "value"])
    }

    pub fn kv(&mut self, k: &str, v: Cell) {
        self.row(vec![Cell::text(k), v]);
    }

    pub fn row(&mut self, r: Vec<Cell>) {
        debug_assert_eq!(r.len(), self.columns.len());
        self.rows.push(r);
    }

    pub fn meta(&mut self, k: &str, v: Cell) {
        self.meta.push((k.to_string(), v));
    }

    pub fn render(&self, ctx: &Ctx) -> String {
        match ctx.emit {
            Emit::Csv => self.csv(ctx),
            Emit::Json => self.json(ctx),
        }
    }

    fn csv(&self, ctx: &Ctx) -> String {
        let mut out = ctx.provenance_comments();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {}\n", v.csv()));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self, ctx: &Ctx) -> String {
        let inputs: Vec<Value> = ctx
            .inputs()
            .iter()
            .map(|(p, h)| json!({"path": p, "sha256": h}))
            .collect();
        let provenance = json!({
            "tool": format!("zerodist {}", env!("CARGO_PKG_VERSION")),
            "command": ctx.command_name(),
            "seed": ctx.seed,
            "config": ctx.echo(),
            "inputs": inputs,
        });
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "provenance": provenance,
            "meta": meta,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }
}
