//! TSV and JSON rendering. Both are deterministic: rows keep their order and
//! floats are printed with a fixed number of decimals.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// One named table; `provenance` says which result the numbers come from.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub provenance: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, provenance: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            provenance,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Format {
    pub mode: Mode,
    /// Decimal places; `None` picks 4 for TSV and 12 for JSON.
    pub precision: Option<usize>,
}

impl Format {
    fn digits(&self) -> usize {
        self.precision.unwrap_or(match self.mode {
            Mode::Tsv => 4,
            Mode::Json => 12,
        })
    }
}

fn tsv_cell(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) if v.is_nan() => "nan".into(),
        Cell::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
        Cell::Float(v) => format!("{v:.digits$}"),
        Cell::Text(s) => s.replace(['\t', '\n'], " "),
        Cell::Bool(b) => b.to_string(),
        Cell::Missing => "-".into(),
    }
}

fn json_cell(c: &Cell, digits: usize) -> Value {
    match c {
        Cell::Int(v) => json!(v),
        Cell::Float(v) if !v.is_finite() => Value::Null,
        Cell::Float(v) => {
            let rounded: f64 = format!("{v:.digits$}").parse().unwrap_or(*v);
            json!(rounded)
        }
        Cell::Text(s) => json!(s),
        Cell::Bool(b) => json!(b),
        Cell::Missing => Value::Null,
    }
}

/// Renders a whole run: TSV tables separated by blank lines, or a single
/// JSON document.
pub fn render(command: &str, tables: &[Table], fmt: Format) -> String {
    let digits = fmt.digits();
    match fmt.mode {
        Mode::Tsv => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&t.columns.join("\t"));
                out.push('\n');
                for r in &t.rows {
                    let cells: Vec<String> = r.iter().map(|c| tsv_cell(c, digits)).collect();
                    out.push_str(&cells.join("\t"));
                    out.push('\n');
                }
            }
            out
        }
        Mode::Json => {
            let tables: Vec<Value> = tables
                .iter()
                .map(|t| {
                    let rows: Vec<Value> = t
                        .rows
                        .iter()
                        .map(|r| {
                            let mut m = Map::new();
                            for (col, c) in t.columns.iter().zip(r) {
                                m.insert((*col).to_string(), json_cell(c, digits));
                            }
                            Value::Object(m)
                        })
                        .collect();
                    json!({
                        "name": t.name,
                        "provenance": t.provenance,
                        "columns": t.columns,
                        "rows": rows,
                    })
                })
                .collect();
            let doc = json!({ "command": command, "tables": tables });
            let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
            s.push('\n');
            s
        }
    }
}
