//! Table and summary output.
//!
//! CSV files start with `#` comment lines carrying the full config and the
//! seed, then a header row. Floats are written with 17 significant digits so
//! that they round-trip exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Writes tables and summaries into one output directory.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: PathBuf,
    pub format: Format,
    config: String,
    seed: u64,
}

impl Sink {
    pub fn new(dir: &Path, format: Format, config: String, seed: u64) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Sink {
            dir: dir.to_path_buf(),
            format,
            config,
            seed,
        })
    }

    fn write(&self, file: String, bytes: Vec<u8>) -> CliResult<PathBuf> {
        let path = self.dir.join(file);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn table(&self, t: &Table) -> CliResult<PathBuf> {
        match self.format {
            Format::Csv => self.write(format!("{}.csv", t.name), self.csv_bytes(t)),
            Format::Json => {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                    .collect();
                let doc = json!({
                    "config": self.config_value(),
                    "seed": self.seed,
                    "columns": t.header,
                    "rows": rows,
                });
                self.write(format!("{}.json", t.name), pretty(&doc))
            }
        }
    }

    pub fn csv_bytes(&self, t: &Table) -> Vec<u8> {
        let mut out = format!("# config: {}\n# seed: {}\n", self.config, self.seed).into_bytes();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        w.write_record(&t.header).expect("in-memory write");
        for row in &t.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
        drop(w);
        out
    }

    /// A JSON document wrapped with the config and seed.
    pub fn summary(&self, name: &str, body: Value) -> CliResult<PathBuf> {
        let doc = json!({
            "config": self.config_value(),
            "seed": self.seed,
            "summary": body,
        });
        self.write(format!("{name}.json"), pretty(&doc))
    }

    fn config_value(&self) -> Value {
        serde_json::from_str(&self.config).unwrap_or(Value::String(self.config.clone()))
    }
}

pub fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("values serialize");
    s.push(b'\n');
    s
}
