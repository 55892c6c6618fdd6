//! CSV tables and JSON metadata written next to each other.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Experiment, RunConfig};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as i64)
    }
}

/// Column-named rows; reals are written with 17 significant digits.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Num(x) => format!("{x:.16e}"),
                    Cell::Text(s) if s.contains([',', '"']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

/// Where a table came from.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub experiment: Experiment,
    pub name: String,
    pub config_hash: String,
    pub method: String,
    pub operator_kind: String,
    pub operator_order: usize,
    pub n: usize,
    pub version: &'static str,
    pub config: RunConfig,
}

impl Provenance {
    pub fn new(experiment: Experiment, cfg: &RunConfig) -> Self {
        Self {
            experiment,
            name: cfg.name.clone(),
            config_hash: cfg.hash(),
            method: cfg.method.clone(),
            operator_kind: cfg.operator.kind.to_string(),
            operator_order: cfg.operator.order,
            n: cfg.grid.n,
            version: env!("CARGO_PKG_VERSION"),
            config: cfg.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Meta<'a, S: Serialize> {
    provenance: &'a Provenance,
    columns: &'a [String],
    rows: usize,
    summary: &'a S,
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.meta.json`.
pub fn write_artifacts<S: Serialize>(
    dir: &Path,
    name: &str,
    table: &Table,
    provenance: &Provenance,
    summary: &S,
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{name}.csv"));
    let meta = dir.join(format!("{name}.meta.json"));
    table.write_csv(std::io::BufWriter::new(fs::File::create(&csv)?))?;
    let m = Meta {
        provenance,
        columns: &table.columns,
        rows: table.rows.len(),
        summary,
    };
    fs::write(&meta, serde_json::to_string_pretty(&m)?)?;
    Ok((csv, meta))
}
