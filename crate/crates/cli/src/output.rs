use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::Settings;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            // 17 significant digits round-trip every double
            Cell::Num(v) => write!(out, "{v:.16e}"),
            Cell::Int(v) => write!(out, "{v}"),
            Cell::Text(s) => write!(out, "{s}"),
        }
        .expect("writing to a String");
    }
}

/// Rectangular table with a mandatory `provenance` column.
#[derive(Debug, Clone)]
pub struct ScanTable {
    columns: Vec<&'static str>,
    provenance_col: usize,
    rows: Vec<Vec<Cell>>,
}

impl ScanTable {
    pub fn new(columns: &[&'static str]) -> Self {
        let provenance_col = columns
            .iter()
            .position(|&c| c == "provenance")
            .expect("every scan table carries a provenance column");
        Self {
            columns: columns.to_vec(),
            provenance_col,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "ragged row");
        assert!(
            matches!(&row[self.provenance_col], Cell::Text(s) if !s.is_empty()),
            "empty provenance"
        );
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Vec<Cell>>) {
        for row in rows {
            self.push(row);
        }
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn to_csv(&self, manifest: &str) -> String {
        let mut out = format!("# manifest: {manifest}\n{}\n", self.columns.join(","));
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub parameters: &'a Settings,
    pub metadata: &'a BTreeMap<String, Value>,
    pub cache: CacheStats,
    pub wall_time_seconds: f64,
    pub files: Vec<String>,
}

/// Writes `<command>.csv` and `<command>.manifest.json` into `dir`, returning
/// the file names in the order written.
pub fn write_run(dir: &Path, table: &ScanTable, manifest: &mut RunManifest) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir)?;
    let csv_name = format!("{}.csv", manifest.command);
    let manifest_name = format!("{}.manifest.json", manifest.command);
    manifest.files = vec![csv_name.clone(), manifest_name.clone()];
    fs::write(dir.join(&csv_name), table.to_csv(&manifest_name))?;
    let json = serde_json::to_string_pretty(manifest).map_err(|e| CliError::Usage(e.to_string()))?;
    fs::write(dir.join(&manifest_name), json + "\n")?;
    Ok(manifest.files.clone())
}
