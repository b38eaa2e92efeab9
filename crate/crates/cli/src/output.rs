//! CSV tables and the run manifest.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{hex, ExperimentConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    /// Shortest round-trip decimal for floats, so identical values always
    /// render identically.
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => {
                let a = v.abs();
                if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
                    v.to_string()
                } else {
                    format!("{v:e}")
                }
            }
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem of the CSV.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// RFC 4180 CSV with a header row.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub experiment: Option<String>,
    pub seed: u64,
    pub trials: u64,
    pub config_sha256: String,
    pub config: String,
    pub cli_version: &'static str,
    pub core_version: &'static str,
    pub created_unix: u64,
    pub files: Vec<FileEntry>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes every table as `<name>.csv` plus `manifest.json` into `dir`.
pub fn write_run(
    dir: &Path,
    tables: &[Table],
    cfg: &ExperimentConfig,
    command: &str,
    experiment: Option<&str>,
    trials: u64,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::new();
    let mut written = Vec::new();
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        let bytes = t.to_csv();
        std::fs::write(&path, &bytes).map_err(io_err(&path))?;
        files.push(FileEntry {
            file: format!("{}.csv", t.name),
            rows: t.rows.len(),
            sha256: hex(&Sha256::digest(&bytes)),
        });
        written.push(path);
    }
    let manifest = Manifest {
        command: command.to_string(),
        experiment: experiment.map(str::to_string),
        seed: cfg.seed,
        trials,
        config_sha256: cfg.hash(),
        config: cfg.canonical(),
        cli_version: env!("CARGO_PKG_VERSION"),
        core_version: risd2d_core::VERSION,
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        files,
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&path, json).map_err(io_err(&path))?;
    written.push(path);
    Ok(written)
}
