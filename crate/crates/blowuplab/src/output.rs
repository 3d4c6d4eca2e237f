//! Artifact assembly and the run manifest.
//!
//! Artifacts are built in memory first so that a run can be repeated and
//! compared byte for byte before anything touches the disk.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const MANIFEST_SCHEMA: &str = include_str!("../schemas/manifest.schema.json");
pub const MANIFEST_VERSION: u32 = 1;

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        let mut buf = ryu::Buffer::new();
        buf.format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Named output files of one run, kept in name order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifacts {
    files: BTreeMap<String, Vec<u8>>,
}

impl Artifacts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("artifact serializes");
        bytes.push(b'\n');
        self.files.insert(name.to_string(), bytes);
    }

    pub fn add_csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        self.files.insert(name.to_string(), w.into_inner().expect("in-memory flush"));
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.get(name).map(Vec::as_slice)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Names whose contents differ between the two sets, including files
    /// present in only one of them.
    pub fn differences(&self, other: &Artifacts) -> Vec<String> {
        let mut names: Vec<&String> = self.files.keys().chain(other.files.keys()).collect();
        names.sort();
        names.dedup();
        names.into_iter().filter(|n| self.files.get(*n) != other.files.get(*n)).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

/// Manifest JSON: the resolved configuration, the outcome and the artifact list.
pub fn manifest(config: &RunConfig, artifacts: &Artifacts, exit_code: i32, error: Option<&ErrorInfo>) -> Value {
    let status = match (exit_code, error) {
        (0, _) => "ok",
        (2, None) => "verification_failed",
        _ => "error",
    };
    let files: Vec<Value> = artifacts
        .files
        .iter()
        .map(|(name, bytes)| json!({ "name": name, "bytes": bytes.len() }))
        .collect();
    json!({
        "manifest_version": MANIFEST_VERSION,
        "tool": "blowuplab",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": config.command.as_str(),
        "status": status,
        "exit_code": exit_code,
        "error": error,
        "config": config,
        "artifacts": files,
    })
}

/// Writes every artifact and then the manifest into `dir`.
pub fn write_dir(dir: &Path, artifacts: &Artifacts, manifest: &Value) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, bytes) in &artifacts.files {
        fs::write(dir.join(name), bytes)?;
    }
    let mut bytes = serde_json::to_vec_pretty(manifest).map_err(io::Error::other)?;
    bytes.push(b'\n');
    fs::write(dir.join(MANIFEST_NAME), bytes)
}
