//! Run directories: `result.json`, CSV tables, atomic writes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{RunConfig, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
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

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Seventeen significant digits, so every double survives a round trip.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn render(cell: &Cell) -> String {
    match cell {
        Cell::Float(v) => format_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(render).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

/// Everything one experiment produces.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub scalars: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
    pub labels: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    /// Derived seeds actually used.
    pub seeds: Vec<u64>,
    /// Structured data that does not fit a table.
    pub data: BTreeMap<String, serde_json::Value>,
    pub tables: Vec<Table>,
}

impl RunOutput {
    pub fn scalar(&mut self, key: &str, v: f64) {
        self.scalars.insert(key.into(), v);
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        self.flags.insert(key.into(), v);
    }

    pub fn label(&mut self, key: &str, v: impl Into<String>) {
        self.labels.insert(key.into(), v.into());
    }

    pub fn data(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }
}

#[derive(Serialize)]
struct ResultFile<'a> {
    format_version: u32,
    version: &'a str,
    experiment: &'a str,
    config: &'a RunConfig,
    seeds: &'a [u64],
    scalars: BTreeMap<&'a str, Option<f64>>,
    flags: &'a BTreeMap<String, bool>,
    labels: &'a BTreeMap<String, String>,
    warnings: &'a [String],
    data: &'a BTreeMap<String, serde_json::Value>,
    files: Vec<String>,
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Writes the tables and `result.json` into `dir`, returning the paths.
pub fn write_run(dir: &Path, config: &RunConfig, out: &RunOutput) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut files = Vec::new();
    for t in &out.tables {
        let name = format!("{}.csv", t.name);
        let path = dir.join(&name);
        write_atomic(&path, t.to_csv().as_bytes())?;
        files.push(name);
        written.push(path);
    }
    let result = ResultFile {
        format_version: FORMAT_VERSION,
        version: ionspin_core::VERSION,
        experiment: config.experiment.name(),
        config,
        seeds: &out.seeds,
        // JSON has no NaN; non-finite scalars are written as null
        scalars: out.scalars.iter().map(|(k, v)| (k.as_str(), v.is_finite().then_some(*v))).collect(),
        flags: &out.flags,
        labels: &out.labels,
        warnings: &out.warnings,
        data: &out.data,
        files,
    };
    let mut text = serde_json::to_string_pretty(&result).expect("result serializes");
    text.push('\n');
    let path = dir.join("result.json");
    write_atomic(&path, text.as_bytes())?;
    written.push(path);
    Ok(written)
}

/// Condenses every run directory below `root` (one level deep, sorted by
/// name) into one CSV: `run,experiment,seed` plus the union of scalar keys.
pub fn export_summary(root: &Path) -> anyhow::Result<Table> {
    let mut runs: Vec<(String, serde_json::Value)> = Vec::new();
    let mut entries: Vec<PathBuf> = fs::read_dir(root)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("result.json").is_file())
        .collect();
    entries.sort();
    for dir in entries {
        let text = fs::read_to_string(dir.join("result.json"))?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let name = dir.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        runs.push((name, value));
    }
    let mut keys: Vec<String> = runs
        .iter()
        .filter_map(|(_, v)| v.get("scalars").and_then(|s| s.as_object()))
        .flat_map(|m| m.keys().cloned())
        .collect();
    keys.sort();
    keys.dedup();
    let mut header = vec!["run".to_string(), "experiment".into(), "seed".into()];
    header.extend(keys.iter().cloned());
    let mut table = Table { name: "summary".into(), header, rows: Vec::new() };
    for (name, v) in runs {
        let experiment = v.get("experiment").and_then(|e| e.as_str()).unwrap_or_default().to_string();
        let seed = v.pointer("/config/seed").and_then(|s| s.as_u64()).unwrap_or_default();
        let mut row = vec![Cell::Text(name), Cell::Text(experiment), Cell::Text(seed.to_string())];
        for k in &keys {
            let cell = v
                .pointer(&format!("/scalars/{k}"))
                .and_then(|x| x.as_f64())
                .map(Cell::Float)
                .unwrap_or(Cell::Text(String::new()));
            row.push(cell);
        }
        table.rows.push(row);
    }
    Ok(table)
}
