//! Result bundles and their on-disk form: `<cmd>.csv`, `<cmd>.json` and
//! `meta.json` in the output directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value as Json;

use crate::config::{Command, ConfigFile, Override, Value};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    /// Floats carry 17 significant digits so they parse back bit for bit.
    pub fn render(&self) -> String {
        match self {
            Cell::Real(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Real(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Everything a run produces. `params` is the fully resolved parameter set,
/// including values that were derived from others.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultBundle {
    pub command: Command,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
    pub table: Table,
    pub scalars: BTreeMap<String, Json>,
}

impl ResultBundle {
    pub fn new(command: Command, seed: u64, params: BTreeMap<String, Value>) -> Self {
        let table = Table::new(&[]);
        Self { command, seed, params, table, scalars: BTreeMap::new() }
    }

    /// Non-finite floats become null.
    pub fn scalar(&mut self, name: &str, value: impl Into<Json>) {
        self.scalars.insert(name.to_string(), value.into());
    }

    pub fn param(&mut self, name: &str, value: Value) {
        self.params.insert(name.to_string(), value);
    }

    /// Configuration that reproduces this run when fed back via `--config`.
    pub fn echo(&self) -> ConfigFile {
        ConfigFile {
            command: Some(self.command.name().to_string()),
            seed: Some(self.seed),
            params: self
                .params
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::to_value(v).expect("parameters serialize")))
                .collect(),
        }
    }

    pub fn scalars_json(&self) -> Result<Vec<u8>, CliError> {
        let mut out = serde_json::to_vec_pretty(&self.scalars).map_err(|e| CliError::Io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    version: &'static str,
    command: &'static str,
    config: ConfigFile,
    overrides: &'a [Override],
    threads: usize,
    wall_time_seconds: f64,
}

pub struct RunInfo<'a> {
    pub overrides: &'a [Override],
    pub threads: usize,
    pub wall_time_seconds: f64,
}

/// Writes the three artifacts and returns their paths.
pub fn write_bundle(bundle: &ResultBundle, out: &Path, info: &RunInfo) -> Result<[PathBuf; 3], CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
    let name = bundle.command.name();
    let csv_path = out.join(format!("{name}.csv"));
    let json_path = out.join(format!("{name}.json"));
    let meta_path = out.join("meta.json");
    let write = |path: &Path, bytes: &[u8]| {
        fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    };
    write(&csv_path, &bundle.table.to_csv()?)?;
    write(&json_path, &bundle.scalars_json()?)?;
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        command: name,
        config: bundle.echo(),
        overrides: info.overrides,
        threads: info.threads,
        wall_time_seconds: info.wall_time_seconds,
    };
    let mut bytes = serde_json::to_vec_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    write(&meta_path, &bytes)?;
    Ok([csv_path, json_path, meta_path])
}
