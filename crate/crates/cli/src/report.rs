use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::CliError;

/// A result table: header plus rows of already formatted cells.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Outcome of one subcommand before it is written out.
#[derive(Debug, Default)]
pub struct Outcome {
    pub table: Table,
    pub summary: BTreeMap<String, Value>,
    pub flags: BTreeMap<String, bool>,
}

impl Outcome {
    pub fn with_table(table: Table) -> Self {
        Self { table, ..Default::default() }
    }

    pub fn stat(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn flag(&mut self, key: impl Into<String>, pass: bool) {
        self.flags.insert(key.into(), pass);
    }
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub experiment: &'a str,
    pub timestamp: &'a str,
    pub seed: u64,
    pub config: &'a ExperimentConfig,
    pub csv: PathBuf,
    pub rows: usize,
    pub summary: &'a BTreeMap<String, Value>,
    pub flags: &'a BTreeMap<String, bool>,
    pub wall_clock_seconds: f64,
}

/// Formats a float with the shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Writes `<out>/<experiment>-<timestamp>.csv` and `.json`; returns the JSON path.
pub fn emit(
    experiment: &str,
    config: &ExperimentConfig,
    outcome: &Outcome,
    timestamp: &str,
    wall_clock_seconds: f64,
) -> Result<PathBuf, CliError> {
    let dir: &Path = &config.out;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let stem = format!("{experiment}-{timestamp}");
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));

    let io = |e: &dyn std::fmt::Display| CliError::Io(format!("cannot write {}: {e}", csv_path.display()));
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io(&e))?;
    w.write_record(&outcome.table.header).map_err(|e| io(&e))?;
    for row in &outcome.table.rows {
        w.write_record(row).map_err(|e| io(&e))?;
    }
    w.flush().map_err(|e| io(&e))?;

    let report = Report {
        experiment,
        timestamp,
        seed: config.seed,
        config,
        csv: csv_path.clone(),
        rows: outcome.table.rows.len(),
        summary: &outcome.summary,
        flags: &outcome.flags,
        wall_clock_seconds,
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(&json_path, text + "\n")
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", json_path.display())))?;
    Ok(json_path)
}
