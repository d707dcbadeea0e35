//! JSON report and CSV table emission. Field-by-field layout is in
//! `docs/schema.md`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use pshosc::defaults::Defaults;
use pshosc::quad::QuadratureSpec;
use serde::{Deserialize, Serialize};

use crate::cli::OutputFormat;

/// Optional JSON config file; flags on the command line win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub function: Option<String>,
    pub region: Option<String>,
    pub quad: Option<String>,
    pub seed: Option<u64>,
    pub output: Option<OutputFormat>,
    pub json_out: Option<PathBuf>,
    pub csv_out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// The fully resolved configuration echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub function: Option<String>,
    pub region: Option<String>,
    pub quad_overrides: Option<String>,
    pub quadrature: QuadratureSpec,
    pub seed: u64,
    pub output: OutputFormat,
    pub json_out: Option<PathBuf>,
    pub csv_out: Option<PathBuf>,
    pub params: BTreeMap<String, String>,
}

/// Header plus rows, written as CSV.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Shortest round-trip form; non-finite values as `inf`, `-inf`, `NaN`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub struct Outcome {
    pub results: serde_json::Value,
    pub pass: bool,
    pub summary: String,
    pub table: Option<Table>,
    /// A sub-check failed for numerical reasons (exit 2).
    pub numerical: bool,
    /// Per-criterion wall times and budgets for `--timings`; never serialized.
    pub timings: Vec<(String, Duration, Option<Duration>)>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    artifact_version: &'a str,
    config: &'a ExperimentConfig,
    defaults: Defaults,
    pass: bool,
    summary: &'a str,
    results: &'a serde_json::Value,
}

pub fn render_json(cfg: &ExperimentConfig, out: &Outcome) -> Result<String> {
    let report = RunReport {
        artifact_version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        defaults: Defaults::default(),
        pass: out.pass,
        summary: &out.summary,
        results: &out.results,
    };
    let mut s = serde_json::to_string_pretty(&report)?;
    s.push('\n');
    Ok(s)
}

/// Plot-ready CSV of the report's table, when it has one.
pub fn emit_plot_data(out: &Outcome, path: &Path) -> Result<()> {
    let table = out.table.as_ref().context("this report has no tabular payload")?;
    fs::write(path, table.to_csv()?).with_context(|| format!("writing {}", path.display()))
}

pub fn emit(cfg: &ExperimentConfig, out: &Outcome, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let want_json = matches!(cfg.output, OutputFormat::Json | OutputFormat::Both);
    let want_csv = matches!(cfg.output, OutputFormat::Csv | OutputFormat::Both);
    if want_json {
        let json = render_json(cfg, out)?;
        match &cfg.json_out {
            Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
            None => stdout.write_all(json.as_bytes())?,
        }
    }
    if want_csv {
        match (&cfg.csv_out, &out.table) {
            (Some(p), Some(_)) => emit_plot_data(out, p)?,
            (None, Some(t)) => stdout.write_all(t.to_csv()?.as_bytes())?,
            (_, None) => writeln!(stderr, "note: `{}` has no tabular payload; no CSV written", cfg.command)?,
        }
    }
    Ok(())
}
