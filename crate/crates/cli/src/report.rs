//! CSV and JSON reports. Both files carry the same numbers; the CSV prints
//! every value with 17 significant digits so it round-trips exactly.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use shotnoise_core::{Comparison, ExperimentConfig, Model, RunResult, SweepTable};

pub const CSV_HEADER: &str = "power_watts,scheme,model,samples,mean,variance,mean_stderr,\
                              variance_stderr,analytic_mean,analytic_variance";

pub const CSV_FILE: &str = "report.csv";
pub const JSON_FILE: &str = "report.json";

/// One experiment run, flattened the same way as a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub power_watts: f64,
    pub scheme: String,
    pub model: String,
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_stderr: f64,
    pub variance_stderr: f64,
    pub analytic_mean: f64,
    pub analytic_variance: f64,
}

impl RunRow {
    pub fn new(power_watts: f64, scheme: &str, model: Model, r: &RunResult) -> Self {
        RunRow {
            power_watts,
            scheme: scheme.to_string(),
            model: model.name().to_string(),
            samples: r.samples,
            mean: r.empirical_mean,
            variance: r.empirical_variance,
            mean_stderr: r.mean_stderr,
            variance_stderr: r.variance_stderr,
            analytic_mean: r.analytic_mean,
            analytic_variance: r.analytic_variance,
        }
    }

    fn csv_line(&self) -> String {
        format!(
            "{:.16e},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.power_watts,
            self.scheme,
            self.model,
            self.samples,
            self.mean,
            self.variance,
            self.mean_stderr,
            self.variance_stderr,
            self.analytic_mean,
            self.analytic_variance
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub both_models: bool,
    /// Canonical config text; feeding it back reproduces the report.
    pub config_text: String,
    pub config: ExperimentConfig,
    pub runs: Vec<RunRow>,
    pub sweeps: Vec<SweepTable>,
    pub comparisons: Vec<Comparison>,
}

impl ReportDocument {
    pub fn new(command: &str, config: ExperimentConfig, config_text: String) -> Self {
        ReportDocument {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed: config.seed,
            both_models: false,
            config_text,
            config,
            runs: Vec::new(),
            sweeps: Vec::new(),
            comparisons: Vec::new(),
        }
    }

    /// Sorts runs by power, then model.
    pub fn sort_runs(&mut self) {
        self.runs.sort_by(|a, b| {
            a.power_watts
                .total_cmp(&b.power_watts)
                .then_with(|| a.model.cmp(&b.model))
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.runs.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.runs {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> std::io::Result<PathBuf> {
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).map_err(|e| e.error)?;
    Ok(target)
}

/// Writes `report.csv` and `report.json` into `dir`, creating it if needed.
/// Each file is replaced atomically.
pub fn emit_report(doc: &ReportDocument, dir: &Path) -> anyhow::Result<(PathBuf, PathBuf)> {
    use anyhow::Context;
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let csv = write_atomic(dir, CSV_FILE, doc.to_csv().as_bytes())
        .with_context(|| format!("cannot write {}", dir.join(CSV_FILE).display()))?;
    let mut json = doc.to_json().context("cannot serialize report")?;
    json.push('\n');
    let json = write_atomic(dir, JSON_FILE, json.as_bytes())
        .with_context(|| format!("cannot write {}", dir.join(JSON_FILE).display()))?;
    Ok((csv, json))
}
