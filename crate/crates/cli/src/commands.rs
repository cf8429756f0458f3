//! The `run`, `sweep` and `compare` subcommands, independent of argument
//! parsing so they can be driven from tests.

use std::fmt::Write as _;

use anyhow::Context;
use shotnoise_core::experiments::default_sweep_powers;
use shotnoise_core::{
    compare_models, power_sweep, run_experiment, ExperimentConfig, Model, SchemeKind,
};

use crate::config::{render_config, ParsedConfig};
use crate::report::{ReportDocument, RunRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep { both_models: bool },
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep { .. } => "sweep",
            Command::Compare => "compare",
        }
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) -> anyhow::Result<()> {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(samples) = self.samples {
            cfg.samples = samples;
        }
        cfg.validate()
            .context("invalid configuration after overrides")?;
        Ok(())
    }
}

/// Runs `command` on a parsed config and collects the report.
pub fn execute(
    command: Command,
    parsed: &ParsedConfig,
    overrides: Overrides,
) -> anyhow::Result<ReportDocument> {
    let mut cfg = parsed.experiment;
    overrides.apply(&mut cfg)?;
    let scheme_name = cfg.scheme.name();
    let mut doc = match command {
        Command::Run => {
            let mut doc = ReportDocument::new(command.name(), cfg, render_config(&cfg, None));
            let result = run_experiment(&cfg)?;
            doc.runs.push(RunRow::new(
                cfg.power_watts,
                scheme_name,
                cfg.model,
                &result,
            ));
            doc
        }
        Command::Sweep { both_models } => {
            let powers = parsed
                .sweep_powers
                .clone()
                .unwrap_or_else(default_sweep_powers);
            let mut doc =
                ReportDocument::new(command.name(), cfg, render_config(&cfg, Some(&powers)));
            doc.both_models = both_models;
            let models: &[Model] = if both_models {
                &Model::ALL
            } else {
                std::slice::from_ref(&cfg.model)
            };
            for &model in models {
                let table = power_sweep(cfg.scheme, model, &powers, &cfg)
                    .with_context(|| format!("{} sweep failed", model.name()))?;
                for row in &table.rows {
                    doc.runs.push(RunRow::new(
                        row.power_watts,
                        scheme_name,
                        model,
                        &row.result,
                    ));
                }
                doc.sweeps.push(table);
            }
            doc
        }
        Command::Compare => {
            let mut doc = ReportDocument::new(command.name(), cfg, render_config(&cfg, None));
            doc.both_models = true;
            let cmp = compare_models(cfg.scheme, &cfg)?;
            doc.runs.push(RunRow::new(
                cfg.power_watts,
                scheme_name,
                Model::ModeFluctuation,
                &cmp.mode,
            ));
            doc.runs.push(RunRow::new(
                cfg.power_watts,
                scheme_name,
                Model::StateReduction,
                &cmp.state,
            ));
            doc.comparisons.push(cmp);
            doc
        }
    };
    doc.sort_runs();
    Ok(doc)
}

/// Human-readable digest of a report for the terminal.
pub fn summary(doc: &ReportDocument) -> String {
    let mut out = String::new();
    for row in &doc.runs {
        let _ = writeln!(
            out,
            "{:>11.4e} W  {:<18} {:<5}  mean {:>12.5e} ± {:.2e}  var {:>12.5e} ± {:.2e}  (analytic {:.5e})",
            row.power_watts,
            row.scheme,
            row.model,
            row.mean,
            row.mean_stderr,
            row.variance,
            row.variance_stderr,
            row.analytic_variance
        );
    }
    for table in &doc.sweeps {
        let f = &table.fit;
        let r = f
            .pearson_r
            .map_or_else(|| "n/a".to_string(), |r| format!("{r:.6}"));
        let _ = writeln!(
            out,
            "fit [{}]: variance = {:.5e}·P + {:.4e}  (slope ± {:.2e}, intercept ± {:.2e}, r = {r})",
            table.model.name(),
            f.slope,
            f.intercept,
            f.slope_stderr,
            f.intercept_stderr
        );
    }
    for cmp in &doc.comparisons {
        let _ = writeln!(out, "{}", cmp.summary);
    }
    out
}

/// Table of available schemes for the `schemes` subcommand.
pub fn scheme_listing() -> String {
    let mut out = String::new();
    for kind in SchemeKind::ALL {
        let params = kind.parameters();
        let params = if params.is_empty() {
            "-".to_string()
        } else {
            params.join(", ")
        };
        let _ = writeln!(out, "{:<20} {}", kind.name(), kind.description());
        let _ = writeln!(out, "{:<20} parameters: {params}", "");
    }
    out
}
