use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng::derive_seed;
use crate::stats::{fit_line, LinearFit};
use crate::types::{ExperimentConfig, Model, RunResult, Scheme};

use super::runner::run_experiment;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub power_watts: f64,
    pub model: Model,
    pub result: RunResult,
}

impl SweepRow {
    pub fn empirical_variance(&self) -> f64 {
        self.result.empirical_variance
    }

    pub fn analytic_variance(&self) -> f64 {
        self.result.analytic_variance
    }

    pub fn stderr(&self) -> f64 {
        self.result.variance_stderr
    }
}

/// Variance against optical power, with a least-squares line through the
/// empirical variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub scheme: Scheme,
    pub model: Model,
    /// Sorted by power.
    pub rows: Vec<SweepRow>,
    pub fit: LinearFit,
}

/// Six evenly spaced powers over 0.02–0.8 mW.
pub fn default_sweep_powers() -> Vec<f64> {
    let (lo, hi) = (0.02e-3, 0.8e-3);
    (0..6).map(|i| lo + (hi - lo) * i as f64 / 5.0).collect()
}

/// Runs `template` once per power. Point `i` (in ascending power order) uses
/// the seed `derive_seed(template.seed, i)`.
pub fn power_sweep(
    scheme: Scheme,
    model: Model,
    powers: &[f64],
    template: &ExperimentConfig,
) -> Result<SweepTable> {
    if powers.len() < 3 {
        return Err(domain(format!(
            "a power sweep needs at least 3 powers, got {}",
            powers.len()
        )));
    }
    if let Some(p) = powers.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(domain(format!(
            "sweep powers must be non-negative, got {p}"
        )));
    }
    let mut sorted = powers.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows = sorted
        .iter()
        .enumerate()
        .map(|(i, &power_watts)| {
            let cfg = ExperimentConfig {
                scheme,
                model,
                power_watts,
                seed: derive_seed(template.seed, i as u64),
                ..*template
            };
            run_experiment(&cfg).map(|result| SweepRow {
                power_watts,
                model,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.power_watts).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.empirical_variance()).collect();
    let fit = fit_line(&xs, &ys)?;
    Ok(SweepTable {
        scheme,
        model,
        rows,
        fit,
    })
}
