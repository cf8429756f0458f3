use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::types::{ExperimentConfig, Model, RunResult, Scheme};

use super::runner::run_experiment;

/// Largest ratio between the two models' variances still called agreement.
pub const AGREEMENT_RATIO: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Agree,
    Disagree,
}

/// Both models run on the same scheme and beam.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub scheme: Scheme,
    pub mean_photons: f64,
    pub mode: RunResult,
    pub state: RunResult,
    /// Larger over smaller empirical variance; infinite when exactly one is 0.
    pub ratio: f64,
    pub verdict: Verdict,
    pub summary: String,
}

pub fn compare_models(scheme: Scheme, template: &ExperimentConfig) -> Result<Comparison> {
    let run = |model| {
        run_experiment(&ExperimentConfig {
            scheme,
            model,
            ..*template
        })
    };
    let mode = run(Model::ModeFluctuation)?;
    let state = run(Model::StateReduction)?;
    let mean_photons = template.mean_photons()?;

    let (vm, vs) = (mode.empirical_variance, state.empirical_variance);
    let (lo, hi) = if vm <= vs { (vm, vs) } else { (vs, vm) };
    let ratio = if hi == 0.0 { 1.0 } else { hi / lo };
    let verdict = if ratio <= AGREEMENT_RATIO {
        Verdict::Agree
    } else {
        Verdict::Disagree
    };
    let summary = match verdict {
        Verdict::Agree => format!(
            "{}: models agree, V(mode) = {vm:.6e}, V(state) = {vs:.6e} for N = {mean_photons:.6e}",
            scheme.name()
        ),
        Verdict::Disagree => format!(
            "{}: models disagree, mode model predicts V = {vm:.6e} ({:.3e} N), \
             state model predicts V = {vs:.6e} ({:.3e} N)",
            scheme.name(),
            vm / mean_photons,
            vs / mean_photons
        ),
    };
    Ok(Comparison {
        scheme,
        mean_photons,
        mode,
        state,
        ratio,
        verdict,
        summary,
    })
}
