use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::mode_model;
use crate::rng::{sample_parallel, StreamRng};
use crate::state_model;
use crate::stats::summarize;
use crate::types::{ExperimentConfig, Model, Prediction, RunResult};

/// Closed-form prediction of the configured model, including any enabled
/// classical noise: technical noise adds `mean²·rms²`, dark noise adds `σ²`
/// per detector channel.
pub fn prediction(cfg: &ExperimentConfig) -> Result<Prediction> {
    cfg.validate()?;
    let mut p = match cfg.model {
        Model::ModeFluctuation => {
            let (a, b) = cfg.input_modes()?;
            mode_model::analytic_variance(&cfg.scheme, &a, &b)?
        }
        Model::StateReduction => {
            state_model::reject_squeeze(cfg.squeeze.parameter)?;
            state_model::analytic_prediction(&cfg.scheme, cfg.mean_photons()?)?
        }
    };
    let rms = cfg.noise.technical_rms;
    p.variance += p.mean * p.mean * rms * rms;
    if let Some(dark) = &cfg.noise.dark {
        let sigma = dark.photons_rms(cfg.wavelength_m, cfg.window_s)?;
        p.variance += cfg.scheme.detector_count() as f64 * sigma * sigma;
    }
    Ok(p)
}

/// All `cfg.samples` output draws, in sample order.
pub fn draw_samples(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let technical_rms = cfg.noise.technical_rms;
    let dark_sigma = match &cfg.noise.dark {
        Some(dark) => {
            dark.photons_rms(cfg.wavelength_m, cfg.window_s)?
                * (cfg.scheme.detector_count() as f64).sqrt()
        }
        None => 0.0,
    };
    // common-mode intensity factor 1 + ε, one draw per window
    let intensity_factor = move |rng: &mut StreamRng| -> f64 {
        if technical_rms > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            (1.0 + technical_rms * z).max(0.0)
        } else {
            1.0
        }
    };
    let add_dark = move |x: f64, rng: &mut StreamRng| -> f64 {
        if dark_sigma > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            x + dark_sigma * z
        } else {
            x
        }
    };
    let scheme = cfg.scheme;
    match cfg.model {
        Model::ModeFluctuation => {
            let (a, b) = cfg.input_modes()?;
            sample_parallel(cfg.seed, cfg.samples, |rng| {
                let k = intensity_factor(rng);
                let a_k = if k == 1.0 {
                    a
                } else {
                    a.with_amplitude(a.amplitude() * k.sqrt())?
                };
                let x = mode_model::mc_delta_n(&scheme, &a_k, &b, rng)?;
                Ok(add_dark(x, rng))
            })
        }
        Model::StateReduction => {
            state_model::reject_squeeze(cfg.squeeze.parameter)?;
            let n = cfg.mean_photons()?;
            sample_parallel(cfg.seed, cfg.samples, |rng| {
                let k = intensity_factor(rng);
                let x = state_model::mc_delta_n(&scheme, n * k, rng)?;
                Ok(add_dark(x, rng))
            })
        }
    }
}

/// Draws the configured number of samples and summarizes them against the
/// active model's prediction. Deterministic in `(cfg, cfg.seed)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResult> {
    let p = prediction(cfg)?;
    let samples = draw_samples(cfg)?;
    summarize(&samples, p)
}
