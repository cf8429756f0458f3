//! Two competing models of optical quantum noise in balanced differential
//! detection.
//!
//! The *mode model* treats shot noise as Gaussian fluctuations `δa₁ + iδa₂`
//! riding on the coherent amplitude of every field mode, including the vacuum
//! modes that enter unused beam-splitter ports. The *state model* treats it as
//! independent Poissonian state reduction at each square-law detector, with the
//! subtraction being plain arithmetic.
//!
//! Both models are exposed for every detection scheme in [`Scheme`]: direct
//! detection, balanced homodyne, balanced wavefront division (shared and
//! independent fluctuations), wavefront division through a steering mirror,
//! free and anchored Michelson readout, and pixel centroiding. Analytic
//! predictions are paired with seeded, thread-count independent Monte Carlo
//! estimates in [`experiments`].

pub mod detector;
pub mod error;
pub mod experiments;
pub mod mode_model;
pub mod rng;
pub mod state_model;
pub mod stats;
pub mod types;
pub mod units;

pub use detector::{DarkNoise, NoiseSpec};
pub use error::{Error, Result};
pub use experiments::{
    centroid, compare_models, optical_lever_sensitivity, power_sweep, run_experiment,
    CentroidResult, Comparison, SweepRow, SweepTable, Verdict,
};
pub use mode_model::{FieldAmplitude, FluctuationSample};
pub use state_model::CountSample;
pub use stats::LinearFit;
pub use types::{
    ExperimentConfig, Imbalance, ModeState, Model, Port, Prediction, Quadrature, RunResult, Scheme,
    SchemeKind, SplitterSpec, SqueezeSpec,
};
pub use units::{photon_flux, window_photons};
