//! Scheme runners and the measurement reproductions built on them.

mod centroid;
mod compare;
mod lever;
mod runner;
mod sweep;

pub use centroid::{balance_index, centroid, split_sums, CentroidResult};
pub use compare::{compare_models, Comparison, Verdict, AGREEMENT_RATIO};
pub use lever::optical_lever_sensitivity;
pub use runner::{draw_samples, prediction, run_experiment};
pub use sweep::{default_sweep_powers, power_sweep, SweepRow, SweepTable};
