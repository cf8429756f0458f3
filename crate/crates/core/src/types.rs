//! Value types shared by both noise models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detector::NoiseSpec;
use crate::error::{domain, Error, Result};
use crate::units::{photon_flux, window_photons};

/// RMS of either quadrature fluctuation of a coherent (or vacuum) mode.
pub const COHERENT_QUADRATURE_RMS: f64 = 0.5;

/// Tolerance on `R + T = 1` and `P + Q = 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Smallest sample count accepted by an experiment run.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    /// In phase with the reference amplitude.
    First,
    /// Orthogonal to the reference amplitude.
    Second,
}

impl Quadrature {
    pub fn index(self) -> u8 {
        match self {
            Quadrature::First => 1,
            Quadrature::Second => 2,
        }
    }

    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Quadrature::First),
            2 => Ok(Quadrature::Second),
            other => Err(domain(format!("quadrature must be 1 or 2, got {other}"))),
        }
    }
}

/// A single field mode: real coherent amplitude plus Gaussian quadrature
/// fluctuations.
///
/// `amplitude` is in units of photons^(1/2) per integration window, so the mean
/// photon number is `amplitude²`. A squeeze `s` scales the targeted quadrature
/// RMS by `e^(−s)` and the conjugate one by `e^(+s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeState {
    amplitude: f64,
    quad1_rms: f64,
    quad2_rms: f64,
    squeeze: f64,
    squeezed: Quadrature,
}

impl ModeState {
    pub fn new(amplitude: f64, quad1_rms: f64, quad2_rms: f64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(domain(format!(
                "mode amplitude must be finite and non-negative, got {amplitude}"
            )));
        }
        for (name, rms) in [("quad1_rms", quad1_rms), ("quad2_rms", quad2_rms)] {
            if !rms.is_finite() || rms < 0.0 {
                return Err(domain(format!(
                    "{name} must be finite and non-negative, got {rms}"
                )));
            }
        }
        Ok(Self {
            amplitude,
            quad1_rms,
            quad2_rms,
            squeeze: 0.0,
            squeezed: Quadrature::First,
        })
    }

    pub fn coherent(amplitude: f64) -> Result<Self> {
        Self::new(amplitude, COHERENT_QUADRATURE_RMS, COHERENT_QUADRATURE_RMS)
    }

    /// Coherent mode holding `mean_photons` photons per window on average.
    pub fn from_mean_photons(mean_photons: f64) -> Result<Self> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return Err(domain(format!(
                "mean photon number must be finite and non-negative, got {mean_photons}"
            )));
        }
        Self::coherent(mean_photons.sqrt())
    }

    pub fn vacuum() -> Self {
        Self {
            amplitude: 0.0,
            quad1_rms: COHERENT_QUADRATURE_RMS,
            quad2_rms: COHERENT_QUADRATURE_RMS,
            squeeze: 0.0,
            squeezed: Quadrature::First,
        }
    }

    /// Replaces the squeeze setting.
    pub fn with_squeeze(mut self, squeeze: f64, quadrature: Quadrature) -> Self {
        self.squeeze = squeeze;
        self.squeezed = quadrature;
        self
    }

    /// Adds `delta` to the squeeze parameter on the currently targeted quadrature.
    pub fn squeeze_by(mut self, delta: f64) -> Self {
        self.squeeze += delta;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(domain(format!(
                "mode amplitude must be finite and non-negative, got {amplitude}"
            )));
        }
        self.amplitude = amplitude;
        Ok(self)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn mean_photons(&self) -> f64 {
        self.amplitude * self.amplitude
    }

    pub fn quad1_rms(&self) -> f64 {
        self.quad1_rms
    }

    pub fn quad2_rms(&self) -> f64 {
        self.quad2_rms
    }

    pub fn squeeze(&self) -> f64 {
        self.squeeze
    }

    pub fn squeezed_quadrature(&self) -> Quadrature {
        self.squeezed
    }

    /// Quadrature RMS values after squeezing.
    pub fn effective_rms(&self) -> (f64, f64) {
        let shrink = (-self.squeeze).exp();
        let grow = self.squeeze.exp();
        match self.squeezed {
            Quadrature::First => (self.quad1_rms * shrink, self.quad2_rms * grow),
            Quadrature::Second => (self.quad1_rms * grow, self.quad2_rms * shrink),
        }
    }

    /// Squared effective RMS of one quadrature (`δx²` in the variance formulas).
    pub fn quadrature_variance(&self, quadrature: Quadrature) -> f64 {
        let (q1, q2) = self.effective_rms();
        let rms = match quadrature {
            Quadrature::First => q1,
            Quadrature::Second => q2,
        };
        rms * rms
    }
}

/// Lossless beam splitter (or steering mirror) with real `r = √R`, `t = √T`.
///
/// The relative phase of π sits on the path from the second input port to the
/// second output port.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitterSpec {
    reflectance: f64,
    transmittance: f64,
}

impl SplitterSpec {
    pub fn new(reflectance: f64, transmittance: f64) -> Result<Self> {
        for (name, v) in [
            ("reflectance", reflectance),
            ("transmittance", transmittance),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(domain(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if (reflectance + transmittance - 1.0).abs() > SUM_TOLERANCE {
            return Err(domain(format!(
                "lossless splitter needs R + T = 1, got {reflectance} + {transmittance}"
            )));
        }
        Ok(Self {
            reflectance,
            transmittance,
        })
    }

    pub fn from_reflectance(reflectance: f64) -> Result<Self> {
        Self::new(reflectance, 1.0 - reflectance)
    }

    pub fn balanced() -> Self {
        Self {
            reflectance: 0.5,
            transmittance: 0.5,
        }
    }

    pub fn reflectance(&self) -> f64 {
        self.reflectance
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    pub fn r(&self) -> f64 {
        self.reflectance.sqrt()
    }

    pub fn t(&self) -> f64 {
        self.transmittance.sqrt()
    }
}

/// Fractions `P:Q` of the wavefront reaching the two detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Imbalance {
    p: f64,
    q: f64,
}

impl Imbalance {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) {
            return Err(domain(format!(
                "imbalance fractions must be positive, got {p}:{q}"
            )));
        }
        if (p + q - 1.0).abs() > SUM_TOLERANCE {
            return Err(domain(format!(
                "imbalance fractions must sum to 1, got {p} + {q}"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        Self::new(p, 1.0 - p)
    }

    pub fn balanced() -> Self {
        Self { p: 0.5, q: 0.5 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn difference(&self) -> f64 {
        self.p - self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    Direct,
    Bhd,
    Bwdd,
    BwddIndependent,
    MirrorBwdd,
    MichelsonFree,
    MichelsonAnchored,
    Centroid,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 8] = [
        SchemeKind::Direct,
        SchemeKind::Bhd,
        SchemeKind::Bwdd,
        SchemeKind::BwddIndependent,
        SchemeKind::MirrorBwdd,
        SchemeKind::MichelsonFree,
        SchemeKind::MichelsonAnchored,
        SchemeKind::Centroid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Direct => "direct",
            SchemeKind::Bhd => "bhd",
            SchemeKind::Bwdd => "bwdd",
            SchemeKind::BwddIndependent => "bwdd_independent",
            SchemeKind::MirrorBwdd => "mirror_bwdd",
            SchemeKind::MichelsonFree => "michelson_free",
            SchemeKind::MichelsonAnchored => "michelson_anchored",
            SchemeKind::Centroid => "centroid",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SchemeKind::Direct => "single detector on a coherent beam",
            SchemeKind::Bhd => {
                "50:50 beam splitter with vacuum in the second port, two detectors subtracted"
            }
            SchemeKind::Bwdd => {
                "one beam split by wavefront into P:Q halves, two detectors subtracted"
            }
            SchemeKind::BwddIndependent => {
                "balanced wavefront division with independent fluctuations in each half"
            }
            SchemeKind::MirrorBwdd => {
                "balanced wavefront division with one half folded by an R:T steering mirror"
            }
            SchemeKind::MichelsonFree => "Michelson with both mirrors free (homodyne statistics)",
            SchemeKind::MichelsonAnchored => "Michelson with one mirror anchored, single detector",
            SchemeKind::Centroid => "pixel array split at the midpoint, left minus right counts",
        }
    }

    /// Scheme-specific config section and its keys.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            SchemeKind::Bwdd => &["[bwdd] p (default 0.5)", "[bwdd] q (default 1 - p)"],
            SchemeKind::MirrorBwdd => &[
                "[mirror] reflectance (default 0.99)",
                "[mirror] reflection_phase_pi (default true)",
            ],
            SchemeKind::MichelsonFree | SchemeKind::MichelsonAnchored => {
                &["[michelson] quadrature (1 or 2, default 1)"]
            }
            SchemeKind::Centroid => &["[centroid] pixels (default 16)"],
            _ => &[],
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Usage(format!("unknown scheme `{s}`")))
    }
}

/// One detection configuration together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    Direct,
    Bhd,
    Bwdd(Imbalance),
    BwddIndependent,
    MirrorBwdd {
        mirror: SplitterSpec,
        /// Whether the reflection carries a phase of π.
        reflection_phase_pi: bool,
    },
    /// `quadrature` selects which vacuum quadrature forms the cross term.
    MichelsonFree {
        quadrature: Quadrature,
    },
    MichelsonAnchored {
        quadrature: Quadrature,
    },
    Centroid {
        pixels: usize,
    },
}

impl Scheme {
    pub const DEFAULT_MIRROR_REFLECTANCE: f64 = 0.99;
    pub const DEFAULT_CENTROID_PIXELS: usize = 16;

    pub fn balanced_bwdd() -> Self {
        Scheme::Bwdd(Imbalance::balanced())
    }

    pub fn mirror(reflectance: f64) -> Result<Self> {
        Ok(Scheme::MirrorBwdd {
            mirror: SplitterSpec::from_reflectance(reflectance)?,
            reflection_phase_pi: true,
        })
    }

    pub fn centroid(pixels: usize) -> Result<Self> {
        if pixels < 2 {
            return Err(domain(format!(
                "centroiding needs at least 2 pixels, got {pixels}"
            )));
        }
        Ok(Scheme::Centroid { pixels })
    }

    /// Default-parameter scheme of the given kind.
    pub fn default_for(kind: SchemeKind) -> Self {
        match kind {
            SchemeKind::Direct => Scheme::Direct,
            SchemeKind::Bhd => Scheme::Bhd,
            SchemeKind::Bwdd => Scheme::balanced_bwdd(),
            SchemeKind::BwddIndependent => Scheme::BwddIndependent,
            SchemeKind::MirrorBwdd => Scheme::MirrorBwdd {
                mirror: SplitterSpec {
                    reflectance: Self::DEFAULT_MIRROR_REFLECTANCE,
                    transmittance: 1.0 - Self::DEFAULT_MIRROR_REFLECTANCE,
                },
                reflection_phase_pi: true,
            },
            SchemeKind::MichelsonFree => Scheme::MichelsonFree {
                quadrature: Quadrature::First,
            },
            SchemeKind::MichelsonAnchored => Scheme::MichelsonAnchored {
                quadrature: Quadrature::First,
            },
            SchemeKind::Centroid => Scheme::Centroid {
                pixels: Self::DEFAULT_CENTROID_PIXELS,
            },
        }
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            Scheme::Direct => SchemeKind::Direct,
            Scheme::Bhd => SchemeKind::Bhd,
            Scheme::Bwdd(_) => SchemeKind::Bwdd,
            Scheme::BwddIndependent => SchemeKind::BwddIndependent,
            Scheme::MirrorBwdd { .. } => SchemeKind::MirrorBwdd,
            Scheme::MichelsonFree { .. } => SchemeKind::MichelsonFree,
            Scheme::MichelsonAnchored { .. } => SchemeKind::MichelsonAnchored,
            Scheme::Centroid { .. } => SchemeKind::Centroid,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Number of independent detector channels summed into the output signal.
    pub fn detector_count(&self) -> usize {
        match self {
            Scheme::Direct | Scheme::MichelsonAnchored { .. } => 1,
            Scheme::Centroid { pixels } => *pixels,
            _ => 2,
        }
    }

    /// Which input port carries the vacuum mode, if any.
    pub fn has_vacuum_port(&self) -> bool {
        matches!(
            self,
            Scheme::Bhd
                | Scheme::MirrorBwdd { .. }
                | Scheme::MichelsonFree { .. }
                | Scheme::MichelsonAnchored { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scheme::Bwdd(imb) => Imbalance::new(imb.p, imb.q).map(|_| ()),
            Scheme::MirrorBwdd { mirror, .. } => {
                SplitterSpec::new(mirror.reflectance, mirror.transmittance).map(|_| ())
            }
            Scheme::Centroid { pixels } => Scheme::centroid(*pixels).map(|_| ()),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Model {
    /// Fluctuating vacuum wave modes.
    ModeFluctuation,
    /// Poissonian state reduction at each detector.
    StateReduction,
}

impl Model {
    pub const ALL: [Model; 2] = [Model::ModeFluctuation, Model::StateReduction];

    pub fn name(self) -> &'static str {
        match self {
            Model::ModeFluctuation => "mode",
            Model::StateReduction => "state",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "mode" | "mode_fluctuation" | "modefluctuation" => Ok(Model::ModeFluctuation),
            "state" | "state_reduction" | "statereduction" => Ok(Model::StateReduction),
            _ => Err(Error::Usage(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Port {
    /// The bright input beam.
    A,
    /// The second (vacuum) input port.
    B,
}

/// Squeezing of one input port's fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSpec {
    pub parameter: f64,
    pub port: Port,
    pub quadrature: Quadrature,
}

impl Default for SqueezeSpec {
    fn default() -> Self {
        Self {
            parameter: 0.0,
            port: Port::B,
            quadrature: Quadrature::First,
        }
    }
}

impl SqueezeSpec {
    pub fn on_b(parameter: f64) -> Self {
        Self {
            parameter,
            ..Self::default()
        }
    }

    pub fn is_active(&self) -> bool {
        self.parameter != 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub model: Model,
    pub power_watts: f64,
    pub wavelength_m: f64,
    pub window_s: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub squeeze: SqueezeSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
}

impl ExperimentConfig {
    /// Noise-free, unsqueezed configuration.
    pub fn new(
        scheme: Scheme,
        model: Model,
        power_watts: f64,
        wavelength_m: f64,
        window_s: f64,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            scheme,
            model,
            power_watts,
            wavelength_m,
            window_s,
            samples,
            seed,
            squeeze: SqueezeSpec::default(),
            noise: NoiseSpec::default(),
        }
    }

    /// Mean photon number of the input beam per integration window.
    pub fn mean_photons(&self) -> Result<f64> {
        let n = window_photons(
            photon_flux(self.power_watts, self.wavelength_m)?,
            self.window_s,
        )?;
        if !n.is_finite() {
            return Err(domain("mean photon number overflows"));
        }
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        self.mean_photons()?;
        if self.samples < MIN_SAMPLES {
            return Err(domain(format!(
                "at least {MIN_SAMPLES} samples are required, got {}",
                self.samples
            )));
        }
        if !self.squeeze.parameter.is_finite() {
            return Err(domain("squeeze parameter must be finite"));
        }
        if self.squeeze.is_active() && self.model == Model::StateReduction {
            return Err(Error::UnsupportedCombination(
                "squeezed input is only modeled under the mode-fluctuation model".into(),
            ));
        }
        self.noise.validate()
    }

    /// Input modes `(a, b)` for the mode model, with squeezing applied.
    pub fn input_modes(&self) -> Result<(ModeState, ModeState)> {
        let mut a = ModeState::from_mean_photons(self.mean_photons()?)?;
        let mut b = ModeState::vacuum();
        if self.squeeze.is_active() {
            let target = match self.squeeze.port {
                Port::A => &mut a,
                Port::B => &mut b,
            };
            *target = target.with_squeeze(self.squeeze.parameter, self.squeeze.quadrature);
        }
        Ok((a, b))
    }
}

/// Closed-form mean and variance of a scheme's output signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

/// Empirical statistics of one experiment run next to the active model's
/// closed-form prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub samples: usize,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub mean_stderr: f64,
    pub variance_stderr: f64,
    pub analytic_mean: f64,
    pub analytic_variance: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_mode_is_minimum_uncertainty() {
        let m = ModeState::coherent(10.0).unwrap();
        assert_eq!(m.quad1_rms() * m.quad2_rms(), 0.25);
        assert_eq!(m.mean_photons(), 100.0);
        assert_eq!(m.effective_rms(), (0.5, 0.5));
    }

    #[test]
    fn squeeze_preserves_uncertainty_product() {
        let m = ModeState::vacuum().with_squeeze(2f64.ln(), Quadrature::First);
        let (q1, q2) = m.effective_rms();
        assert!((q1 - 0.25).abs() < 1e-15);
        assert!((q2 - 1.0).abs() < 1e-15);
        assert!((q1 * q2 - 0.25).abs() < 1e-15);
        let m2 = ModeState::vacuum().with_squeeze(2f64.ln(), Quadrature::Second);
        assert_eq!(m2.effective_rms(), (q2, q1));
    }

    #[test]
    fn squeeze_round_trip_is_exact() {
        let base = ModeState::coherent(3.0).unwrap();
        for s in [0.1, 0.5, 2f64.ln(), 1.7] {
            let back = base.squeeze_by(s).squeeze_by(-s);
            assert_eq!(back.effective_rms(), base.effective_rms());
        }
    }

    #[test]
    fn negative_amplitude_rejected() {
        assert!(ModeState::coherent(-1.0).is_err());
        assert!(ModeState::new(1.0, -0.5, 0.5).is_err());
        assert!(ModeState::from_mean_photons(f64::NAN).is_err());
    }

    #[test]
    fn splitter_requires_lossless() {
        assert!(SplitterSpec::new(0.5, 0.5).is_ok());
        assert!(SplitterSpec::new(0.5, 0.5 + 2e-12).is_err());
        assert!(SplitterSpec::new(0.5, 0.5 + 5e-13).is_ok());
        assert!(SplitterSpec::new(1.2, -0.2).is_err());
        let m = SplitterSpec::from_reflectance(0.99).unwrap();
        assert!((m.r() * m.r() + m.t() * m.t() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn imbalance_bounds() {
        assert!(Imbalance::new(0.51, 0.49).is_ok());
        assert!(Imbalance::new(0.0, 1.0).is_err());
        assert!(Imbalance::new(0.6, 0.6).is_err());
        assert!(Imbalance::from_p(1.0).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for kind in SchemeKind::ALL {
            assert_eq!(kind.name().parse::<SchemeKind>().unwrap(), kind);
            assert_eq!(Scheme::default_for(kind).kind(), kind);
        }
        assert!("homodyne".parse::<SchemeKind>().is_err());
        assert_eq!("STATE".parse::<Model>().unwrap(), Model::StateReduction);
    }

    #[test]
    fn centroid_needs_two_pixels() {
        assert!(Scheme::centroid(1).is_err());
        assert!(Scheme::Centroid { pixels: 0 }.validate().is_err());
    }

    #[test]
    fn config_rejects_squeeze_under_state_model() {
        let mut cfg = ExperimentConfig::new(
            Scheme::Bhd,
            Model::StateReduction,
            1e-3,
            633e-9,
            1e-6,
            1000,
            1,
        );
        assert!(cfg.validate().is_ok());
        cfg.squeeze = SqueezeSpec::on_b(0.5);
        assert!(matches!(
            cfg.validate(),
            Err(Error::UnsupportedCombination(_))
        ));
        cfg.model = Model::ModeFluctuation;
        assert!(cfg.validate().is_ok());
        cfg.samples = 1;
        assert!(cfg.validate().is_err());
    }
}
