//! Optional classical noise on top of the quantum noise: common-mode laser
//! intensity noise and additive detector dark noise.
//!
//! Flat-band densities are converted to a per-window RMS using the Nyquist
//! bandwidth `B = 1/(2τ)` of an integration window `τ`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::units::{photon_energy, ELEMENTARY_CHARGE};

/// Dark-noise floor of one detector channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DarkNoise {
    /// Noise-equivalent power in W/√Hz.
    Nep { watts_per_rt_hz: f64 },
    /// Input-referred current noise in A/√Hz at unit quantum efficiency.
    Current { amps_per_rt_hz: f64 },
}

impl DarkNoise {
    /// NewFocus 1807 balanced receiver, DC–10 MHz.
    pub const NEWFOCUS_1807: DarkNoise = DarkNoise::Nep {
        watts_per_rt_hz: 3.3e-12,
    };
    /// NewFocus 2007 (Nirvana) balanced receiver, 125 kHz bandwidth.
    pub const NEWFOCUS_2007: DarkNoise = DarkNoise::Current {
        amps_per_rt_hz: 1.7e-12,
    };

    fn density(&self) -> f64 {
        match *self {
            DarkNoise::Nep { watts_per_rt_hz } => watts_per_rt_hz,
            DarkNoise::Current { amps_per_rt_hz } => amps_per_rt_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.density();
        if !d.is_finite() || d < 0.0 {
            return Err(domain(format!(
                "dark-noise density must be finite and non-negative, got {d}"
            )));
        }
        Ok(())
    }

    /// RMS dark noise of one channel in photon-equivalents per window.
    pub fn photons_rms(&self, wavelength_m: f64, window_s: f64) -> Result<f64> {
        self.validate()?;
        if !window_s.is_finite() || window_s <= 0.0 {
            return Err(domain("integration window must be positive"));
        }
        let root_half_window = (window_s / 2.0).sqrt();
        Ok(match *self {
            DarkNoise::Nep { watts_per_rt_hz } => {
                watts_per_rt_hz * root_half_window / photon_energy(wavelength_m)?
            }
            DarkNoise::Current { amps_per_rt_hz } => {
                amps_per_rt_hz * root_half_window / ELEMENTARY_CHARGE
            }
        })
    }

    /// Optical power at which the shot-noise variance of a balanced pair
    /// equals the summed dark-noise variance of its two channels.
    ///
    /// Independent of the window, since both variances scale linearly with it.
    pub fn balanced_crossover_power(&self, wavelength_m: f64) -> Result<f64> {
        // N̄ = P·τ/(hν) against 2σ² with σ² ∝ τ/2
        let window = 1.0;
        let sigma = self.photons_rms(wavelength_m, window)?;
        Ok(2.0 * sigma * sigma * photon_energy(wavelength_m)? / window)
    }
}

/// Classical noise switched on for an experiment. Everything is off by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Fractional RMS of the laser intensity, common to every detector.
    pub technical_rms: f64,
    pub dark: Option<DarkNoise>,
}

impl NoiseSpec {
    pub fn is_quiet(&self) -> bool {
        self.technical_rms == 0.0 && self.dark.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.technical_rms.is_finite() || self.technical_rms < 0.0 {
            return Err(domain(format!(
                "technical noise RMS must be finite and non-negative, got {}",
                self.technical_rms
            )));
        }
        if let Some(dark) = &self.dark {
            dark.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_near_a_few_tens_of_microwatts() {
        // both presets put the crossover at ~3.5e-5 W for 633 nm light
        for dark in [DarkNoise::NEWFOCUS_1807, DarkNoise::NEWFOCUS_2007] {
            let p = dark.balanced_crossover_power(633e-9).unwrap();
            assert!(p > 0.025e-3 && p < 0.1e-3, "{p}");
        }
    }

    #[test]
    fn nep_crossover_closed_form() {
        // P = NEP²·λ/(h·c)
        let p = DarkNoise::NEWFOCUS_1807
            .balanced_crossover_power(633e-9)
            .unwrap();
        let expected = 3.3e-12f64.powi(2) * 633e-9 / (6.626_070_15e-34 * 299_792_458.0);
        assert!((p / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dark_rms_scales_with_root_window() {
        let d = DarkNoise::NEWFOCUS_2007;
        let a = d.photons_rms(633e-9, 1e-6).unwrap();
        let b = d.photons_rms(633e-9, 4e-6).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_settings() {
        let spec = NoiseSpec {
            technical_rms: -0.1,
            dark: None,
        };
        assert!(spec.validate().is_err());
        let dark = DarkNoise::Nep {
            watts_per_rt_hz: -1.0,
        };
        assert!(dark.photons_rms(633e-9, 1e-6).is_err());
    }
}
