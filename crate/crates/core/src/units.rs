//! Photon-number bookkeeping for optical power.

use crate::error::{domain, Result};

/// Planck constant, J·s (exact, SI 2019).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Photon energy `h·c/λ` in joules.
pub fn photon_energy(wavelength_m: f64) -> Result<f64> {
    check_wavelength(wavelength_m)?;
    Ok(PLANCK * SPEED_OF_LIGHT / wavelength_m)
}

/// Photon flux in photons/s carried by `power_watts` of light at `wavelength_m`.
pub fn photon_flux(power_watts: f64, wavelength_m: f64) -> Result<f64> {
    if !power_watts.is_finite() || power_watts < 0.0 {
        return Err(domain(format!(
            "optical power must be finite and non-negative, got {power_watts}"
        )));
    }
    check_wavelength(wavelength_m)?;
    Ok(power_watts * wavelength_m / (PLANCK * SPEED_OF_LIGHT))
}

/// Mean photon number collected in one integration window.
pub fn window_photons(flux: f64, window_s: f64) -> Result<f64> {
    if !flux.is_finite() || flux < 0.0 {
        return Err(domain(format!(
            "photon flux must be finite and non-negative, got {flux}"
        )));
    }
    if !window_s.is_finite() || window_s <= 0.0 {
        return Err(domain(format!(
            "integration window must be finite and positive, got {window_s}"
        )));
    }
    Ok(flux * window_s)
}

fn check_wavelength(wavelength_m: f64) -> Result<()> {
    if !wavelength_m.is_finite() || wavelength_m <= 0.0 {
        return Err(domain(format!(
            "wavelength must be finite and positive, got {wavelength_m}"
        )));
    }
    Ok(())
}
