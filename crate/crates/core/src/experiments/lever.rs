use crate::error::{domain, Result};

/// Shot-noise-limited angular resolution of an optical lever, in rad/√Hz.
///
/// A slit image of angular width `image_width_rad` is split into two halves;
/// one second of integration collects `flux` photons whose difference
/// fluctuates by `√N`, so the centroid resolves `width/√N`.
pub fn optical_lever_sensitivity(flux: f64, image_width_rad: f64) -> Result<f64> {
    if !flux.is_finite() || flux <= 0.0 {
        return Err(domain(format!("photon flux must be positive, got {flux}")));
    }
    if !image_width_rad.is_finite() || image_width_rad <= 0.0 {
        return Err(domain(format!(
            "image width must be positive, got {image_width_rad}"
        )));
    }
    let photons_per_second_window = flux * 1.0;
    Ok(image_width_rad / photons_per_second_window.sqrt())
}
