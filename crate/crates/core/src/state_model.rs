//! The photon-number state-reduction model.
//!
//! Each detector (or pixel) independently collapses a coherent superposition
//! onto a number state with Poissonian probability. Splitting a beam, by
//! amplitude or by wavefront, only rescales the mean reaching each detector;
//! the difference of two counts is arithmetic with variance `N̄_c + N̄_d`.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::types::{Prediction, Scheme};

/// Above this mean, Poisson counts are drawn from the rounded Gaussian
/// `N(μ, μ)` clamped at zero.
pub const GAUSSIAN_THRESHOLD: f64 = 1e4;

/// Photon counts registered by the two detectors in one window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSample {
    pub n_c: u64,
    pub n_d: u64,
}

impl CountSample {
    pub fn total(&self) -> u64 {
        self.n_c + self.n_d
    }

    pub fn difference(&self) -> f64 {
        self.n_c as f64 - self.n_d as f64
    }
}

fn check_mean(mean: f64) -> Result<()> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(domain(format!(
            "Poisson mean must be finite and non-negative, got {mean}"
        )));
    }
    Ok(())
}

/// One Poisson(`mean`) count.
pub fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    check_mean(mean)?;
    if mean == 0.0 {
        return Ok(0);
    }
    if mean > GAUSSIAN_THRESHOLD {
        let z: f64 = rng.sample(StandardNormal);
        return Ok((mean + mean.sqrt() * z).round().max(0.0) as u64);
    }
    let dist = Poisson::new(mean).map_err(|e| domain(format!("Poisson({mean}): {e}")))?;
    Ok(dist.sample(rng) as u64)
}

/// Poisson total split binomially between detector `c` (probability `p_c`)
/// and detector `d`.
pub fn sample_split_counts<R: Rng + ?Sized>(
    total_mean: f64,
    p_c: f64,
    rng: &mut R,
) -> Result<CountSample> {
    if !(0.0..=1.0).contains(&p_c) {
        return Err(domain(format!(
            "split probability must lie in [0, 1], got {p_c}"
        )));
    }
    let total = sample_poisson(total_mean, rng)?;
    let n_c = thin(total, p_c, rng)?;
    Ok(CountSample {
        n_c,
        n_d: total - n_c,
    })
}

fn thin<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Result<u64> {
    let dist = Binomial::new(n, p).map_err(|e| domain(format!("Binomial({n}, {p}): {e}")))?;
    Ok(dist.sample(rng))
}

/// Normalized Gaussian intensity profile across `pixels` pixels, centred on
/// the array with an RMS width of one sixth of its length.
pub fn pixel_profile(pixels: usize) -> Vec<f64> {
    let n = pixels as f64;
    let centre = n / 2.0;
    let sigma = n / 6.0;
    let raw: Vec<f64> = (0..pixels)
        .map(|i| {
            let x = (i as f64 + 0.5 - centre) / sigma;
            (-0.5 * x * x).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Left-minus-right sum about the fixed midpoint pixel `n/2`.
pub fn midpoint_difference(values: &[f64]) -> f64 {
    let mid = values.len() / 2;
    let left: f64 = values[..mid].iter().sum();
    let right: f64 = values[mid..].iter().sum();
    left - right
}

/// Independent Poisson counts on every pixel of the profile.
pub fn sample_pixel_counts<R: Rng + ?Sized>(
    profile: &[f64],
    total_mean: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    profile
        .iter()
        .map(|w| sample_poisson(w * total_mean, rng).map(|n| n as f64))
        .collect()
}

/// One draw of the output signal of `scheme` for a beam of `total_mean`
/// photons per window.
pub fn mc_delta_n<R: Rng + ?Sized>(scheme: &Scheme, total_mean: f64, rng: &mut R) -> Result<f64> {
    match *scheme {
        Scheme::Direct => Ok(sample_poisson(total_mean, rng)? as f64),
        Scheme::Bhd | Scheme::MichelsonFree { .. } | Scheme::BwddIndependent => {
            Ok(sample_split_counts(total_mean, 0.5, rng)?.difference())
        }
        Scheme::Bwdd(imbalance) => {
            Ok(sample_split_counts(total_mean, imbalance.p(), rng)?.difference())
        }
        Scheme::MirrorBwdd { mirror, .. } => {
            // the folded half loses its transmitted fraction before detection
            let halves = sample_split_counts(total_mean, 0.5, rng)?;
            let folded = thin(halves.n_c, mirror.reflectance(), rng)?;
            Ok(halves.n_d as f64 - folded as f64)
        }
        Scheme::MichelsonAnchored { .. } => Ok(sample_poisson(0.5 * total_mean, rng)? as f64),
        Scheme::Centroid { pixels } => {
            Scheme::centroid(pixels)?;
            let counts = sample_pixel_counts(&pixel_profile(pixels), total_mean, rng)?;
            Ok(midpoint_difference(&counts))
        }
    }
}

/// Mean and variance of the scheme output: the variance is always the summed
/// mean count of the detectors involved.
pub fn analytic_prediction(scheme: &Scheme, total_mean: f64) -> Result<Prediction> {
    check_mean(total_mean)?;
    scheme.validate()?;
    let n = total_mean;
    let prediction = match *scheme {
        Scheme::Direct => Prediction {
            mean: n,
            variance: n,
        },
        Scheme::Bhd | Scheme::MichelsonFree { .. } | Scheme::BwddIndependent => Prediction {
            mean: 0.0,
            variance: n,
        },
        Scheme::Bwdd(imbalance) => Prediction {
            mean: imbalance.difference() * n,
            variance: n,
        },
        Scheme::MirrorBwdd { mirror, .. } => {
            let r = mirror.reflectance();
            Prediction {
                mean: 0.5 * (1.0 - r) * n,
                variance: 0.5 * (1.0 + r) * n,
            }
        }
        Scheme::MichelsonAnchored { .. } => Prediction {
            mean: 0.5 * n,
            variance: 0.5 * n,
        },
        Scheme::Centroid { pixels } => Prediction {
            mean: midpoint_difference(&pixel_profile(pixels)) * n,
            variance: n,
        },
    };
    Ok(prediction)
}

/// Squeezed input has no state-reduction counterpart here.
pub fn reject_squeeze(squeeze: f64) -> Result<()> {
    if squeeze != 0.0 {
        return Err(Error::UnsupportedCombination(
            "squeezed input is only modeled under the mode-fluctuation model".into(),
        ));
    }
    Ok(())
}
