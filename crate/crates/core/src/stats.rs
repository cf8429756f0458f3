//! Sample moments and the straight-line fit used by power sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::types::{Prediction, RunResult};

/// Mean and unbiased variance by two passes, in sample order.
pub fn mean_variance(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(domain(format!(
            "need at least 2 samples for a variance, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((mean, ss / (n - 1.0)))
}

/// Packs sample statistics with a closed-form prediction.
///
/// `mean_stderr = √(V/n)`, `variance_stderr = V·√(2/(n−1))`.
pub fn summarize(samples: &[f64], prediction: Prediction) -> Result<RunResult> {
    let (mean, variance) = mean_variance(samples)?;
    let n = samples.len() as f64;
    Ok(RunResult {
        samples: samples.len(),
        empirical_mean: mean,
        empirical_variance: variance,
        mean_stderr: (variance / n).sqrt(),
        variance_stderr: variance * (2.0 / (n - 1.0)).sqrt(),
        analytic_mean: prediction.mean,
        analytic_variance: prediction.variance,
    })
}

/// Sample covariance of paired data.
pub fn covariance(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(domain(
            "covariance needs two equal-length series of 2+ values",
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let s: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(s / (n - 1.0))
}

/// Ordinary least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    /// `None` when the responses are constant.
    pub pearson_r: Option<f64>,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(domain("fit needs equal-length series"));
    }
    if xs.len() < 3 {
        return Err(domain(format!(
            "fit needs at least 3 points, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit(
            "all abscissae are equal, slope is undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let residual_var = rss / (n - 2.0);
    let slope_stderr = (residual_var / sxx).sqrt();
    let intercept_stderr = (residual_var * (1.0 / n + mx * mx / sxx)).sqrt();
    let pearson_r = (syy > 0.0).then(|| sxy / (sxx * syy).sqrt());
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
        intercept_stderr,
        pearson_r,
    })
}
