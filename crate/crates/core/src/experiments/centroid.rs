use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Balancing split of a pixel row and its fixed-midpoint difference signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentroidResult {
    /// Index `k` minimizing `|Σ_{i<k} N_i − Σ_{i≥k} N_i|`, smallest on ties.
    pub split_index: usize,
    /// `Σ_{i<n/2} N_i − Σ_{i≥n/2} N_i`.
    pub delta_n: f64,
}

/// Sums left and right of split index `k`.
pub fn split_sums(pixels: &[f64], k: usize) -> (f64, f64) {
    let left = pixels[..k].iter().sum();
    let right = pixels[k..].iter().sum();
    (left, right)
}

/// Pixel index that best balances the counts on either side.
pub fn balance_index(pixels: &[f64]) -> usize {
    let n = pixels.len();
    let mut prefix = vec![0.0; n + 1];
    for (i, p) in pixels.iter().enumerate() {
        prefix[i + 1] = prefix[i] + p;
    }
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + pixels[i];
    }
    let mut best = 0;
    let mut best_gap = f64::INFINITY;
    for k in 0..=n {
        let gap = (prefix[k] - suffix[k]).abs();
        if gap < best_gap {
            best = k;
            best_gap = gap;
        }
    }
    best
}

pub fn centroid(pixels: &[f64]) -> Result<CentroidResult> {
    if pixels.len() < 2 {
        return Err(domain(format!(
            "centroiding needs at least 2 pixels, got {}",
            pixels.len()
        )));
    }
    if let Some(p) = pixels.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(domain(format!(
            "pixel counts must be non-negative, got {p}"
        )));
    }
    let (left, right) = split_sums(pixels, pixels.len() / 2);
    Ok(CentroidResult {
        split_index: balance_index(pixels),
        delta_n: left - right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_difference() {
        let c = centroid(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(c.delta_n, -4.0);
        assert_eq!(c.split_index, 3);
    }

    #[test]
    fn symmetric_profile_splits_at_centre() {
        let px = [1.0, 5.0, 9.0, 5.0, 1.0];
        let c = centroid(&px).unwrap();
        assert_eq!(c.split_index, 2);
        // |6 − 15| = |15 − 6|, the tie goes to the smaller index
        let (l, r) = split_sums(&px, c.split_index);
        assert_eq!((l - r).abs(), 9.0);
        let even = centroid(&[1.0, 4.0, 4.0, 1.0]).unwrap();
        assert_eq!(even.split_index, 2);
        assert_eq!(even.delta_n, 0.0);
    }

    #[test]
    fn too_few_pixels() {
        assert!(centroid(&[]).is_err());
        assert!(centroid(&[3.0]).is_err());
        assert!(centroid(&[1.0, -1.0]).is_err());
    }
}
