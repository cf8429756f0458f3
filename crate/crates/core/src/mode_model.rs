//! The fluctuating vacuum-wave-mode model.
//!
//! Every mode carries a complex amplitude `α = a + δa₁ + iδa₂` with zero-mean
//! Gaussian quadrature fluctuations; unused input ports carry vacuum modes
//! `β = δb₁ + iδb₂`. Fields are propagated through splitters and detected as
//! the full square `|α|²`. The closed forms in [`analytic_variance`] keep only
//! the leading order in the amplitude, so Monte Carlo estimates differ from
//! them by terms of relative order `1/N̄`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{ModeState, Prediction, Quadrature, Scheme, SplitterSpec};

/// One draw of the two quadrature fluctuations of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSample {
    pub d1: f64,
    pub d2: f64,
}

/// Complex field amplitude in units of photons^(1/2) per window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldAmplitude {
    pub re: f64,
    pub im: f64,
}

impl FieldAmplitude {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `a + δa₁ + iδa₂` for a mode and one fluctuation draw.
    pub fn of_mode(mode: &ModeState, sample: FluctuationSample) -> Self {
        Self::new(mode.amplitude() + sample.d1, sample.d2)
    }

    pub fn intensity(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    /// Multiplication by `i`.
    pub fn quarter_turn(self) -> Self {
        Self::new(-self.im, self.re)
    }

    /// Re-references a vacuum field so that `quadrature` lines up with the
    /// in-phase axis of the bright beam.
    fn aligned(self, quadrature: Quadrature) -> Self {
        match quadrature {
            Quadrature::First => self,
            Quadrature::Second => self.quarter_turn(),
        }
    }
}

impl std::ops::Add for FieldAmplitude {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl std::ops::Sub for FieldAmplitude {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

/// Independent Gaussian draws with the mode's (squeezed) quadrature RMS values.
pub fn sample_fluctuations<R: Rng + ?Sized>(mode: &ModeState, rng: &mut R) -> FluctuationSample {
    let (rms1, rms2) = mode.effective_rms();
    let z1: f64 = rng.sample(StandardNormal);
    let z2: f64 = rng.sample(StandardNormal);
    FluctuationSample {
        d1: rms1 * z1,
        d2: rms2 * z2,
    }
}

fn draw_field<R: Rng + ?Sized>(mode: &ModeState, rng: &mut R) -> FieldAmplitude {
    FieldAmplitude::of_mode(mode, sample_fluctuations(mode, rng))
}

/// `c = r·a + t·b`, `d = t·a − r·b`.
pub fn beamsplitter_transform(
    a_in: FieldAmplitude,
    b_in: FieldAmplitude,
    bs: &SplitterSpec,
) -> (FieldAmplitude, FieldAmplitude) {
    let (r, t) = (bs.r(), bs.t());
    let c = a_in.scale(r) + b_in.scale(t);
    let d = a_in.scale(t) - b_in.scale(r);
    (c, d)
}

/// Square-law detection, `|α|²` in photons. Nothing is linearized.
pub fn detect(amp: FieldAmplitude) -> f64 {
    amp.intensity()
}

/// One draw of the output signal of `scheme`.
///
/// Differential schemes return the detector difference; `Direct` and
/// `MichelsonAnchored` return the single detector count. `mode_a` is the
/// bright beam and `mode_b` the mode entering the second (vacuum) port.
pub fn mc_delta_n<R: Rng + ?Sized>(
    scheme: &Scheme,
    mode_a: &ModeState,
    mode_b: &ModeState,
    rng: &mut R,
) -> Result<f64> {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    match *scheme {
        Scheme::Direct => Ok(detect(draw_field(mode_a, rng))),
        Scheme::Bhd => Ok(homodyne(mode_a, mode_b, Quadrature::First, rng)),
        Scheme::MichelsonFree { quadrature } => Ok(homodyne(mode_a, mode_b, quadrature, rng)),
        Scheme::Bwdd(imbalance) => {
            // both halves of the wavefront share one fluctuation draw
            let alpha = draw_field(mode_a, rng);
            let up = detect(alpha.scale(imbalance.p().sqrt()));
            let down = detect(alpha.scale(imbalance.q().sqrt()));
            Ok(up - down)
        }
        Scheme::BwddIndependent => {
            let alpha = draw_field(mode_a, rng);
            let alpha_prime = draw_field(mode_a, rng);
            Ok(detect(alpha.scale(half)) - detect(alpha_prime.scale(half)))
        }
        Scheme::MirrorBwdd {
            mirror,
            reflection_phase_pi,
        } => {
            let alpha = draw_field(mode_a, rng);
            let leak = draw_field(mode_b, rng);
            // Leak quadratures are referenced to the reflected beam, so the
            // reflection phase multiplies the whole folded field.
            let folded = alpha.scale(half * mirror.r()) + leak.scale(mirror.t());
            let folded = if reflection_phase_pi {
                folded.scale(-1.0)
            } else {
                folded
            };
            let straight = alpha.scale(half);
            Ok(detect(straight) - detect(folded))
        }
        Scheme::MichelsonAnchored { quadrature } => {
            let alpha = draw_field(mode_a, rng);
            let beta = draw_field(mode_b, rng).aligned(quadrature);
            let (c, _) = beamsplitter_transform(alpha, beta, &SplitterSpec::balanced());
            Ok(detect(c))
        }
        Scheme::Centroid { .. } => Err(Error::Usage(
            "centroiding is only modeled under the state-reduction model".into(),
        )),
    }
}

fn homodyne<R: Rng + ?Sized>(
    mode_a: &ModeState,
    mode_b: &ModeState,
    quadrature: Quadrature,
    rng: &mut R,
) -> f64 {
    let alpha = draw_field(mode_a, rng);
    let beta = draw_field(mode_b, rng).aligned(quadrature);
    let (c, d) = beamsplitter_transform(alpha, beta, &SplitterSpec::balanced());
    detect(c) - detect(d)
}

/// Leading-order mean and variance of the scheme output.
pub fn analytic_variance(
    scheme: &Scheme,
    mode_a: &ModeState,
    mode_b: &ModeState,
) -> Result<Prediction> {
    scheme.validate()?;
    let a = mode_a.amplitude();
    let a2 = a * a;
    let b = mode_b.amplitude();
    let da1 = mode_a.quadrature_variance(Quadrature::First);
    let db1 = mode_b.quadrature_variance(Quadrature::First);
    let prediction = match *scheme {
        Scheme::Direct => Prediction {
            mean: a2,
            variance: 4.0 * a2 * da1,
        },
        Scheme::Bhd => homodyne_prediction(mode_a, mode_b, Quadrature::First),
        Scheme::MichelsonFree { quadrature } => homodyne_prediction(mode_a, mode_b, quadrature),
        Scheme::Bwdd(imbalance) => {
            let k = imbalance.difference();
            Prediction {
                mean: k * a2,
                variance: 4.0 * k * k * a2 * da1,
            }
        }
        Scheme::BwddIndependent => Prediction {
            mean: 0.0,
            variance: 2.0 * a2 * da1,
        },
        Scheme::MirrorBwdd { mirror, .. } => {
            let (r, t) = (mirror.reflectance(), mirror.transmittance());
            let loss = 1.0 - r;
            Prediction {
                mean: 0.5 * loss * a2,
                variance: loss * loss * a2 * da1 + 2.0 * r * t * a2 * db1,
            }
        }
        Scheme::MichelsonAnchored { quadrature } => {
            let dbq = mode_b.quadrature_variance(quadrature);
            let in_phase = match quadrature {
                Quadrature::First => b,
                Quadrature::Second => 0.0,
            };
            Prediction {
                mean: 0.5 * (a + in_phase).powi(2) + 0.5 * (b * b - in_phase * in_phase),
                variance: a2 * (da1 + dbq),
            }
        }
        Scheme::Centroid { .. } => {
            return Err(Error::Usage(
                "centroiding is only modeled under the state-reduction model".into(),
            ))
        }
    };
    Ok(prediction)
}

fn homodyne_prediction(
    mode_a: &ModeState,
    mode_b: &ModeState,
    quadrature: Quadrature,
) -> Prediction {
    let a = mode_a.amplitude();
    let b = mode_b.amplitude();
    let in_phase = match quadrature {
        Quadrature::First => b,
        Quadrature::Second => 0.0,
    };
    Prediction {
        mean: 2.0 * a * in_phase,
        variance: 4.0 * a * a * mode_b.quadrature_variance(quadrature)
            + 4.0 * b * b * mode_a.quadrature_variance(quadrature),
    }
}

/// Single-detector variances and their covariance behind a 50:50 homodyne.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorVariances {
    pub vc: f64,
    pub vd: f64,
    pub cov: f64,
}

impl DetectorVariances {
    /// `V(ΔN) = Vc + Vd − 2·Cov`.
    pub fn difference_variance(&self) -> f64 {
        self.vc + self.vd - 2.0 * self.cov
    }

    pub fn sum(&self) -> f64 {
        self.vc + self.vd
    }
}

/// Each detector sees `a²(δa₁² + δb₁²)`; the two outputs are correlated
/// through `δa` and anti-correlated through `δb`.
pub fn detector_variances_bhd(mode_a: &ModeState, mode_b: &ModeState) -> DetectorVariances {
    let a2 = mode_a.mean_photons();
    let from_a = a2 * mode_a.quadrature_variance(Quadrature::First);
    let from_b = a2 * mode_b.quadrature_variance(Quadrature::First);
    DetectorVariances {
        vc: from_a + from_b,
        vd: from_a + from_b,
        cov: from_a - from_b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::mean_variance;
    use crate::types::Imbalance;

    fn var_of(mut draw: impl FnMut() -> f64, n: usize) -> (f64, f64) {
        let xs: Vec<f64> = (0..n).map(|_| draw()).collect();
        mean_variance(&xs).unwrap()
    }

    #[test]
    fn zero_rms_quadrature_never_fluctuates() {
        let mode = ModeState::new(5.0, 0.0, 0.5).unwrap();
        let mut rng = stream(1, 0);
        for _ in 0..1000 {
            assert_eq!(sample_fluctuations(&mode, &mut rng).d1, 0.0);
        }
    }

    #[test]
    fn coherent_quadrature_variance() {
        let mode = ModeState::coherent(1.0).unwrap();
        let mut rng = stream(2, 0);
        let (_, v) = var_of(|| sample_fluctuations(&mode, &mut rng).d1, 1_000_000);
        assert!((0.2485..=0.2515).contains(&v), "{v}");
    }

    #[test]
    fn squeezed_quadrature_variance() {
        let mode = ModeState::vacuum().with_squeeze(2f64.ln(), Quadrature::First);
        let mut rng = stream(3, 0);
        let draws: Vec<FluctuationSample> = (0..1_000_000)
            .map(|_| sample_fluctuations(&mode, &mut rng))
            .collect();
        let (_, v1) = mean_variance(&draws.iter().map(|s| s.d1).collect::<Vec<_>>()).unwrap();
        let (_, v2) = mean_variance(&draws.iter().map(|s| s.d2).collect::<Vec<_>>()).unwrap();
        // σ(v) ≈ v·√(2/n) ≈ 0.0014·v
        assert!((v1 / 0.0625 - 1.0).abs() < 0.005, "{v1}");
        assert!((v2 / 1.0 - 1.0).abs() < 0.005, "{v2}");
    }

    #[test]
    fn splitter_examples() {
        let bs = SplitterSpec::balanced();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (c, d) = beamsplitter_transform(
            FieldAmplitude::new(1.0, 0.0),
            FieldAmplitude::new(0.0, 0.0),
            &bs,
        );
        assert_eq!((c.re, c.im, d.re, d.im), (h, 0.0, h, 0.0));

        let (c, d) = beamsplitter_transform(
            FieldAmplitude::new(1.0, 0.0),
            FieldAmplitude::new(1.0, 0.0),
            &bs,
        );
        assert!((c.re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((c.im, d.re, d.im), (0.0, 0.0, 0.0));
    }

    #[test]
    fn detect_is_the_full_square() {
        assert_eq!(detect(FieldAmplitude::new(0.0, 0.0)), 0.0);
        assert_eq!(detect(FieldAmplitude::new(3.0, 4.0)), 25.0);
        let mode = ModeState::coherent(1e3).unwrap();
        let amp = FieldAmplitude::of_mode(&mode, FluctuationSample { d1: 0.5, d2: 0.0 });
        assert_eq!(detect(amp), 1_001_000.25);
    }

    #[test]
    fn centroid_is_not_a_mode_scheme() {
        let a = ModeState::coherent(10.0).unwrap();
        let b = ModeState::vacuum();
        let mut rng = stream(0, 0);
        let s = Scheme::Centroid { pixels: 4 };
        assert!(matches!(
            mc_delta_n(&s, &a, &b, &mut rng),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            analytic_variance(&s, &a, &b),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn balanced_wavefront_split_is_identically_zero() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum();
        for seed in 0..20 {
            let mut rng = stream(seed, 0);
            for _ in 0..1000 {
                let dn = mc_delta_n(&Scheme::balanced_bwdd(), &a, &b, &mut rng).unwrap();
                assert_eq!(dn, 0.0);
            }
        }
    }

    #[test]
    fn imbalanced_wavefront_split_tracks_total_intensity() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum();
        let imb = Imbalance::new(0.51, 0.49).unwrap();
        let scheme = Scheme::Bwdd(imb);
        let mut r1 = stream(5, 0);
        let mut r2 = stream(5, 0);
        for _ in 0..1000 {
            let dn = mc_delta_n(&scheme, &a, &b, &mut r1).unwrap();
            let total = detect(draw_field(&a, &mut r2));
            let expected = imb.difference() * total;
            assert!(
                (dn - expected).abs() <= 1e-12 * expected.abs(),
                "{dn} {expected}"
            );
        }
    }

    #[test]
    fn mirror_reflection_phase_drops_out_per_sample() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum();
        let mirror = SplitterSpec::from_reflectance(0.99).unwrap();
        let with_pi = Scheme::MirrorBwdd {
            mirror,
            reflection_phase_pi: true,
        };
        let without = Scheme::MirrorBwdd {
            mirror,
            reflection_phase_pi: false,
        };
        let mut r1 = stream(11, 3);
        let mut r2 = stream(11, 3);
        for _ in 0..10_000 {
            let x = mc_delta_n(&with_pi, &a, &b, &mut r1).unwrap();
            let y = mc_delta_n(&without, &a, &b, &mut r2).unwrap();
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn analytic_examples() {
        let b = ModeState::vacuum();
        let a = ModeState::from_mean_photons(1e4).unwrap();
        let p = analytic_variance(&Scheme::Direct, &a, &b).unwrap();
        assert!((p.variance - 1e4).abs() < 1e-9);
        assert!((p.mean - 1e4).abs() < 1e-9);

        let a = ModeState::from_mean_photons(1e6).unwrap();
        let mirror = Scheme::mirror(0.99).unwrap();
        let p = analytic_variance(&mirror, &a, &b).unwrap();
        let leak: f64 = 2.0 * 0.99 * 0.01 * 1e6 * 0.25;
        assert!((leak - 4950.0).abs() < 1e-9);
        let own = 0.01f64.powi(2) * 1e6 * 0.25;
        assert!((p.variance - (leak + own)).abs() < 1e-6, "{}", p.variance);
        assert!((p.mean - 0.5 * 0.01 * 1e6).abs() < 1e-6);

        let squeezed_b = b.with_squeeze(2f64.ln(), Quadrature::First);
        let p = analytic_variance(&Scheme::Bhd, &a, &squeezed_b).unwrap();
        assert!((p.variance - 2.5e5).abs() < 1e-6, "{}", p.variance);
    }

    #[test]
    fn homodyne_quadrature_selector() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum().with_squeeze(2f64.ln(), Quadrature::First);
        let q1 = analytic_variance(
            &Scheme::MichelsonFree {
                quadrature: Quadrature::First,
            },
            &a,
            &b,
        )
        .unwrap();
        let q2 = analytic_variance(
            &Scheme::MichelsonFree {
                quadrature: Quadrature::Second,
            },
            &a,
            &b,
        )
        .unwrap();
        assert!((q1.variance - 2.5e5).abs() < 1e-6);
        assert!((q2.variance - 4e6).abs() < 1e-6);
        let bhd = analytic_variance(&Scheme::Bhd, &a, &b).unwrap();
        assert_eq!(bhd, q1);
    }

    #[test]
    fn anchored_michelson_is_half_the_free_variance() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum();
        let free = analytic_variance(&Scheme::Bhd, &a, &b).unwrap();
        let anchored = analytic_variance(
            &Scheme::MichelsonAnchored {
                quadrature: Quadrature::First,
            },
            &a,
            &b,
        )
        .unwrap();
        assert_eq!(anchored.variance, 0.5 * free.variance);
        assert_eq!(anchored.mean, 0.5e6);
    }

    #[test]
    fn detector_variances() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum();
        let v = detector_variances_bhd(&a, &b);
        assert_eq!(v.cov, 0.0);
        assert_eq!(v.sum(), 1e6);
        assert_eq!(v.difference_variance(), 1e6);

        let bs = b.with_squeeze(2f64.ln(), Quadrature::First);
        let v = detector_variances_bhd(&a, &bs);
        assert!((v.sum() - 6.25e5).abs() < 1e-6);
        assert!((v.difference_variance() - 2.5e5).abs() < 1e-6);

        let flat_a = ModeState::new(1e3, 0.0, 0.5).unwrap();
        let flat_b = ModeState::new(0.0, 0.0, 0.5).unwrap();
        let v = detector_variances_bhd(&flat_a, &flat_b);
        assert_eq!((v.vc, v.vd, v.cov), (0.0, 0.0, 0.0));
    }

    #[test]
    fn squeeze_zero_matches_unsqueezed() {
        let a = ModeState::from_mean_photons(1e6).unwrap();
        let b = ModeState::vacuum();
        let b0 = b.with_squeeze(0.0, Quadrature::Second);
        for kind in crate::types::SchemeKind::ALL {
            let s = Scheme::default_for(kind);
            if kind == crate::types::SchemeKind::Centroid {
                continue;
            }
            assert_eq!(
                analytic_variance(&s, &a, &b).unwrap(),
                analytic_variance(&s, &a, &b0).unwrap()
            );
        }
    }
}
