//! Closed-form predictions checked against seeded Monte Carlo runs.

use shotnoise_core::experiments::{centroid, run_experiment};
use shotnoise_core::rng::stream;
use shotnoise_core::state_model::{self, pixel_profile, sample_pixel_counts, sample_poisson};
use shotnoise_core::stats::{covariance, mean_variance};
use shotnoise_core::units::photon_energy;
use shotnoise_core::{ExperimentConfig, Imbalance, Model, Quadrature, Scheme, SqueezeSpec};

const HENE: f64 = 633e-9;
const WINDOW: f64 = 1e-6;

fn power_for(mean_photons: f64) -> f64 {
    mean_photons / WINDOW * photon_energy(HENE).unwrap()
}

fn config(
    scheme: Scheme,
    model: Model,
    mean_photons: f64,
    samples: usize,
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig::new(
        scheme,
        model,
        power_for(mean_photons),
        HENE,
        WINDOW,
        samples,
        seed,
    )
}

#[test]
fn every_mode_scheme_matches_its_closed_form() {
    let schemes = [
        Scheme::Direct,
        Scheme::Bhd,
        Scheme::Bwdd(Imbalance::new(0.6, 0.4).unwrap()),
        Scheme::BwddIndependent,
        Scheme::mirror(0.99).unwrap(),
        Scheme::mirror(0.8).unwrap(),
        Scheme::MichelsonFree {
            quadrature: Quadrature::Second,
        },
        Scheme::MichelsonAnchored {
            quadrature: Quadrature::First,
        },
        Scheme::MichelsonAnchored {
            quadrature: Quadrature::Second,
        },
    ];
    for (i, scheme) in schemes.into_iter().enumerate() {
        let r = run_experiment(&config(
            scheme,
            Model::ModeFluctuation,
            1e6,
            100_000,
            100 + i as u64,
        ))
        .unwrap();
        let se = r.analytic_variance * (2.0 / r.samples as f64).sqrt();
        let z = (r.empirical_variance - r.analytic_variance) / se;
        assert!(z.abs() < 4.0, "{}: z = {z} ({r:?})", scheme.name());
        let mz = (r.empirical_mean - r.analytic_mean) / r.mean_stderr;
        assert!(mz.abs() < 4.0, "{}: mean z = {mz} ({r:?})", scheme.name());
    }
}

#[test]
fn every_state_scheme_matches_its_closed_form() {
    let schemes = [
        Scheme::Direct,
        Scheme::Bhd,
        Scheme::Bwdd(Imbalance::new(0.6, 0.4).unwrap()),
        Scheme::BwddIndependent,
        Scheme::mirror(0.99).unwrap(),
        Scheme::MichelsonAnchored {
            quadrature: Quadrature::First,
        },
        Scheme::Centroid { pixels: 12 },
    ];
    for (i, scheme) in schemes.into_iter().enumerate() {
        let r = run_experiment(&config(
            scheme,
            Model::StateReduction,
            1e6,
            100_000,
            200 + i as u64,
        ))
        .unwrap();
        let se = r.analytic_variance * (2.0 / r.samples as f64).sqrt();
        let z = (r.empirical_variance - r.analytic_variance) / se;
        assert!(z.abs() < 4.0, "{}: z = {z} ({r:?})", scheme.name());
    }
}

#[test]
fn squeezed_anchored_michelson_keeps_the_a_mode_noise() {
    let mut cfg = config(
        Scheme::MichelsonAnchored {
            quadrature: Quadrature::First,
        },
        Model::ModeFluctuation,
        1e6,
        100_000,
        9,
    );
    cfg.squeeze = SqueezeSpec::on_b(2f64.ln());
    let r = run_experiment(&cfg).unwrap();
    // a²δa² + e^(−2s)a²δb² = 2.5e5 + 6.25e4
    assert!((r.analytic_variance - 3.125e5).abs() < 1e-6);
    assert!((r.empirical_variance / 3.125e5 - 1.0).abs() < 0.05);
}

#[test]
fn models_agree_for_direct_and_homodyne_at_every_power() {
    for (i, n) in [1e4, 1e5, 1e6, 1e7].into_iter().enumerate() {
        for scheme in [Scheme::Direct, Scheme::Bhd] {
            let seed = 300 + i as u64;
            let m =
                run_experiment(&config(scheme, Model::ModeFluctuation, n, 100_000, seed)).unwrap();
            let s =
                run_experiment(&config(scheme, Model::StateReduction, n, 100_000, seed)).unwrap();
            let combined = m.variance_stderr.hypot(s.variance_stderr);
            let gap = (m.empirical_variance - s.empirical_variance).abs();
            assert!(
                gap < 4.0 * combined,
                "{} at {n}: {gap} vs {combined}",
                scheme.name()
            );
        }
    }
}

#[test]
fn thinned_marginals_match_direct_poisson() {
    let n = 100_000;
    let mean = 1e3;
    let mut rng = stream(17, 0);
    let split: Vec<_> = (0..n)
        .map(|_| state_model::sample_split_counts(mean, 0.3, &mut rng).unwrap())
        .collect();
    let mut rng = stream(18, 0);
    let direct_c: Vec<f64> = (0..n)
        .map(|_| sample_poisson(0.3 * mean, &mut rng).unwrap() as f64)
        .collect();
    let c: Vec<f64> = split.iter().map(|s| s.n_c as f64).collect();
    let d: Vec<f64> = split.iter().map(|s| s.n_d as f64).collect();
    let (mc, vc) = mean_variance(&c).unwrap();
    let (md, vd) = mean_variance(&d).unwrap();
    let (mx, vx) = mean_variance(&direct_c).unwrap();
    let se_mean = |v: f64| (v / n as f64).sqrt();
    let se_var = |v: f64| v * (2.0 / n as f64).sqrt();
    assert!((mc - mx).abs() < 4.0 * se_mean(300.0) * 2f64.sqrt());
    assert!((vc - vx).abs() < 4.0 * se_var(300.0) * 2f64.sqrt());
    assert!((md - 700.0).abs() < 4.0 * se_mean(700.0));
    assert!((vd - 700.0).abs() < 4.0 * se_var(700.0));
    let cov = covariance(&c, &d).unwrap();
    assert!(cov.abs() < 4.0 * (300.0f64 * 700.0 / n as f64).sqrt());
}

#[test]
fn centroid_difference_of_sampled_beam_is_shot_noise() {
    // brute force: repeated Poisson pixel frames, split at the fiducial pixel
    let profile = pixel_profile(20);
    let mut rng = stream(23, 0);
    let deltas: Vec<f64> = (0..10_000)
        .map(|_| {
            let frame = sample_pixel_counts(&profile, 1e6, &mut rng).unwrap();
            centroid(&frame).unwrap().delta_n
        })
        .collect();
    let (_, v) = mean_variance(&deltas).unwrap();
    assert!((v / 1e6 - 1.0).abs() < 0.05, "{v}");
}
