//! Statistical checks of the noise model and of the Monte Carlo estimators.

use oam_dephasing::harness::{compare_analytic, compare_config, run_experiment, CompareStatus};
use oam_dephasing::noise::{
    generate_noise_profile, profile_statistics, rayleigh_mean, rayleigh_pdf, rayleigh_variance, Correlation, FiberSpec,
};
use oam_dephasing::Executor;

fn fiber(segments: usize, anchors: usize, correlation: Correlation, sigma: f64) -> FiberSpec {
    FiberSpec {
        length_m: 10.0,
        segments,
        sigma,
        mean_phase: 0.25,
        correlation,
        anchor_count: anchors,
    }
}

/// Composite Simpson rule on `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

#[test]
fn rayleigh_pdf_integrates_to_its_cdf() {
    let sigma = 0.4;
    let mass = simpson(|x| rayleigh_pdf(x, sigma).unwrap(), 0.0, 5.0 * sigma, 20_000);
    assert!((mass - (1.0 - (-12.5f64).exp())).abs() < 1e-9, "mass {mass}");
}

#[test]
fn one_anchor_per_segment_is_rayleigh_distributed() {
    // Kolmogorov-Smirnov against the Rayleigh CDF; 1.95/sqrt(n) is the
    // 0.1% critical value.
    let sigma = 0.3;
    let n = 20_000;
    let spec = fiber(n, n, Correlation::Iid, sigma);
    for trial in 0..3 {
        let profile = generate_noise_profile(&spec, 5, trial).unwrap();
        let shift = rayleigh_mean(sigma) - spec.mean_phase;
        let mut xs: Vec<f64> = profile.deltas().iter().map(|d| d + shift).collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let cdf = 1.0 - (-x * x / (2.0 * sigma * sigma)).exp();
                (cdf - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 1.95 / (n as f64).sqrt(), "KS statistic {d} on trial {trial}");
    }
}

#[test]
fn correlated_profiles_recover_the_rayleigh_variance() {
    let sigma = 0.2;
    let spec = fiber(4, 1, Correlation::FullyCorrelated, sigma);
    let profiles: Vec<_> = (0..100_000).map(|t| generate_noise_profile(&spec, 17, t).unwrap()).collect();
    let stats = profile_statistics(&profiles).unwrap();
    assert!((stats.variance / rayleigh_variance(sigma) - 1.0).abs() < 0.02, "{stats:?}");
    assert!((stats.mean - spec.mean_phase).abs() < 4.0 * (rayleigh_variance(sigma) / 1e5).sqrt());
}

#[test]
fn standard_error_halves_when_trials_quadruple() {
    let base = {
        let mut cfg = compare_config(1.5).unwrap();
        cfg.fiber.segments = 100;
        cfg.sample_points = 2;
        cfg
    };
    let mut ratios = Vec::new();
    for seed in 0..8 {
        let se = |trials| {
            let mut cfg = base.clone();
            cfg.trials = trials;
            cfg.master_seed = seed;
            run_experiment(&cfg, Executor::default()).unwrap().rows.last().unwrap().stderr_mc
        };
        ratios.push(se(1000) / se(4000));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean / 2.0 - 1.0).abs() < 0.2, "ratios {ratios:?}");
}

#[test]
fn correlated_decay_matches_the_gaussian_law_for_several_orders() {
    let mut cfg = compare_config(0.1).unwrap();
    cfg.l_values = vec![1, 2, 3];
    cfg.trials = 20_000;
    cfg.master_seed = 3;
    let rows = compare_analytic(&cfg, Executor::default()).unwrap();
    assert_eq!(rows.len(), 30);
    for r in rows {
        assert_eq!(r.status, CompareStatus::Pass, "{r:?}");
    }
}
