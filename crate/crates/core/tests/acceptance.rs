//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p oam-dephasing --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand::distributions::Open01;
use rand_chacha::ChaCha8Rng;

use oam_dephasing::harness::{
    compare_analytic, compare_config, run_experiment, sweep_l, to_csv_string, CompareStatus, Preset,
    COMPARE_IN_REGIME, COMPARE_OUT_OF_REGIME,
};
use oam_dephasing::noise::{
    generate_noise_profile, rayleigh_mean, rayleigh_variance, sample_rayleigh, trial_rng, Correlation, FiberSpec,
};
use oam_dephasing::propagation::{ensemble_density, propagate_segments, segment_operator, ScheduleSpec};
use oam_dephasing::qstate::{lg_radial, make_superposition_state, LGModeParams, StateVector2};
use oam_dephasing::Executor;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pooled(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

fn ac1_free_evolution() -> Outcome {
    let start = Instant::now();
    let curve = Preset::Fig1.run(&Preset::Fig1.config(), Executor::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut ok = elapsed < Duration::from_secs(60);
    let mut parts = Vec::new();
    for l in [1, 2, 10, 50, 100] {
        let f = curve.end_of_fiber(l).ok_or(format!("no row for l={l}"))?.fidelity_mc;
        ok &= (f - 0.5).abs() <= 0.02;
        parts.push(format!("F({l})={f:.4}"));
    }
    check(ok, format!("{} in {:.1}s", parts.join(" "), elapsed.as_secs_f64()))
}

fn ac2_cpmg_low_l() -> Outcome {
    let curve = Preset::Fig2.run(&Preset::Fig2.config(), Executor::default()).map_err(|e| e.to_string())?;
    let worst = curve.rows.iter().map(|r| r.fidelity_mc).fold(1.0, f64::min);
    let max_d = curve.rows.iter().map(|r| r.distance_m).fold(0.0, f64::max);
    check(
        worst >= 0.99 && max_d == 500.0,
        format!("min F over {} distances up to {max_d} m = {worst:.5}", curve.rows.len()),
    )
}

fn ac3_ordering() -> Outcome {
    // one run over all three orders shares every trial's profile
    let mut cfg = Preset::Fig3.config();
    cfg.l_values = vec![2, 10, 50];
    let curve = sweep_l(&cfg, Executor::default()).map_err(|e| e.to_string())?;
    let row = |l| curve.end_of_fiber(l).copied().ok_or(format!("no row for l={l}"));
    let (a, b, c) = (row(2)?, row(10)?, row(50)?);
    let gap1 = (a.fidelity_mc - b.fidelity_mc) / pooled(a.stderr_mc, b.stderr_mc);
    let gap2 = (b.fidelity_mc - c.fidelity_mc) / pooled(b.stderr_mc, c.stderr_mc);
    check(
        gap1 > 3.0 && gap2 > 3.0,
        format!(
            "F(2)={:.4} F(10)={:.4} F(50)={:.4}, gaps {gap1:.1} and {gap2:.1} pooled SE",
            a.fidelity_mc, b.fidelity_mc, c.fidelity_mc
        ),
    )
}

fn ac4_collapse() -> Outcome {
    let curve = Preset::Fig5.run(&Preset::Fig5.config(), Executor::default()).map_err(|e| e.to_string())?;
    let rows = &curve.rows;
    let small_ok = rows.iter().filter(|r| r.l <= 3).all(|r| r.fidelity_mc >= 0.99);
    let first_mixed = rows.iter().find(|r| r.fidelity_mc <= 0.52).map(|r| r.l);
    let mut worst_rise = f64::NEG_INFINITY;
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            let rise = (b.fidelity_mc - a.fidelity_mc) / pooled(a.stderr_mc, b.stderr_mc).max(f64::MIN_POSITIVE);
            worst_rise = worst_rise.max(rise);
        }
    }
    check(
        small_ok && first_mixed.is_some_and(|l| l < 100) && worst_rise <= 3.0,
        format!(
            "F(1..3)>=0.99: {small_ok}, first l with F<=0.52: {first_mixed:?}, largest rise {worst_rise:.2} pooled SE"
        ),
    )
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `-ln(2 |rho_01|)` after free evolution over `n` fully correlated segments.
fn coherence_loss(sigma: f64, n: usize, l: i32, trials: u64) -> Result<f64, String> {
    let fiber = FiberSpec {
        length_m: n as f64,
        segments: n,
        sigma,
        mean_phase: 0.0,
        correlation: Correlation::FullyCorrelated,
        anchor_count: 1,
    };
    let profiles = (0..trials)
        .map(|t| generate_noise_profile(&fiber, 2016, t))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let psi = make_superposition_state(l, 0.3).map_err(|e| e.to_string())?;
    let rho = ensemble_density(&psi, &profiles, l, &ScheduleSpec::free()).map_err(|e| e.to_string())?;
    Ok(-(2.0 * rho.rho01().norm()).ln())
}

fn ac5_analytic_agreement() -> Outcome {
    let cfg = compare_config(COMPARE_IN_REGIME).map_err(|e| e.to_string())?;
    let rows = compare_analytic(&cfg, Executor::default()).map_err(|e| e.to_string())?;
    let all_pass = rows.iter().all(|r| r.status == CompareStatus::Pass);
    let worst = rows
        .iter()
        .map(|r| r.abs_error / r.stderr_mc)
        .fold(0.0, f64::max);

    let mut flagged = compare_config(COMPARE_OUT_OF_REGIME).map_err(|e| e.to_string())?;
    flagged.trials = 500;
    let guard = compare_analytic(&flagged, Executor::default())
        .map_err(|e| e.to_string())?
        .iter()
        .all(|r| r.status == CompareStatus::OutOfRegime);

    // n l sqrt(dphi2) runs from 0.1 to 1 over both fits
    let sigma = compare_config(1.0).map_err(|e| e.to_string())?.fiber.sigma;
    let trials = 10_000;
    let by_n = (1..=10)
        .map(|k| Ok((k as f64, coherence_loss(sigma, 100 * k, 1, trials)?)))
        .collect::<Result<Vec<_>, String>>()?;
    let by_l = [1, 2, 3, 5, 7, 10]
        .into_iter()
        .map(|l| Ok((f64::from(l), coherence_loss(sigma, 100, l, trials)?)))
        .collect::<Result<Vec<_>, String>>()?;
    let (sn, sl) = (log_slope(&by_n), log_slope(&by_l));
    check(
        all_pass && guard && (sn - 2.0).abs() <= 0.1 && (sl - 2.0).abs() <= 0.1,
        format!(
            "{} rows pass: {all_pass} (max |err| = {worst:.2} SE), out-of-regime flagged: {guard}, exponent vs n {sn:.3}, vs l {sl:.3}",
            rows.len()
        ),
    )
}

fn ac6_refocusing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let pulses = 2 * rng.gen_range(1..=50);
        let segments = pulses + rng.gen_range(0..=300);
        let delta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let l = rng.gen_range(1..=100) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let psi = make_superposition_state(l, rng.gen_range(0.0..6.3)).map_err(|e| e.to_string())?;
        let out = propagate_segments(&psi, &vec![delta; segments], l, &ScheduleSpec::cpmg(pulses))
            .map_err(|e| e.to_string())?;
        worst = worst.max((1.0 - psi.overlap_sqr(&out.final_state)).abs());
    }
    check(worst <= 1e-12, format!("max |1 - F| over 1000 cases = {worst:.2e}"))
}

fn ac7_unitarity_and_trace() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut psi = StateVector2::from_amplitudes(Complex64::new(0.6, 0.1), Complex64::new(-0.3, 0.7))
        .map_err(|e| e.to_string())?;
    for _ in 0..1_000_000 {
        let op = segment_operator(rng.gen_range(-10.0..10.0), rng.gen_range(1..=100));
        psi = psi.apply(&op);
    }
    let drift = (psi.norm_sqr().sqrt() - 1.0).abs();

    let mut worst_trace: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for case in 0..200u64 {
        let fiber = FiberSpec {
            length_m: 100.0,
            segments: rng.gen_range(20..=200),
            sigma: rng.gen_range(0.0..0.5),
            mean_phase: rng.gen_range(-0.1..0.1),
            correlation: if case % 2 == 0 { Correlation::Iid } else { Correlation::FullyCorrelated },
            anchor_count: rng.gen_range(2..=20),
        };
        let profiles = (0..64)
            .map(|t| generate_noise_profile(&fiber, case, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let l = rng.gen_range(1..=100);
        let schedule = if case % 3 == 0 { ScheduleSpec::free() } else { ScheduleSpec::cpmg(2 * rng.gen_range(1..=10)) };
        let psi0 = make_superposition_state(l, rng.gen_range(0.0..6.3)).map_err(|e| e.to_string())?;
        let rho = ensemble_density(&psi0, &profiles, l, &schedule).map_err(|e| e.to_string())?;
        worst_trace = worst_trace.max((rho.trace() - 1.0).abs());
        min_eig = min_eig.min(rho.eigenvalues().0.min(rho.eigenvalues().1));
    }
    check(
        drift < 1e-9 && worst_trace <= 1e-12 && min_eig >= -1e-12,
        format!("norm drift {drift:.2e} after 1e6 steps, max |tr - 1| {worst_trace:.2e}, min eigenvalue {min_eig:.2e}"),
    )
}

fn rayleigh_stream(sigma: f64, n: usize) -> Vec<f64> {
    let mut rng = trial_rng(8, 0);
    (0..n)
        .map(|_| sample_rayleigh(rng.sample(Open01), sigma).expect("u in (0, 1)"))
        .collect()
}

fn ac8_rayleigh() -> Outcome {
    let sigma = 0.7;
    let xs = rayleigh_stream(sigma, 1_000_000);
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let mean_err = (mean / rayleigh_mean(sigma) - 1.0).abs();
    let var_err = (var / rayleigh_variance(sigma) - 1.0).abs();
    let again = rayleigh_stream(sigma, 1_000_000);
    let bits_equal = xs.iter().zip(&again).all(|(a, b)| a.to_bits() == b.to_bits());
    let fiber = Preset::fiber();
    let p1 = generate_noise_profile(&fiber, 99, 1234).map_err(|e| e.to_string())?;
    let p2 = generate_noise_profile(&fiber, 99, 1234).map_err(|e| e.to_string())?;
    let profiles_equal = p1.deltas().iter().zip(p2.deltas()).all(|(a, b)| a.to_bits() == b.to_bits());
    check(
        mean_err <= 0.005 && var_err <= 0.01 && bits_equal && profiles_equal,
        format!(
            "mean rel. error {mean_err:.2e}, variance rel. error {var_err:.2e}, bit-identical rerun: {}",
            bits_equal && profiles_equal
        ),
    )
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40)
}

fn ac9_lg_modes() -> Outcome {
    let (w0, k) = (1.3e-3, 2.0 * std::f64::consts::PI / 1.55e-6);
    let z = 0.7 * 0.5 * k * w0 * w0;
    let mode = |p, l| LGModeParams { p, l, w0, k, z };
    let mut worst: f64 = 0.0;
    for l in -3..=3 {
        for p in 0..=2 {
            for q in 0..=2 {
                let (a, b) = (mode(p, l), mode(q, l));
                let width = a.beam_width();
                let integrand = |part: fn(Complex64) -> f64| {
                    move |r: f64| {
                        let v = lg_radial(&a, r).expect("valid mode") * lg_radial(&b, r).expect("valid mode").conj();
                        part(v) * r
                    }
                };
                let re = adaptive_simpson(&integrand(|c| c.re), 0.0, 12.0 * width, 1e-10);
                let im = adaptive_simpson(&integrand(|c| c.im), 0.0, 12.0 * width, 1e-10);
                let target = if p == q { 1.0 } else { 0.0 };
                worst = worst.max(Complex64::new(re - target, im).norm());
            }
        }
    }
    let mut gouy_exact = true;
    for p in 0..=4 {
        for l in -5..=5 {
            let at_zr = LGModeParams { p, l, w0, k, z: 0.5 * k * w0 * w0 };
            let expected = f64::from(2 * p + l.unsigned_abs() + 1) * std::f64::consts::FRAC_PI_4;
            gouy_exact &= at_zr.gouy_phase() == expected;
        }
    }
    check(
        worst <= 1e-6 && gouy_exact,
        format!("max orthonormality defect {worst:.2e} (p, p' <= 2, |l| <= 3), Gouy phase at z_R exact: {gouy_exact}"),
    )
}

fn ac10_reproducibility() -> Outcome {
    let mut cfg = Preset::Fig3.config();
    cfg.l_values = vec![2, 10, 50];
    cfg.trials = 1000;
    let csv = |exec| run_experiment(&cfg, exec).map(|c| to_csv_string(&c)).map_err(|e| e.to_string());
    let reference = csv(Executor::Workers(1))?;
    let same = [Executor::Workers(4), Executor::Workers(8), Executor::Sequential]
        .into_iter()
        .map(csv)
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|c| *c == reference);
    check(
        same,
        format!("{} CSV bytes identical on 1, 4 and 8 workers and sequentially: {same}", reference.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("free evolution reaches 0.5", ac1_free_evolution),
        ("CPMG keeps l=2 above 0.99", ac2_cpmg_low_l),
        ("fidelity falls with l at fixed budget", ac3_ordering),
        ("CPMG collapses at large l", ac4_collapse),
        ("Monte Carlo matches closed form", ac5_analytic_agreement),
        ("constant noise refocuses exactly", ac6_refocusing),
        ("unitarity and trace", ac7_unitarity_and_trace),
        ("Rayleigh sampler", ac8_rayleigh),
        ("LG orthonormality and Gouy phase", ac9_lg_modes),
        ("worker-count independent CSV", ac10_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("AC{:<2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
