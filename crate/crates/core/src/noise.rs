//! Rayleigh-distributed phase-error profiles for a segmented fiber.
//!
//! A fiber of length `L` is split into `segments` homogeneous pieces. Trial
//! `t` of an experiment seeded with `master_seed` draws its phase errors from
//! a ChaCha8 stream keyed by [`mix_seed`]`(master_seed, t)`, so any trial can
//! be regenerated on its own, in any order, on any thread.
//!
//! Raw Rayleigh draws are re-centred by their mean `sigma * sqrt(pi/2)` and
//! shifted by the deterministic drift `mean_phase`, so every segment phase
//! has expectation `mean_phase` regardless of `sigma`.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// How phase errors are correlated along one fiber realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correlation {
    /// `anchor_count` independent draws at equally spaced positions,
    /// linearly interpolated onto the segments.
    #[serde(alias = "IID")]
    Iid,
    /// One draw per trial shared by every segment.
    #[serde(alias = "FULLY_CORRELATED")]
    FullyCorrelated,
}

impl Correlation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Correlation::Iid => "iid",
            Correlation::FullyCorrelated => "fully_correlated",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberSpec {
    /// Total length in meters.
    pub length_m: f64,
    /// Number of homogeneous segments.
    pub segments: usize,
    /// Rayleigh scale parameter (radians).
    pub sigma: f64,
    /// Deterministic per-segment drift (radians).
    pub mean_phase: f64,
    pub correlation: Correlation,
    /// Number of Rayleigh anchors per trial in [`Correlation::Iid`] mode.
    pub anchor_count: usize,
}

impl FiberSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.length_m > 0.0 && self.length_m.is_finite()) {
            return Err(invalid("length_m", "fiber length must be positive"));
        }
        if self.segments == 0 {
            return Err(invalid("segments", "need at least one segment"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(invalid("sigma", "Rayleigh scale must be finite and nonnegative"));
        }
        if !self.mean_phase.is_finite() {
            return Err(invalid("mean_phase", "must be finite"));
        }
        if self.anchor_count == 0 || self.anchor_count > self.segments {
            return Err(invalid(
                "anchor_count",
                format!("must lie in 1..={}", self.segments),
            ));
        }
        Ok(())
    }

    /// `Delta L`
    pub fn segment_length(&self) -> f64 {
        self.length_m / self.segments as f64
    }
}

/// Phase errors `dphi_j` for one Monte Carlo trial.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseProfile {
    deltas: Vec<f64>,
    trial_id: u64,
    master_seed: u64,
}

impl NoiseProfile {
    /// Wraps an explicit phase sequence, e.g. a constant or measured profile.
    pub fn from_deltas(deltas: Vec<f64>, trial_id: u64, master_seed: u64) -> Self {
        Self {
            deltas,
            trial_id,
            master_seed,
        }
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn segments(&self) -> usize {
        self.deltas.len()
    }

    pub fn trial_id(&self) -> u64 {
        self.trial_id
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// First `segments` phases, i.e. the profile of a shorter fiber cut from
    /// the same realization.
    pub fn prefix(&self, segments: usize) -> &[f64] {
        &self.deltas[..segments.min(self.deltas.len())]
    }
}

/// Rayleigh density `x / sigma^2 * exp(-x^2 / (2 sigma^2))`.
pub fn rayleigh_pdf(x: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", "scale must be positive"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(invalid("x", "support is x >= 0"));
    }
    let s2 = sigma * sigma;
    Ok(x / s2 * (-x * x / (2.0 * s2)).exp())
}

/// Inverse-CDF sample `sigma * sqrt(-2 ln(1 - u))`.
pub fn sample_rayleigh(u: f64, sigma: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(invalid("u", "uniform variate must lie in (0, 1)"));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", "scale must be finite and nonnegative"));
    }
    Ok(sigma * (-2.0 * (-u).ln_1p()).sqrt())
}

/// `sigma * sqrt(pi / 2)`
pub fn rayleigh_mean(sigma: f64) -> f64 {
    sigma * (std::f64::consts::PI / 2.0).sqrt()
}

/// `(4 - pi) / 2 * sigma^2`
pub fn rayleigh_variance(sigma: f64) -> f64 {
    (4.0 - std::f64::consts::PI) / 2.0 * sigma * sigma
}

/// Per-trial seed: the SplitMix64 finalizer applied to
/// `master_seed + (trial_id + 1) * 0x9E3779B97F4A7C15` (wrapping).
///
/// Test vectors:
/// `mix_seed(0, 0) = 0xE220A8397B1DCDAF`,
/// `mix_seed(42, 7) = 0xCCF635EE9E9E2FA4`.
pub fn mix_seed(master_seed: u64, trial_id: u64) -> u64 {
    let mut z = master_seed.wrapping_add(trial_id.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random stream used for trial `trial_id`.
pub fn trial_rng(master_seed: u64, trial_id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master_seed, trial_id))
}

fn draw(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    let u: f64 = rng.sample(Open01);
    // u is in (0, 1) by construction of Open01
    sigma * (-2.0 * (-u).ln_1p()).sqrt()
}

/// Regenerates the phase profile of one trial.
pub fn generate_noise_profile(spec: &FiberSpec, master_seed: u64, trial_id: u64) -> Result<NoiseProfile> {
    spec.validate()?;
    let mut rng = trial_rng(master_seed, trial_id);
    let centre = rayleigh_mean(spec.sigma);
    let n = spec.segments;
    let deltas = match spec.correlation {
        Correlation::FullyCorrelated => {
            let shared = spec.mean_phase + (draw(&mut rng, spec.sigma) - centre);
            vec![shared; n]
        }
        Correlation::Iid => {
            let anchors: Vec<f64> = (0..spec.anchor_count).map(|_| draw(&mut rng, spec.sigma)).collect();
            interpolate_anchors(&anchors, n)
                .into_iter()
                .map(|v| spec.mean_phase + (v - centre))
                .collect()
        }
    };
    Ok(NoiseProfile {
        deltas,
        trial_id,
        master_seed,
    })
}

/// Linear interpolation of `anchors`, placed at equally spaced segment
/// indices `0 ..= n-1`, onto every segment. With as many anchors as
/// segments the anchors are returned unchanged.
fn interpolate_anchors(anchors: &[f64], n: usize) -> Vec<f64> {
    let a = anchors.len();
    if a == 1 {
        return vec![anchors[0]; n];
    }
    let span = (a - 1) as f64;
    let denom = (n - 1) as f64;
    (0..n)
        .map(|j| {
            let pos = (j * (a - 1)) as f64 / denom;
            let idx = (pos.floor() as usize).min(a - 2);
            let t = pos - idx as f64;
            debug_assert!(pos <= span);
            anchors[idx] * (1.0 - t) + anchors[idx + 1] * t
        })
        .collect()
}

/// Weight of each anchor in the sum of the first `prefix` interpolated
/// segments, i.e. `sum_{j < prefix} interp_j = sum_a w_a * anchor_a`.
pub(crate) fn prefix_anchor_weights(anchor_count: usize, segments: usize, prefix: usize) -> Vec<f64> {
    let mut w = vec![0.0; anchor_count];
    if anchor_count == 1 {
        w[0] = prefix.min(segments) as f64;
        return w;
    }
    let denom = (segments - 1) as f64;
    for j in 0..prefix.min(segments) {
        let pos = (j * (anchor_count - 1)) as f64 / denom;
        let idx = (pos.floor() as usize).min(anchor_count - 2);
        let t = pos - idx as f64;
        w[idx] += 1.0 - t;
        w[idx + 1] += t;
    }
    w
}

/// Pooled per-segment sample statistics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileStatistics {
    /// Average over segments of the across-trial mean.
    pub mean: f64,
    /// Average over segments of the unbiased across-trial variance.
    pub variance: f64,
}

/// Pooled per-segment sample mean and variance of a set of profiles that
/// share one [`FiberSpec`].
pub fn profile_statistics(profiles: &[NoiseProfile]) -> Result<ProfileStatistics> {
    if profiles.len() < 2 {
        return Err(Error::EmptyInput("profile statistics need at least two profiles"));
    }
    let n = profiles[0].segments();
    if n == 0 || profiles.iter().any(|p| p.segments() != n) {
        return Err(invalid("profiles", "profiles must share a nonzero segment count"));
    }
    let mut acc = SegmentMoments::new(n);
    for p in profiles {
        acc.push(p.deltas());
    }
    Ok(acc.finish())
}

/// Streaming per-segment Welford accumulator with an order-fixed merge.
#[derive(Clone, Debug)]
pub(crate) struct SegmentMoments {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl SegmentMoments {
    pub(crate) fn new(segments: usize) -> Self {
        Self {
            count: 0,
            mean: vec![0.0; segments],
            m2: vec![0.0; segments],
        }
    }

    pub(crate) fn push(&mut self, deltas: &[f64]) {
        self.count += 1;
        let c = self.count as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(deltas) {
            let d = x - *m;
            *m += d / c;
            *s += d * (x - *m);
        }
    }

    pub(crate) fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += other.m2[i] + d * d * na * nb / n;
        }
        self.count += other.count;
    }

    pub(crate) fn count(&self) -> u64 {
        self.count
    }

    pub(crate) fn finish(&self) -> ProfileStatistics {
        let segs = self.mean.len() as f64;
        let mean = self.mean.iter().sum::<f64>() / segs;
        let variance = if self.count < 2 {
            0.0
        } else {
            self.m2.iter().sum::<f64>() / segs / (self.count - 1) as f64
        };
        ProfileStatistics { mean, variance }
    }
}
