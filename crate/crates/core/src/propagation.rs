//! Segment-by-segment propagation with optional CPMG refocusing.
//!
//! Each homogeneous segment with phase error `dphi` acts on the qubit as
//! `diag(e^{i l dphi / 2}, e^{-i l dphi / 2})`. A Dove prism exchanges the
//! `+l` and `-l` modes, which flips the sign of every later phase
//! contribution as seen from the input frame. Segments are homogeneous, so a
//! pulse that falls inside a segment splits its phase in proportion to the
//! two pieces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exec::Executor;
use crate::noise::NoiseProfile;
use crate::qstate::{DensityMatrix2, Operator2, StateVector2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[serde(alias = "FREE")]
    Free,
    #[serde(alias = "CPMG")]
    Cpmg,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Free => "FREE",
            Scheme::Cpmg => "CPMG",
        }
    }
}

/// Where CPMG pulses land relative to segment boundaries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Pulse `k` of `N` sits at exactly `(2k-1)/(2N)` of the fiber, splitting
    /// the segment it falls in.
    #[default]
    Exact,
    /// Pulse positions are rounded to the nearest segment boundary; two
    /// pulses on one boundary is an error.
    NearestBoundary,
}

impl Placement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Placement::Exact => "exact",
            Placement::NearestBoundary => "nearest_boundary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleSpec {
    pub scheme: Scheme,
    pub pulse_count: usize,
    pub placement: Placement,
}

impl ScheduleSpec {
    pub fn free() -> Self {
        Self {
            scheme: Scheme::Free,
            pulse_count: 0,
            placement: Placement::Exact,
        }
    }

    pub fn cpmg(pulse_count: usize) -> Self {
        Self {
            scheme: Scheme::Cpmg,
            pulse_count,
            placement: Placement::Exact,
        }
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.scheme {
            Scheme::Free if self.pulse_count != 0 => {
                Err(invalid("pulse_count", "FREE evolution takes no pulses"))
            }
            Scheme::Cpmg if self.pulse_count < 2 || !self.pulse_count.is_multiple_of(2) => Err(invalid(
                "pulse_count",
                "CPMG needs an even pulse count of at least 2",
            )),
            _ => Ok(()),
        }
    }

    /// Pulse positions in segment units (`0.0` is the fiber input, `segments`
    /// its output) for a fiber of `segments` segments.
    pub fn pulse_positions(&self, segments: usize) -> Result<Vec<f64>> {
        self.validate()?;
        if self.pulse_count == 0 {
            return Ok(Vec::new());
        }
        if segments < self.pulse_count {
            return Err(Error::ScheduleMismatch(format!(
                "{} pulses need at least as many segments, profile has {segments}",
                self.pulse_count
            )));
        }
        let n = self.pulse_count as f64;
        let m = segments as f64;
        let exact = (1..=self.pulse_count).map(|k| (2 * k - 1) as f64 * m / (2.0 * n));
        match self.placement {
            Placement::Exact => Ok(exact.collect()),
            Placement::NearestBoundary => {
                let snapped: Vec<f64> = exact.map(f64::round).collect();
                if let Some(w) = snapped.windows(2).find(|w| w[0] == w[1]) {
                    return Err(Error::ScheduleMismatch(format!(
                        "two pulses collide on segment boundary {}",
                        w[0]
                    )));
                }
                Ok(snapped)
            }
        }
    }

    /// Sign-weighted length `sum_j s_j * piece_j` of the fiber, in segments,
    /// where `s` flips at each pulse. Equals `segments` for free evolution
    /// and zero for exactly placed CPMG.
    pub fn net_segment_weight(&self, segments: usize) -> Result<f64> {
        let ones = vec![1.0; segments];
        let mut net = 0.0;
        walk(&ones, &self.pulse_positions(segments)?, |step| {
            if let Step::Piece { phase, sign } = step {
                net += sign * phase;
            }
        });
        Ok(net)
    }
}

/// Output of a single-trajectory propagation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationResult {
    pub final_state: StateVector2,
    /// Net relative phase `sum_j s_j l dphi_j` between the arms, in the input
    /// frame.
    pub accumulated_phase: f64,
}

/// `diag(e^{i l dphi/2}, e^{-i l dphi/2})`
pub fn segment_operator(delta_phi: f64, l: i32) -> Operator2 {
    let half = 0.5 * f64::from(l) * delta_phi;
    Operator2::diagonal(Complex64::cis(half), Complex64::cis(-half))
}

/// Mode exchange `|+l> <-> |-l>` implemented by a Dove prism.
pub fn dove_prism_pulse() -> Operator2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    Operator2::new([[zero, one], [one, zero]])
}

enum Step {
    /// Free evolution accumulating `phase` (already scaled by the piece
    /// fraction) with frame sign `sign`.
    Piece { phase: f64, sign: f64 },
    Pulse,
}

/// Visits the fiber in order, emitting a [`Step::Piece`] for every
/// free-evolution piece and a [`Step::Pulse`] at every pulse.
fn walk(deltas: &[f64], pulses: &[f64], mut visit: impl FnMut(Step)) {
    let mut next = 0;
    let mut sign = 1.0;
    for (j, &d) in deltas.iter().enumerate() {
        let base = j as f64;
        let end = base + 1.0;
        let mut start = 0.0;
        while next < pulses.len() && pulses[next] < end {
            let frac = (pulses[next] - base).max(start);
            if frac > start {
                visit(Step::Piece { phase: (frac - start) * d, sign });
            }
            visit(Step::Pulse);
            sign = -sign;
            start = frac;
            next += 1;
        }
        if start == 0.0 {
            visit(Step::Piece { phase: d, sign });
        } else if start < 1.0 {
            visit(Step::Piece { phase: (1.0 - start) * d, sign });
        }
    }
    for _ in next..pulses.len() {
        visit(Step::Pulse);
    }
}

/// Propagates `psi` through the segment phases `deltas` under `schedule`.
pub fn propagate_segments(
    psi: &StateVector2,
    deltas: &[f64],
    l: i32,
    schedule: &ScheduleSpec,
) -> Result<PropagationResult> {
    if l == 0 {
        return Err(invalid("l", "azimuthal order must be nonzero"));
    }
    let pulses = schedule.pulse_positions(deltas.len())?;
    let flip = dove_prism_pulse();
    let lf = f64::from(l);
    let mut state = *psi;
    let mut accumulated = 0.0;
    walk(deltas, &pulses, |step| match step {
        Step::Piece { phase, sign } => {
            state = state.apply(&segment_operator(phase, l));
            accumulated += sign * lf * phase;
        }
        Step::Pulse => state = state.apply(&flip),
    });
    Ok(PropagationResult {
        final_state: state,
        accumulated_phase: accumulated,
    })
}

/// Propagates `psi` through a full noise profile.
pub fn propagate(
    psi: &StateVector2,
    profile: &NoiseProfile,
    l: i32,
    schedule: &ScheduleSpec,
) -> Result<PropagationResult> {
    propagate_segments(psi, profile.deltas(), l, schedule)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Running average of output projectors and per-trial fidelities.
///
/// Partial accumulators are combined with [`EnsembleAccumulator::merge`] in a
/// fixed order to keep results reproducible.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnsembleAccumulator {
    count: u64,
    r00: CompensatedSum,
    r11: CompensatedSum,
    r01_re: CompensatedSum,
    r01_im: CompensatedSum,
    fid: CompensatedSum,
    fid_sq: CompensatedSum,
}

impl EnsembleAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one output state; `reference` is the state fidelity is measured
    /// against.
    pub fn push(&mut self, out: &StateVector2, reference: &StateVector2) {
        let a = out.amp_plus();
        let b = out.amp_minus();
        let c = a * b.conj();
        self.count += 1;
        self.r00.add(a.norm_sqr());
        self.r11.add(b.norm_sqr());
        self.r01_re.add(c.re);
        self.r01_im.add(c.im);
        let f = reference.overlap_sqr(out);
        self.fid.add(f);
        self.fid_sq.add(f * f);
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.r00.merge(&other.r00);
        self.r11.merge(&other.r11);
        self.r01_re.merge(&other.r01_re);
        self.r01_im.merge(&other.r01_im);
        self.fid.merge(&other.fid);
        self.fid_sq.merge(&other.fid_sq);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Ensemble-averaged density matrix.
    pub fn density(&self) -> Result<DensityMatrix2> {
        if self.count == 0 {
            return Err(Error::EmptyInput("ensemble has no trials"));
        }
        let n = self.count as f64;
        let rho = DensityMatrix2::from_parts(
            self.r00.value() / n,
            Complex64::new(self.r01_re.value() / n, self.r01_im.value() / n),
            self.r11.value() / n,
        );
        rho.check()?;
        Ok(rho)
    }

    /// Mean of per-trial fidelities and its standard error (sample standard
    /// deviation over `sqrt(trials)`; zero for a single trial).
    pub fn fidelity_stats(&self) -> (f64, f64) {
        if self.count == 0 {
            return (f64::NAN, f64::NAN);
        }
        let n = self.count as f64;
        let mean = self.fid.value() / n;
        if self.count < 2 {
            return (mean, 0.0);
        }
        let var = ((self.fid_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    }
}

/// `(1/T) sum_t |psi_t><psi_t|` over the outputs of every profile.
pub fn ensemble_density(
    psi0: &StateVector2,
    profiles: &[NoiseProfile],
    l: i32,
    schedule: &ScheduleSpec,
) -> Result<DensityMatrix2> {
    ensemble_density_with(Executor::default(), psi0, profiles, l, schedule)
}

/// [`ensemble_density`] on an explicit executor. Profiles are reduced in
/// slice order, so sort them by trial id for cross-run reproducibility.
pub fn ensemble_density_with(
    exec: Executor,
    psi0: &StateVector2,
    profiles: &[NoiseProfile],
    l: i32,
    schedule: &ScheduleSpec,
) -> Result<DensityMatrix2> {
    let first = profiles
        .first()
        .ok_or(Error::EmptyInput("ensemble needs at least one profile"))?;
    if profiles.iter().any(|p| p.segments() != first.segments()) {
        return Err(invalid("profiles", "profiles must share one segment count"));
    }
    let partials = exec.map_chunks(profiles.len(), |range| -> Result<EnsembleAccumulator> {
        let mut acc = EnsembleAccumulator::new();
        for p in &profiles[range] {
            let out = propagate(psi0, p, l, schedule)?;
            acc.push(&out.final_state, psi0);
        }
        Ok(acc)
    });
    let mut total = EnsembleAccumulator::new();
    for part in partials {
        total.merge(&part?);
    }
    total.density()
}
