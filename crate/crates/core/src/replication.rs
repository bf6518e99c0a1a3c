//! Damped-oscillation measurement model for a single search step.
//!
//! The scenario: a system relaxed into the uniform superposition receives a
//! sudden sign-flip kick at the marked item (duration `t_b`), then oscillates
//! about its projection onto the uniform state with period `t_osc` while the
//! environment damps the oscillation on the relaxation timescale `t_r`.
//! Measurement happens at the first opposite extreme `t* = t_osc/2`, where
//! the state is renormalized and the marked-item probability read off.
//!
//! With `a(0) = U_b|s⟩` and `s̄` the projection of `a(0)` onto the uniform
//! state `|s⟩`, the trajectory is
//!
//! ```text
//! a(t) = s̄ + cos(2πt/t_osc) · exp(−t/t_r) · (a(0) − s̄)
//! ```
//!
//! so the damping factor at measurement is `γ = exp(−t_osc/(2·t_r))`. In the
//! undamped limit `t_osc/t_r → 0` the measured state equals one full
//! oracle-plus-diffusion search iteration exactly.
//!
//! The model is only meaningful under the timescale hierarchy
//! `t_b < t_osc ≤ t_r`: the kick must be sudden relative to the oscillation,
//! and oscillation faster than relaxation (otherwise damping freezes the
//! rotation before it can complete — parameters violating the bound are
//! rejected, never clamped).

use crate::search::{apply_oracle, uniform_state, SearchError, SearchState};
use thiserror::Error;

/// Errors raised by parameter validation and sweep construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplicationError {
    /// All three timescales must be positive.
    #[error("timescales must be positive: t_b = {t_b}, t_osc = {t_osc}, t_r = {t_r}")]
    NonPositiveTimescale { t_b: f64, t_osc: f64, t_r: f64 },
    /// The kick must be sudden relative to the oscillation.
    #[error(
        "kick duration t_b = {t_b} must be shorter than the oscillation period t_osc = {t_osc}"
    )]
    KickTooSlow { t_b: f64, t_osc: f64 },
    /// Oscillation must complete before relaxation freezes it.
    #[error(
        "timescale hierarchy violated: t_osc = {t_osc} exceeds t_r = {t_r}; \
         completing the search step coherently requires t_osc <= t_r"
    )]
    HierarchyViolated { t_osc: f64, t_r: f64 },
    /// Sweep ratios must lie in (0, 1].
    #[error(
        "hierarchy ratio t_osc/t_r = {ratio} is outside (0, 1]; \
         completing the search step coherently requires t_osc <= t_r"
    )]
    RatioOutOfRange { ratio: f64 },
    /// Database size or target index is invalid.
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Timescales and search geometry for one replication measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationParams {
    t_b: f64,
    t_osc: f64,
    t_r: f64,
    size: usize,
    target: usize,
}

impl ReplicationParams {
    /// Validates positivity, the hierarchy `t_b < t_osc ≤ t_r`, and the
    /// target index.
    pub fn new(
        t_b: f64,
        t_osc: f64,
        t_r: f64,
        size: usize,
        target: usize,
    ) -> Result<Self, ReplicationError> {
        if !(t_b > 0.0 && t_osc > 0.0 && t_r > 0.0) {
            return Err(ReplicationError::NonPositiveTimescale { t_b, t_osc, t_r });
        }
        if t_b >= t_osc {
            return Err(ReplicationError::KickTooSlow { t_b, t_osc });
        }
        if t_osc > t_r {
            return Err(ReplicationError::HierarchyViolated { t_osc, t_r });
        }
        if size == 0 {
            return Err(SearchError::EmptyDatabase.into());
        }
        if target >= size {
            return Err(SearchError::TargetOutOfRange { target, size }.into());
        }
        Ok(Self {
            t_b,
            t_osc,
            t_r,
            size,
            target,
        })
    }

    /// Kick duration.
    pub fn t_b(&self) -> f64 {
        self.t_b
    }

    /// Oscillation period.
    pub fn t_osc(&self) -> f64 {
        self.t_osc
    }

    /// Relaxation time.
    pub fn t_r(&self) -> f64 {
        self.t_r
    }

    /// Database size.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Zero-based marked item.
    pub fn target(&self) -> usize {
        self.target
    }
}

/// Result of one replication measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    /// Renormalized state at the measurement extreme `t* = t_osc/2`.
    pub final_state: SearchState,
    /// Squared overlap of `final_state` with the marked basis state.
    pub success_probability: f64,
    /// `γ = exp(−t_osc/(2·t_r))`, the surviving oscillation amplitude.
    pub damping_factor: f64,
}

/// Runs the kick/oscillate/measure scenario for validated parameters.
pub fn run_replication(params: &ReplicationParams) -> ReplicationOutcome {
    let kicked = apply_oracle(
        &uniform_state(params.size).expect("validated size"),
        params.target,
    )
    .expect("validated target");
    let n = params.size as f64;
    // The projection of the kicked state onto the uniform direction has
    // every component equal to the mean amplitude.
    let mean = kicked.amplitudes().iter().sum::<f64>() / n;
    let gamma = (-params.t_osc / (2.0 * params.t_r)).exp();

    // Trajectory at the opposite extreme: cos(π) = −1.
    let raw: Vec<f64> = kicked
        .amplitudes()
        .iter()
        .map(|a| mean - gamma * (a - mean))
        .collect();

    // Amplitude lost to damping leaks into the environment; measurement
    // conditions on remaining in the search subspace, so renormalize.
    let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    let amplitudes: Vec<f64> = raw.iter().map(|a| a / norm).collect();
    let success_probability = amplitudes[params.target] * amplitudes[params.target];
    let final_state = SearchState::new(amplitudes).expect("renormalized state");

    ReplicationOutcome {
        final_state,
        success_probability,
        damping_factor: gamma,
    }
}

/// Evaluates the measurement over a sweep of hierarchy ratios `t_osc/t_r`,
/// returning `(ratio, success_probability)` rows in ascending ratio order.
///
/// Each point fixes `t_r = 1`, `t_osc = ratio` and `t_b = ratio/1000` so the
/// full hierarchy holds. Ratios outside `(0, 1]` are rejected.
///
/// For sizes `n = 1, 2` and `n ≥ 4` the success probability is monotonically
/// non-increasing in the ratio. `n = 3` is the lone exception: one undamped
/// half-oscillation overshoots the target (the real query count for three
/// items is about 0.78), so damping stops the rotation closer to the mark
/// and *raises* the probability.
pub fn hierarchy_sweep(
    n: usize,
    target: usize,
    ratios: &[f64],
) -> Result<Vec<(f64, f64)>, ReplicationError> {
    for &ratio in ratios {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(ReplicationError::RatioOutOfRange { ratio });
        }
    }
    let mut sorted = ratios.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .into_iter()
        .map(|ratio| {
            let params = ReplicationParams::new(ratio * 1e-3, ratio, 1.0, n, target)?;
            Ok((ratio, run_replication(&params).success_probability))
        })
        .collect()
}
