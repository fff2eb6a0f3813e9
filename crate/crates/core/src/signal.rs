//! Photocurrent generation for a decaying coherent pulse.
//!
//! Over each step `[t, t+dt)` the detector reports
//!
//! ```text
//! I(t) dt = 2α e^{-t/2} cos(Φ(t) - φ) dt + dW(t),    dW ~ N(0, dt)
//! ```
//!
//! with `Φ(t)` chosen by a [`Strategy`] from the filter state at `t`. The loop
//! is Euler–Maruyama on a uniform grid with one step of feedback latency.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::constellation::Constellation;
use crate::filter::FilterState;
use crate::rng::StreamKey;
use crate::strategies::Strategy;
use crate::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("time step must be positive and finite, got {0}")]
    Step(f64),
    #[error("horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("horizon {horizon} is not a whole number of steps of {dt}")]
    NotAligned { dt: f64, horizon: f64 },
}

/// Uniform time grid `tₖ = k·dt`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    pub const DEFAULT_DT: f64 = 1e-3;
    pub const DEFAULT_HORIZON: f64 = 1.0;

    pub fn new(dt: f64, horizon: f64) -> Result<Self, GridError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(GridError::Step(dt));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(GridError::Horizon(horizon));
        }
        let steps = (horizon / dt).round();
        if steps < 1.0 || (steps * dt - horizon).abs() > 1e-6 * horizon {
            return Err(GridError::NotAligned { dt, horizon });
        }
        Ok(TimeGrid {
            dt,
            steps: steps as usize,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// Grid index closest to `t`, clamped to `0..=steps`.
    pub fn index_at(&self, t: f64) -> usize {
        ((t / self.dt).round().max(0.0) as usize).min(self.steps)
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid::new(Self::DEFAULT_DT, Self::DEFAULT_HORIZON).expect("default grid is valid")
    }
}

/// A Wiener increment over a step of length `dt`.
pub fn sample_wiener_increment<R: Rng + ?Sized>(rng: &mut R, dt: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * dt.sqrt()
}

/// Deterministic part of the photocurrent increment,
/// `2α e^{-t/2} cos(Φ - φ) dt`.
pub fn drift_increment(alpha: f64, true_phase: f64, lo_phase: f64, t: f64, dt: f64) -> f64 {
    2.0 * alpha * (-t / 2.0).exp() * (lo_phase - true_phase).cos() * dt
}

/// Which shot noise to add to the drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    /// Wiener increments drawn from the given stream.
    Wiener(StreamKey),
    /// `dW ≡ 0`.
    Silent,
}

/// One realised measurement run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub grid: TimeGrid,
    /// `I(tₖ) dt` for each step.
    pub increments: Vec<f64>,
    /// `Φ(tₖ)` used during each step.
    pub lo_phases: Vec<f64>,
    pub true_index: usize,
    pub true_phase: f64,
    pub seed: Option<StreamKey>,
    /// Posterior of the true hypothesis at `t₀ … t_steps` (one longer than
    /// the increments), when requested.
    pub posterior_history: Option<Vec<f64>>,
}

/// Runs the measurement/feedback loop with Wiener noise from `seed`.
pub fn simulate_trajectory<'c>(
    constellation: &'c Constellation,
    true_index: usize,
    strategy: &Strategy,
    grid: TimeGrid,
    seed: StreamKey,
    record_posterior: bool,
) -> Result<(TrajectoryRecord, FilterState<'c>), Error> {
    let mut rng = seed.rng();
    let dt = grid.dt();
    let (mut record, state) = simulate_with_noise(
        constellation,
        true_index,
        strategy,
        grid,
        |_| sample_wiener_increment(&mut rng, dt),
        record_posterior,
    )?;
    record.seed = Some(seed);
    Ok((record, state))
}

/// Runs the loop for either noise model.
pub fn simulate<'c>(
    constellation: &'c Constellation,
    true_index: usize,
    strategy: &Strategy,
    grid: TimeGrid,
    noise: Noise,
    record_posterior: bool,
) -> Result<(TrajectoryRecord, FilterState<'c>), Error> {
    match noise {
        Noise::Wiener(seed) => simulate_trajectory(constellation, true_index, strategy, grid, seed, record_posterior),
        Noise::Silent => simulate_with_noise(constellation, true_index, strategy, grid, |_| 0.0, record_posterior),
    }
}

/// Runs the loop with the Wiener increment of step `k` supplied by
/// `noise(k)`. Each step queries the strategy with the filter state after the
/// previous step, emits `drift + dW`, then updates the filter.
pub fn simulate_with_noise<'c, F>(
    constellation: &'c Constellation,
    true_index: usize,
    strategy: &Strategy,
    grid: TimeGrid,
    mut noise: F,
    record_posterior: bool,
) -> Result<(TrajectoryRecord, FilterState<'c>), Error>
where
    F: FnMut(usize) -> f64,
{
    if true_index >= constellation.len() {
        return Err(Error::Label {
            index: true_index,
            len: constellation.len(),
        });
    }
    strategy.validate(constellation)?;
    let alpha = constellation.amplitude();
    let true_phase = constellation.phase(true_index);
    let dt = grid.dt();
    let steps = grid.steps();

    let mut state = FilterState::new(constellation);
    let mut increments = Vec::with_capacity(steps);
    let mut lo_phases = Vec::with_capacity(steps);
    let mut history = record_posterior.then(|| {
        let mut h = Vec::with_capacity(steps + 1);
        h.push(state.priors()[true_index]);
        h
    });

    for k in 0..steps {
        let t = grid.time(k);
        let lo = strategy.lo_phase(t, &state)?;
        let increment = drift_increment(alpha, true_phase, lo, t, dt) + noise(k);
        state.update(lo, increment, t, dt)?;
        lo_phases.push(lo);
        increments.push(increment);
        if let Some(h) = history.as_mut() {
            h.push(state.posterior_of(true_index)?);
        }
    }

    let record = TrajectoryRecord {
        grid,
        increments,
        lo_phases,
        true_index,
        true_phase,
        seed: None,
        posterior_history: history,
    };
    Ok((record, state))
}
