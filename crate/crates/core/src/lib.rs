//! Discrimination of coherent-state phases by continuous dyne measurement.
//!
//! A probe pulse `|α e^{iφ}⟩` leaks out of a cavity with envelope `e^{-t/2}`;
//! its phase `φ` is one of a finite [`Constellation`] set by the qubits in
//! the cavity. A homodyne/heterodyne detector turns the pulse into a noisy
//! photocurrent ([`signal`]), a Bayesian [`filter`] turns the current into
//! posteriors over the candidate phases, and a [`Strategy`] picks the local
//! oscillator phase, possibly from the current posterior. The [`experiments`]
//! module runs Monte Carlo ensembles comparing strategies.
//!
//! ```
//! use std::f64::consts::PI;
//! use phasediscrim::{simulate_trajectory, Constellation, StreamKey, Strategy, TimeGrid};
//!
//! let c = Constellation::build(&[4.0 * PI / 10.0, 3.0 * PI / 10.0], 5.0)?;
//! let grid = TimeGrid::new(1e-3, 1.0)?;
//! let (record, state) =
//!     simulate_trajectory(&c, 1, &Strategy::AdaptiveTopTwo, grid, StreamKey::new(1, 0, 0), true)?;
//! assert_eq!(record.increments.len(), 1000);
//! let p = state.posterior();
//! assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod angle;
pub mod constellation;
pub mod experiments;
pub mod filter;
pub mod rng;
pub mod signal;
pub mod strategies;

#[cfg(doctest)]
mod book;

pub use angle::{parse_angle, wrap, Angle, ANGLE_TOLERANCE};
pub use constellation::{dispersive_pull, Constellation, ConstellationError, QubitPull, SignPattern, UniquenessReport};
pub use filter::{log_sum_exp, Decision, FilterError, FilterState, SufficientStats};
pub use rng::StreamKey;
pub use signal::{
    drift_increment, sample_wiener_increment, simulate, simulate_trajectory, simulate_with_noise, GridError, Noise,
    TimeGrid, TrajectoryRecord,
};
pub use strategies::{midpoint_quadrature, Strategy, StrategyError};

/// Errors surfaced by simulations and experiments.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Constellation(#[from] ConstellationError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("label index {index} out of range for {len} hypotheses")]
    Label { index: usize, len: usize },
    #[error("invalid experiment: {0}")]
    Config(String),
}
