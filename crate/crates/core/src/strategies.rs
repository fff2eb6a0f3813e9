//! Local-oscillator phase policies.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{circular_midpoint, wrap, Angle};
use crate::constellation::Constellation;
use crate::filter::FilterState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("the two-phase optimum needs exactly 2 hypotheses, constellation has {0}")]
    Arity(usize),
    #[error("heterodyne cycling rate must be positive and finite, got {0}")]
    Rate(f64),
    #[error("strategy phase must be finite, got {0}")]
    Phase(f64),
}

/// LO axis in quadrature with the bisector of `a` and `b`:
/// `π/2 + (a + b)/2`, with the bisector taken on the shorter arc.
pub fn midpoint_quadrature(a: f64, b: f64) -> f64 {
    wrap(FRAC_PI_2 + circular_midpoint(a, b))
}

/// A rule choosing the LO phase `Φ(t)` from the time and the filter state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    /// Fixed quadrature.
    StaticHomodyne { phase: Angle },
    /// LO phase swept at `rate` radians per unit time from `initial_phase`.
    Heterodyne {
        rate: Angle,
        #[serde(default = "zero_angle")]
        initial_phase: Angle,
    },
    /// Measure symmetrically in quadrature with the two currently most
    /// probable phases.
    AdaptiveTopTwo,
    /// Static optimum for two phases: in quadrature with their bisector.
    OptimalTwoPhase,
}

fn zero_angle() -> Angle {
    Angle(0.0)
}

impl Strategy {
    pub fn homodyne(phase: f64) -> Self {
        Strategy::StaticHomodyne { phase: Angle(phase) }
    }

    pub fn heterodyne(rate: f64) -> Self {
        Strategy::Heterodyne {
            rate: Angle(rate),
            initial_phase: Angle(0.0),
        }
    }

    /// Short identifier used in reports and CSV files.
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::StaticHomodyne { .. } => "homodyne",
            Strategy::Heterodyne { .. } => "heterodyne",
            Strategy::AdaptiveTopTwo => "adaptive",
            Strategy::OptimalTwoPhase => "optimal_two",
        }
    }

    pub fn validate(&self, constellation: &Constellation) -> Result<(), StrategyError> {
        match *self {
            Strategy::StaticHomodyne { phase } if !phase.0.is_finite() => Err(StrategyError::Phase(phase.0)),
            Strategy::Heterodyne { rate, .. } if !(rate.0.is_finite() && rate.0 > 0.0) => {
                Err(StrategyError::Rate(rate.0))
            }
            Strategy::Heterodyne { initial_phase, .. } if !initial_phase.0.is_finite() => {
                Err(StrategyError::Phase(initial_phase.0))
            }
            Strategy::OptimalTwoPhase if constellation.len() != 2 => Err(StrategyError::Arity(constellation.len())),
            _ => Ok(()),
        }
    }

    /// LO phase to use over `[t, t+dt)` given the filter state at `t`.
    pub fn lo_phase(&self, t: f64, state: &FilterState<'_>) -> Result<f64, StrategyError> {
        match *self {
            Strategy::StaticHomodyne { phase } => Ok(wrap(phase.0)),
            Strategy::Heterodyne { rate, initial_phase } => {
                // reduce before adding so large ω·t keeps its precision
                Ok(wrap(initial_phase.0 + (rate.0 * t) % TAU))
            }
            Strategy::AdaptiveTopTwo => {
                let c = state.constellation();
                let (first, second) = state.top_two();
                Ok(midpoint_quadrature(c.phase(first), c.phase(second)))
            }
            Strategy::OptimalTwoPhase => {
                let c = state.constellation();
                if c.len() != 2 {
                    return Err(StrategyError::Arity(c.len()));
                }
                Ok(midpoint_quadrature(c.phase(0), c.phase(1)))
            }
        }
    }
}
