//! Bayesian multi-hypothesis filter over the photocurrent record.
//!
//! The likelihood of hypothesis `j` given a record `I[0,t)` and LO history
//! `Φ[0,t)` is, up to a factor common to every hypothesis,
//!
//! ```text
//! ln Lⱼ = -2α ∫₀ᵗ ( α e^{-s} cos²(Φ(s) - φⱼ) - e^{-s/2} cos(Φ(s) - φⱼ) I(s) ) ds
//! ```
//!
//! [`FilterState`] accumulates this exponent step by step. The same numbers
//! can be recovered from the two complex sufficient statistics
//!
//! ```text
//! R = ∫ e^{iΦ} e^{-s/2} I ds,    S = -∫ e^{2iΦ} e^{-s} ds
//! ln Lⱼ + ln C = Re(S ᾱⱼ²) + 2 Re(R ᾱⱼ),   αⱼ = α e^{iφⱼ}
//! ```
//!
//! which [`SufficientStats`] tracks independently. On a discrete grid both
//! integrals are left-endpoint sums, and the common term `ln C` is
//! `α² Σ e^{-tₖ} dt` (which tends to `α²(1 - e^{-t})`).

use num_complex::Complex64;
use thiserror::Error;

use crate::constellation::Constellation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("filter is at t = {state}, update was for t = {requested}")]
    TimeMismatch { state: f64, requested: f64 },
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("hypothesis index {index} out of range for {len} hypotheses")]
    Index { index: usize, len: usize },
    #[error("operation needs exactly 2 hypotheses, constellation has {0}")]
    Arity(usize),
    #[error("priors must be {expected} non-negative numbers summing to 1")]
    Priors { expected: usize },
}

/// `ln Σ exp(xᵢ)` without overflow. Returns `-∞` for an empty slice or when
/// every entry is `-∞`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Outcome of a maximum-a-posteriori decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub index: usize,
    /// Another hypothesis shares the maximal posterior.
    pub tie: bool,
}

/// Per-hypothesis log-likelihoods, priors and elapsed time for one record.
#[derive(Debug, Clone)]
pub struct FilterState<'c> {
    constellation: &'c Constellation,
    log_liks: Vec<f64>,
    priors: Vec<f64>,
    log_priors: Vec<f64>,
    t: f64,
    decay_integral: f64,
}

impl<'c> FilterState<'c> {
    /// Fresh filter with a uniform prior.
    pub fn new(constellation: &'c Constellation) -> Self {
        let n = constellation.len();
        let p = 1.0 / n as f64;
        FilterState {
            constellation,
            log_liks: vec![0.0; n],
            priors: vec![p; n],
            log_priors: vec![p.ln(); n],
            t: 0.0,
            decay_integral: 0.0,
        }
    }

    pub fn with_priors(constellation: &'c Constellation, priors: &[f64]) -> Result<Self, FilterError> {
        let n = constellation.len();
        let bad = FilterError::Priors { expected: n };
        if priors.len() != n || priors.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(bad);
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(bad);
        }
        let priors: Vec<f64> = priors.iter().map(|p| p / total).collect();
        let log_priors = priors.iter().map(|p| p.ln()).collect();
        Ok(FilterState {
            constellation,
            log_liks: vec![0.0; n],
            priors,
            log_priors,
            t: 0.0,
            decay_integral: 0.0,
        })
    }

    pub fn constellation(&self) -> &'c Constellation {
        self.constellation
    }

    pub fn len(&self) -> usize {
        self.log_liks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_liks.is_empty()
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn log_liks(&self) -> &[f64] {
        &self.log_liks
    }

    #[cfg(test)]
    pub(crate) fn log_liks_mut(&mut self) -> &mut [f64] {
        &mut self.log_liks
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `ln C` on the grid walked so far: `-α² Σ e^{-tₖ} dt`.
    pub fn log_common_prefactor(&self) -> f64 {
        let a = self.constellation.amplitude();
        -a * a * self.decay_integral
    }

    /// Left-endpoint sum `Σ e^{-tₖ} dt` over the steps taken so far.
    pub fn decay_integral(&self) -> f64 {
        self.decay_integral
    }

    /// Folds one photocurrent increment `I(t) dt`, measured with LO phase
    /// `lo_phase` over `[t, t+dt)`, into every hypothesis.
    pub fn update(&mut self, lo_phase: f64, increment: f64, t: f64, dt: f64) -> Result<(), FilterError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(FilterError::BadStep(dt));
        }
        if (self.t - t).abs() > dt / 2.0 {
            return Err(FilterError::TimeMismatch {
                state: self.t,
                requested: t,
            });
        }
        let a = self.constellation.amplitude();
        let decay = (-t).exp();
        let envelope = (-t / 2.0).exp();
        let (sin_lo, cos_lo) = lo_phase.sin_cos();
        let cos_phases = self.constellation.cos_phases();
        let sin_phases = self.constellation.sin_phases();
        for (j, ll) in self.log_liks.iter_mut().enumerate() {
            // cos(Φ - φⱼ)
            let c = cos_lo * cos_phases[j] + sin_lo * sin_phases[j];
            *ll += -2.0 * a * (a * decay * c * c * dt - envelope * c * increment);
        }
        self.decay_integral += decay * dt;
        self.t += dt;
        Ok(())
    }

    fn score(&self, j: usize) -> f64 {
        self.log_liks[j] + self.log_priors[j]
    }

    /// Posterior probabilities, normalised with log-sum-exp.
    pub fn posterior(&self) -> Vec<f64> {
        let scores: Vec<f64> = (0..self.len()).map(|j| self.score(j)).collect();
        let norm = log_sum_exp(&scores);
        scores.iter().map(|s| (s - norm).exp()).collect()
    }

    /// Posterior of a single hypothesis.
    pub fn posterior_of(&self, index: usize) -> Result<f64, FilterError> {
        if index >= self.len() {
            return Err(FilterError::Index { index, len: self.len() });
        }
        let max = (0..self.len()).map(|j| self.score(j)).fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = (0..self.len()).map(|j| (self.score(j) - max).exp()).sum();
        Ok((self.score(index) - max).exp() / total)
    }

    /// Hypothesis with the largest posterior; ties go to the lowest index.
    pub fn map_decision(&self) -> Decision {
        let mut best = 0;
        let mut tie = false;
        for j in 1..self.len() {
            let (s, b) = (self.score(j), self.score(best));
            if s > b {
                best = j;
                tie = false;
            } else if s == b {
                tie = true;
            }
        }
        Decision { index: best, tie }
    }

    /// Indices of the most and second-most probable hypotheses, ties going to
    /// the lower index. For a single hypothesis both entries are 0.
    pub fn top_two(&self) -> (usize, usize) {
        let mut first = 0;
        let mut second: Option<usize> = None;
        for j in 1..self.len() {
            let s = self.score(j);
            if s > self.score(first) {
                second = Some(first);
                first = j;
            } else if second.is_none_or(|k| s > self.score(k)) {
                second = Some(j);
            }
        }
        (first, second.unwrap_or(first))
    }

    /// `ln Λ = ln L₊ - ln L₋` for a two-phase constellation.
    pub fn log_likelihood_ratio(&self) -> Result<f64, FilterError> {
        if self.len() != 2 {
            return Err(FilterError::Arity(self.len()));
        }
        Ok(self.log_liks[0] - self.log_liks[1])
    }
}

/// The complex statistics `R` and `S` that determine every likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SufficientStats {
    pub r: Complex64,
    pub s: Complex64,
    pub t: f64,
}

impl SufficientStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, lo_phase: f64, increment: f64, t: f64, dt: f64) {
        let lo = Complex64::from_polar(1.0, lo_phase);
        self.r += lo * (-t / 2.0).exp() * increment;
        self.s -= lo * lo * (-t).exp() * dt;
        self.t += dt;
    }

    /// `Re(S ᾱⱼ²) + 2 Re(R ᾱⱼ)`, the likelihood exponent including the
    /// common term.
    pub fn loglik(&self, constellation: &Constellation, index: usize) -> Result<f64, FilterError> {
        if index >= constellation.len() {
            return Err(FilterError::Index {
                index,
                len: constellation.len(),
            });
        }
        let alpha_conj = Complex64::from_polar(constellation.amplitude(), constellation.phase(index)).conj();
        Ok((self.s * alpha_conj * alpha_conj).re + 2.0 * (self.r * alpha_conj).re)
    }
}
