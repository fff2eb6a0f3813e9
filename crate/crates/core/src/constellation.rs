//! Candidate phase sets built from per-qubit dispersive pulls.
//!
//! With `n` qubits in the cavity, each joint `σ_z` sign pattern `(s₁, …, sₙ)`
//! shifts the probe by `Σ sᵢ φᵢ`. The resulting `2ⁿ` phases are the
//! hypotheses the filter has to tell apart.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{circular_distance, wrap, Angle};

/// Largest number of qubits a constellation may be built from.
pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstellationError {
    #[error("cavity decay rate must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("detuning must be non-zero")]
    ZeroDetuning,
    #[error("dispersive parameters must be finite")]
    NonFinite,
    #[error("a constellation needs between 1 and {MAX_QUBITS} pulls, got {0}")]
    QubitCount(usize),
    #[error("probe amplitude must be finite and non-negative, got {0}")]
    Amplitude(f64),
    #[error("pull angle must be finite, got {0}")]
    Pull(f64),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

/// Phase pull `arctan(g² / (κΔ))` imparted on the probe by one qubit.
pub fn dispersive_pull(g: f64, kappa: f64, delta: f64) -> Result<f64, ConstellationError> {
    if !(g.is_finite() && kappa.is_finite() && delta.is_finite()) {
        return Err(ConstellationError::NonFinite);
    }
    if kappa <= 0.0 {
        return Err(ConstellationError::NonPositiveKappa(kappa));
    }
    if delta == 0.0 {
        return Err(ConstellationError::ZeroDetuning);
    }
    Ok((g * g / (kappa * delta)).atan())
}

/// One qubit's contribution to the constellation, either given directly as an
/// angle or through its circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QubitPull {
    Dispersive { g: f64, kappa: f64, delta: f64 },
    Angle(Angle),
}

impl QubitPull {
    pub fn angle(&self) -> Result<f64, ConstellationError> {
        match *self {
            QubitPull::Angle(a) if a.0.is_finite() => Ok(a.0),
            QubitPull::Angle(a) => Err(ConstellationError::Pull(a.0)),
            QubitPull::Dispersive { g, kappa, delta } => dispersive_pull(g, kappa, delta),
        }
    }
}

/// A qubit sign pattern, `+1` or `-1` per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    /// Pattern for constellation index `index` among `qubits` qubits: bit
    /// `qubits-1-i` of the index set means qubit `i` is `-`.
    pub fn from_index(index: usize, qubits: usize) -> Self {
        SignPattern(
            (0..qubits)
                .map(|i| if index >> (qubits - 1 - i) & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &s| (acc << 1) | usize::from(s < 0))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SignPattern {
    type Err = ConstellationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(ConstellationError::UnknownLabel(s.to_string())),
            })
            .collect::<Result<Vec<i8>, _>>()?;
        if signs.is_empty() {
            return Err(ConstellationError::UnknownLabel(s.to_string()));
        }
        Ok(SignPattern(signs))
    }
}

/// The hypothesis set: `2ⁿ` canonical phases with their sign-pattern labels
/// and the probe amplitude `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pulls: Vec<f64>,
    offset: f64,
    amplitude: f64,
    phases: Vec<f64>,
    labels: Vec<SignPattern>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Constellation {
    /// All signed sums `Σ sᵢ φᵢ` of `pulls`, ordered lexicographically by sign
    /// pattern with `+` before `-`.
    pub fn build(pulls: &[f64], amplitude: f64) -> Result<Self, ConstellationError> {
        Self::build_rotated(pulls, 0.0, amplitude)
    }

    /// Like [`Constellation::build`] with every phase rotated by `offset`.
    /// This covers constellations whose phases do not sum to zero, e.g. a
    /// pair `{φ₀, φ₁}` is `build_rotated(&[(φ₀-φ₁)/2], (φ₀+φ₁)/2, α)`.
    pub fn build_rotated(pulls: &[f64], offset: f64, amplitude: f64) -> Result<Self, ConstellationError> {
        let n = pulls.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(ConstellationError::QubitCount(n));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(ConstellationError::Amplitude(amplitude));
        }
        if let Some(&bad) = pulls.iter().chain([&offset]).find(|p| !p.is_finite()) {
            return Err(ConstellationError::Pull(bad));
        }
        let labels: Vec<SignPattern> = (0..1usize << n).map(|j| SignPattern::from_index(j, n)).collect();
        let phases: Vec<f64> = labels
            .iter()
            .map(|label| {
                let sum: f64 = label.signs().iter().zip(pulls).map(|(&s, &p)| f64::from(s) * p).sum();
                wrap(sum + offset)
            })
            .collect();
        let cos = phases.iter().map(|p| p.cos()).collect();
        let sin = phases.iter().map(|p| p.sin()).collect();
        Ok(Constellation {
            pulls: pulls.to_vec(),
            offset,
            amplitude,
            phases,
            labels,
            cos,
            sin,
        })
    }

    pub fn from_qubit_pulls(pulls: &[QubitPull], amplitude: f64) -> Result<Self, ConstellationError> {
        let angles = pulls.iter().map(QubitPull::angle).collect::<Result<Vec<_>, _>>()?;
        Self::build(&angles, amplitude)
    }

    /// Same phases, different probe amplitude.
    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self, ConstellationError> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(ConstellationError::Amplitude(amplitude));
        }
        Ok(Constellation {
            amplitude,
            ..self.clone()
        })
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn qubits(&self) -> usize {
        self.pulls.len()
    }

    pub fn pulls(&self) -> &[f64] {
        &self.pulls
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn phase(&self, index: usize) -> f64 {
        self.phases[index]
    }

    pub fn labels(&self) -> &[SignPattern] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &SignPattern {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &SignPattern) -> Option<usize> {
        (label.signs().len() == self.qubits()).then(|| label.index())
    }

    pub(crate) fn cos_phases(&self) -> &[f64] {
        &self.cos
    }

    pub(crate) fn sin_phases(&self) -> &[f64] {
        &self.sin
    }

    /// Index of the smallest strictly positive phase, falling back to the
    /// phase of smallest magnitude when none is positive.
    pub fn smallest_positive_index(&self) -> usize {
        let positive = self
            .phases
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(j, _)| j);
        positive.unwrap_or_else(|| {
            self.phases
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map(|(j, _)| j)
                .unwrap_or(0)
        })
    }

    /// Checks that the `2ⁿ` phases are pairwise distinct modulo `2π`.
    pub fn validate_unique(&self, tol: f64) -> UniquenessReport {
        let mut collisions = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let distance = circular_distance(self.phases[a], self.phases[b]);
                if distance <= tol {
                    collisions.push(Collision { a, b, distance });
                }
            }
        }
        UniquenessReport {
            pairs_checked: self.len() * (self.len() - 1) / 2,
            collisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collision {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    pub pairs_checked: usize,
    pub collisions: Vec<Collision>,
}

impl UniquenessReport {
    pub fn is_ok(&self) -> bool {
        self.collisions.is_empty()
    }
}
