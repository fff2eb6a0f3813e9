//! Experiment configuration files.
//!
//! A config is a TOML document with four sections:
//!
//! ```toml
//! [constellation]
//! pulls = ["4pi/10", "3pi/10"]      # or [{ g = 1.58, kappa = 1.0, delta = 1.0 }, ...]
//!
//! [grid]
//! dt = 1e-3
//! horizon = 1.0
//!
//! [strategies]
//! list = [
//!     { name = "static", kind = "heterodyne", rate = "100pi" },
//!     { name = "adaptive", kind = "adaptive_top_two" },
//! ]
//!
//! [experiment]
//! alphas = [5.0]
//! n_runs = 500
//! seed = 1
//! correct_state = "average"         # or a sign label such as "+-", or an index
//! report_times = [0.2, 1.0]
//! ```
//!
//! Angles may be numbers (radians) or strings like `"4pi/10"`.

use std::path::Path;

use phasediscrim::constellation::QubitPull;
use phasediscrim::experiments::{CorrectState, ExperimentConfig, NamedStrategy};
use phasediscrim::{Angle, Constellation, SignPattern, Strategy, TimeGrid, ANGLE_TOLERANCE};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub constellation: ConstellationSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub strategies: StrategiesSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationSection {
    pub pulls: Vec<QubitPull>,
    /// Global rotation added to every phase.
    #[serde(default = "zero")]
    pub offset: Angle,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            dt: default_dt(),
            horizon: default_horizon(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategiesSection {
    pub list: Vec<StrategyEntry>,
}

impl Default for StrategiesSection {
    fn default() -> Self {
        StrategiesSection {
            list: vec![
                StrategyEntry {
                    name: Some("static".into()),
                    strategy: Strategy::heterodyne(100.0 * std::f64::consts::PI),
                },
                StrategyEntry {
                    name: Some("adaptive".into()),
                    strategy: Strategy::AdaptiveTopTwo,
                },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorrectStateSpec {
    Index(usize),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_runs")]
    pub n_runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// `"average"`, `"smallest"` (smallest positive phase), a sign label or
    /// an index.
    #[serde(default = "default_correct_state")]
    pub correct_state: CorrectStateSpec,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Defaults to the grid horizon.
    #[serde(default)]
    pub report_times: Option<Vec<f64>>,
    /// Write every `curve_stride`-th grid point to the curves file.
    #[serde(default = "one")]
    pub curve_stride: usize,
    /// Heterodyne rates for `sweep`.
    #[serde(default)]
    pub rates: Vec<Angle>,
    /// Trajectories per cell dumped as CSV by `run`.
    #[serde(default)]
    pub dump_trajectories: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            alphas: default_alphas(),
            n_runs: default_runs(),
            seed: 0,
            correct_state: default_correct_state(),
            threshold: default_threshold(),
            report_times: None,
            curve_stride: 1,
            rates: Vec::new(),
            dump_trajectories: 0,
        }
    }
}

fn zero() -> Angle {
    Angle(0.0)
}
fn default_tolerance() -> f64 {
    ANGLE_TOLERANCE
}
fn default_dt() -> f64 {
    TimeGrid::DEFAULT_DT
}
fn default_horizon() -> f64 {
    TimeGrid::DEFAULT_HORIZON
}
fn default_alphas() -> Vec<f64> {
    vec![5.0]
}
fn default_runs() -> usize {
    ExperimentConfig::DEFAULT_RUNS
}
fn default_correct_state() -> CorrectStateSpec {
    CorrectStateSpec::Text("smallest".into())
}
fn default_threshold() -> f64 {
    ExperimentConfig::DEFAULT_THRESHOLD
}
fn one() -> usize {
    1
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, overrides: Overrides) {
        if let Some(seed) = overrides.seed {
            self.experiment.seed = seed;
        }
        if let Some(dt) = overrides.dt {
            self.grid.dt = dt;
        }
        if let Some(horizon) = overrides.horizon {
            self.grid.horizon = horizon;
        }
    }

    /// SHA-256 of the canonical JSON form. Key order and formatting in the
    /// TOML source do not affect it.
    pub fn checksum(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises to JSON");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn constellation(&self) -> Result<Constellation, CliError> {
        let pulls = self
            .constellation
            .pulls
            .iter()
            .map(QubitPull::angle)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let amplitude = self.experiment.alphas.first().copied().unwrap_or(0.0).max(0.0);
        Constellation::build_rotated(&pulls, self.constellation.offset.0, amplitude)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<TimeGrid, CliError> {
        TimeGrid::new(self.grid.dt, self.grid.horizon).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let constellation = self.constellation()?;
        let grid = self.grid()?;
        if self.strategies.list.is_empty() {
            return Err(CliError::Config("[strategies] list is empty".into()));
        }
        if self.experiment.curve_stride == 0 {
            return Err(CliError::Config("curve_stride must be at least 1".into()));
        }
        let strategies = self
            .strategies
            .list
            .iter()
            .map(|e| match &e.name {
                Some(name) => NamedStrategy::named(name.clone(), e.strategy),
                None => NamedStrategy::new(e.strategy),
            })
            .collect::<Vec<_>>();
        let mut names: Vec<&str> = strategies.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("strategy names must be unique".into()));
        }
        let correct_state = match &self.experiment.correct_state {
            CorrectStateSpec::Index(j) => CorrectState::Fixed(*j),
            CorrectStateSpec::Text(t) if t == "average" => CorrectState::Average,
            CorrectStateSpec::Text(t) if t == "smallest" => {
                CorrectState::Fixed(constellation.smallest_positive_index())
            }
            CorrectStateSpec::Text(t) => {
                let label: SignPattern = t
                    .parse()
                    .map_err(|e: phasediscrim::ConstellationError| CliError::Config(format!("correct_state: {e}")))?;
                let index = constellation
                    .index_of(&label)
                    .ok_or_else(|| CliError::Config(format!("correct_state `{t}` does not match the qubit count")))?;
                CorrectState::Fixed(index)
            }
        };
        let config = ExperimentConfig {
            constellation,
            strategies,
            alphas: self.experiment.alphas.clone(),
            n_runs: self.experiment.n_runs,
            grid,
            seed: self.experiment.seed,
            correct_state,
            threshold: self.experiment.threshold,
            report_times: self
                .experiment
                .report_times
                .clone()
                .unwrap_or_else(|| vec![grid.horizon()]),
        };
        config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}

/// Heterodyne strategies that turn by π or more per step. On such a grid the
/// LO phase aliases; at exactly π per step it alternates between two values
/// and cannot separate mirror-image phases.
pub fn aliasing_warnings(config: &ExperimentConfig) -> Vec<String> {
    let dt = config.grid.dt();
    config
        .strategies
        .iter()
        .filter_map(|s| match s.strategy {
            Strategy::Heterodyne { rate, .. } if rate.0 * dt >= std::f64::consts::PI - 1e-12 => Some(format!(
                "warning: strategy `{}` turns {:.3} rad per step (dt = {dt}); its LO phase aliases on this grid",
                s.name,
                rate.0 * dt
            )),
            _ => None,
        })
        .collect()
}
