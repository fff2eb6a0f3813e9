//! Monte Carlo ensembles over trajectories.
//!
//! A *cell* is one (strategy, α, correct label) combination. Each cell runs
//! `n_runs` independent trajectories and records the mean, standard
//! deviation and standard error of the correct hypothesis' posterior at every
//! grid time.
//!
//! Trajectory `i` of the cell for (α index `a`, label `l`) draws its noise from
//! stream `(seed, cell_id([a, l]), i)`. The stream does not depend on the
//! strategy, so strategies are compared on common random numbers. Runs are
//! grouped into fixed-size chunks that execute in parallel; chunk partial
//! sums are combined in chunk order, so results are bit-identical for any
//! number of threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::constellation::Constellation;
use crate::rng::{cell_id, StreamKey};
use crate::signal::{simulate_trajectory, TimeGrid};
use crate::strategies::Strategy;
use crate::Error;

/// Trajectories per parallel work item.
const CHUNK: usize = 32;

/// Which hypothesis is the true one in each run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorrectState {
    Fixed(usize),
    /// Every label in turn, results averaged afterwards.
    Average,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedStrategy {
    pub name: String,
    pub strategy: Strategy,
}

impl NamedStrategy {
    pub fn new(strategy: Strategy) -> Self {
        NamedStrategy {
            name: strategy.name().to_string(),
            strategy,
        }
    }

    pub fn named(name: impl Into<String>, strategy: Strategy) -> Self {
        NamedStrategy {
            name: name.into(),
            strategy,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Phases to discriminate; its amplitude is replaced by each entry of
    /// `alphas`.
    pub constellation: Constellation,
    pub strategies: Vec<NamedStrategy>,
    pub alphas: Vec<f64>,
    pub n_runs: usize,
    pub grid: TimeGrid,
    pub seed: u64,
    pub correct_state: CorrectState,
    /// Level for [`time_to_threshold`].
    pub threshold: f64,
    /// Times at which summaries are reported.
    pub report_times: Vec<f64>,
}

impl ExperimentConfig {
    pub const DEFAULT_RUNS: usize = 500;
    pub const DEFAULT_THRESHOLD: f64 = 0.5;

    /// Defaults: 500 runs, the smallest positive phase as the correct state,
    /// threshold 0.5, reports at the horizon.
    pub fn new(constellation: Constellation, strategies: Vec<NamedStrategy>, alphas: Vec<f64>, grid: TimeGrid) -> Self {
        let correct = constellation.smallest_positive_index();
        ExperimentConfig {
            constellation,
            strategies,
            alphas,
            n_runs: Self::DEFAULT_RUNS,
            grid,
            seed: 0,
            correct_state: CorrectState::Fixed(correct),
            threshold: Self::DEFAULT_THRESHOLD,
            report_times: vec![grid.horizon()],
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_runs == 0 {
            return bad("n_runs must be at least 1".into());
        }
        if self.strategies.is_empty() {
            return bad("at least one strategy is required".into());
        }
        if self.alphas.is_empty() {
            return bad("at least one alpha is required".into());
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return bad(format!("alpha values must be finite and non-negative, got {a}"));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad(format!("threshold must lie in (0, 1), got {}", self.threshold));
        }
        if let CorrectState::Fixed(j) = self.correct_state {
            if j >= self.constellation.len() {
                return Err(Error::Label {
                    index: j,
                    len: self.constellation.len(),
                });
            }
        }
        if let Some(t) = self
            .report_times
            .iter()
            .find(|t| !(t.is_finite() && **t >= 0.0 && **t <= self.grid.horizon() + self.grid.dt() / 2.0))
        {
            return bad(format!("report time {t} lies outside [0, {}]", self.grid.horizon()));
        }
        for s in &self.strategies {
            s.strategy.validate(&self.constellation)?;
        }
        Ok(())
    }

    /// Labels whose runs are simulated.
    pub fn labels(&self) -> Vec<usize> {
        match self.correct_state {
            CorrectState::Fixed(j) => vec![j],
            CorrectState::Average => (0..self.constellation.len()).collect(),
        }
    }
}

/// Mean, standard deviation and standard error on the grid, `steps + 1`
/// points starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n: usize,
}

impl Curve {
    fn from_sums(sum: &[f64], sum_sq: &[f64], n: usize) -> Self {
        let nf = n as f64;
        let mean: Vec<f64> = sum.iter().map(|s| (s / nf).clamp(0.0, 1.0)).collect();
        let std: Vec<f64> = if n > 1 {
            sum_sq
                .iter()
                .zip(&mean)
                .map(|(sq, m)| ((sq - nf * m * m) / (nf - 1.0)).max(0.0).sqrt())
                .collect()
        } else {
            vec![0.0; sum.len()]
        };
        let stderr = std.iter().map(|s| s / nf.sqrt()).collect();
        Curve { mean, std, stderr, n }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub strategy: usize,
    pub alpha_index: usize,
    pub alpha: f64,
    pub label: usize,
    pub curve: Curve,
    /// Fraction of runs whose final MAP decision was correct (ties count
    /// half).
    pub success_rate: f64,
    pub time_to_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub grid: TimeGrid,
    pub strategy_names: Vec<String>,
    pub alphas: Vec<f64>,
    pub labels: Vec<usize>,
    pub threshold: f64,
    pub cells: Vec<CellResult>,
}

impl EnsembleResult {
    pub fn cell(&self, strategy: usize, alpha_index: usize, label: usize) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.strategy == strategy && c.alpha_index == alpha_index && c.label == label)
    }
}

#[derive(Default)]
struct Partial {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    successes: f64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        if self.sum.is_empty() {
            return other;
        }
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        self.successes += other.successes;
        self
    }
}

fn run_cell(
    constellation: &Constellation,
    label: usize,
    strategy: &Strategy,
    grid: TimeGrid,
    n_runs: usize,
    seed: u64,
    alpha_index: usize,
) -> Result<(Curve, f64), Error> {
    let points = grid.steps() + 1;
    let chunks = n_runs.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut part = Partial {
                sum: vec![0.0; points],
                sum_sq: vec![0.0; points],
                successes: 0.0,
            };
            for run in chunk * CHUNK..((chunk + 1) * CHUNK).min(n_runs) {
                let key = ensemble_stream(seed, alpha_index, label, run);
                let (record, state) = simulate_trajectory(constellation, label, strategy, grid, key, true)?;
                let history = record.posterior_history.expect("posterior history was requested");
                for (k, p) in history.iter().enumerate() {
                    part.sum[k] += p;
                    part.sum_sq[k] += p * p;
                }
                let decision = state.map_decision();
                if decision.index == label {
                    part.successes += if decision.tie { 0.5 } else { 1.0 };
                }
            }
            Ok(part)
        })
        .collect::<Result<_, Error>>()?;
    let total = partials.into_iter().fold(Partial::default(), Partial::merge);
    Ok((
        Curve::from_sums(&total.sum, &total.sum_sq, n_runs),
        total.successes / n_runs as f64,
    ))
}

/// First grid time at which `mean` reaches `threshold`, or `None` if it never
/// does.
/// Noise stream of trajectory `run` in the ensemble cell for
/// (`alpha_index`, `label`).
pub fn ensemble_stream(seed: u64, alpha_index: usize, label: usize, run: usize) -> StreamKey {
    StreamKey::new(seed, cell_id(&[alpha_index as u64, label as u64]), run as u64)
}

pub fn time_to_threshold(mean: &[f64], grid: TimeGrid, threshold: f64) -> Option<f64> {
    mean.iter().position(|&m| m >= threshold).map(|k| grid.time(k))
}

/// Runs every cell of `config`.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleResult, Error> {
    run_ensemble_with_progress(config, |_, _, _| {})
}

/// Like [`run_ensemble`], calling `progress(cell, done, total)` after each
/// cell completes.
pub fn run_ensemble_with_progress<F>(config: &ExperimentConfig, mut progress: F) -> Result<EnsembleResult, Error>
where
    F: FnMut(&CellResult, usize, usize),
{
    config.validate()?;
    let labels = config.labels();
    let total = config.strategies.len() * config.alphas.len() * labels.len();
    let mut cells = Vec::with_capacity(total);
    for (si, named) in config.strategies.iter().enumerate() {
        for (ai, &alpha) in config.alphas.iter().enumerate() {
            let constellation = config.constellation.with_amplitude(alpha)?;
            for &label in &labels {
                let (curve, success_rate) = run_cell(
                    &constellation,
                    label,
                    &named.strategy,
                    config.grid,
                    config.n_runs,
                    config.seed,
                    ai,
                )?;
                let time_to_threshold = time_to_threshold(&curve.mean, config.grid, config.threshold);
                cells.push(CellResult {
                    strategy: si,
                    alpha_index: ai,
                    alpha,
                    label,
                    curve,
                    success_rate,
                    time_to_threshold,
                });
                progress(cells.last().expect("just pushed"), cells.len(), total);
            }
        }
    }
    Ok(EnsembleResult {
        grid: config.grid,
        strategy_names: config.strategies.iter().map(|s| s.name.clone()).collect(),
        alphas: config.alphas.clone(),
        labels,
        threshold: config.threshold,
        cells,
    })
}

/// Label-averaged curve for one (strategy, α).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragedCurve {
    pub strategy: usize,
    pub alpha_index: usize,
    pub alpha: f64,
    /// Mean over labels of the per-label mean curves.
    pub mean: Vec<f64>,
    /// Run-level standard deviation pooled over labels,
    /// `sqrt(mean of per-label variances)`.
    pub std_runs: Vec<f64>,
    /// Standard deviation of the per-label means across labels.
    pub std_labels: Vec<f64>,
    /// Standard error of `mean`, `sqrt(Σ stderr²)/L`.
    pub stderr: Vec<f64>,
    pub labels: usize,
    pub time_to_threshold: Option<f64>,
}

/// Averages each (strategy, α) over the simulated correct labels.
pub fn average_over_correct_states(result: &EnsembleResult) -> Vec<AveragedCurve> {
    let mut out = Vec::new();
    for si in 0..result.strategy_names.len() {
        for (ai, &alpha) in result.alphas.iter().enumerate() {
            let cells: Vec<&CellResult> = result
                .cells
                .iter()
                .filter(|c| c.strategy == si && c.alpha_index == ai)
                .collect();
            if cells.is_empty() {
                continue;
            }
            let l = cells.len() as f64;
            let points = cells[0].curve.mean.len();
            let mut mean = vec![0.0; points];
            let mut std_runs = vec![0.0; points];
            let mut std_labels = vec![0.0; points];
            let mut stderr = vec![0.0; points];
            for k in 0..points {
                let m = cells.iter().map(|c| c.curve.mean[k]).sum::<f64>() / l;
                mean[k] = m;
                std_runs[k] = (cells.iter().map(|c| c.curve.std[k].powi(2)).sum::<f64>() / l).sqrt();
                std_labels[k] = if cells.len() > 1 {
                    (cells.iter().map(|c| (c.curve.mean[k] - m).powi(2)).sum::<f64>() / (l - 1.0)).sqrt()
                } else {
                    0.0
                };
                stderr[k] = cells.iter().map(|c| c.curve.stderr[k].powi(2)).sum::<f64>().sqrt() / l;
            }
            let time_to_threshold = time_to_threshold(&mean, result.grid, result.threshold);
            out.push(AveragedCurve {
                strategy: si,
                alpha_index: ai,
                alpha,
                mean,
                std_runs,
                std_labels,
                stderr,
                labels: cells.len(),
                time_to_threshold,
            });
        }
    }
    out
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub strategy: String,
    pub alpha: f64,
    pub time: f64,
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
    pub std_labels: f64,
    pub time_to_threshold: Option<f64>,
}

/// Label-averaged values at each of `times`, per (strategy, α).
pub fn summarize(result: &EnsembleResult, times: &[f64]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for avg in average_over_correct_states(result) {
        for &time in times {
            let k = result.grid.index_at(time);
            rows.push(SummaryRow {
                strategy: result.strategy_names[avg.strategy].clone(),
                alpha: avg.alpha,
                time: result.grid.time(k),
                mean: avg.mean[k],
                std: avg.std_runs[k],
                stderr: avg.stderr[k],
                std_labels: avg.std_labels[k],
                time_to_threshold: avg.time_to_threshold,
            });
        }
    }
    rows
}

/// Monte Carlo estimate of the two-phase success probability
/// `½[Pr(ln Λ > 0 | +) + Pr(ln Λ < 0 | −)]` at the grid horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessEstimate {
    pub p_plus: f64,
    pub p_minus: f64,
    pub p_c: f64,
    pub stderr: f64,
    pub n_runs: usize,
}

pub fn success_probability_n2(
    constellation: &Constellation,
    strategy: &Strategy,
    alpha: f64,
    grid: TimeGrid,
    n_runs: usize,
    seed: u64,
) -> Result<SuccessEstimate, Error> {
    if constellation.len() != 2 {
        return Err(crate::filter::FilterError::Arity(constellation.len()).into());
    }
    if n_runs == 0 {
        return Err(Error::Config("n_runs must be at least 1".into()));
    }
    strategy.validate(constellation)?;
    let c = constellation.with_amplitude(alpha)?;
    let rate = |label: usize| -> Result<f64, Error> {
        let cell = cell_id(&[label as u64]);
        let chunks = n_runs.div_ceil(CHUNK);
        let wins: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut wins = 0.0;
                for run in chunk * CHUNK..((chunk + 1) * CHUNK).min(n_runs) {
                    let key = StreamKey::new(seed, cell, run as u64);
                    let (_, state) = simulate_trajectory(&c, label, strategy, grid, key, false)?;
                    let llr = state.log_likelihood_ratio()?;
                    let correct = if label == 0 { llr > 0.0 } else { llr < 0.0 };
                    wins += if llr == 0.0 { 0.5 } else { f64::from(u8::from(correct)) };
                }
                Ok(wins)
            })
            .collect::<Result<_, Error>>()?;
        Ok(wins.iter().sum::<f64>() / n_runs as f64)
    };
    let p_plus = rate(0)?;
    let p_minus = rate(1)?;
    let n = n_runs as f64;
    let var = p_plus * (1.0 - p_plus) / n + p_minus * (1.0 - p_minus) / n;
    Ok(SuccessEstimate {
        p_plus,
        p_minus,
        p_c: (p_plus + p_minus) / 2.0,
        stderr: var.sqrt() / 2.0,
        n_runs,
    })
}

/// One row of a heterodyne rate sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub rate: f64,
    pub alpha: f64,
    pub time: f64,
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
}

/// Runs `config` once per heterodyne cycling rate (initial phase 0) in place
/// of its strategy list, summarising at `config.report_times`.
pub fn strategy_sweep(config: &ExperimentConfig, rates: &[f64]) -> Result<Vec<SweepRow>, Error> {
    if rates.is_empty() {
        return Err(Error::Config("rate list is empty".into()));
    }
    let mut rows = Vec::new();
    for &rate in rates {
        let strategy = Strategy::heterodyne(rate);
        strategy.validate(&config.constellation)?;
        let cfg = ExperimentConfig {
            strategies: vec![NamedStrategy::new(strategy)],
            ..config.clone()
        };
        let result = run_ensemble(&cfg)?;
        for row in summarize(&result, &cfg.report_times) {
            rows.push(SweepRow {
                rate,
                alpha: row.alpha,
                time: row.time,
                mean: row.mean,
                std: row.std,
                stderr: row.stderr,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn four() -> Constellation {
        Constellation::build(&[4.0 * PI / 10.0, 3.0 * PI / 10.0], 5.0).unwrap()
    }

    fn small_config(strategies: Vec<NamedStrategy>) -> ExperimentConfig {
        let grid = TimeGrid::new(1e-2, 0.5).unwrap();
        let mut cfg = ExperimentConfig::new(four(), strategies, vec![3.0], grid);
        cfg.n_runs = 40;
        cfg.seed = 9;
        cfg
    }

    #[test]
    fn zero_amplitude_stays_uniform() {
        let mut cfg = small_config(vec![
            NamedStrategy::new(Strategy::AdaptiveTopTwo),
            NamedStrategy::new(Strategy::heterodyne(100.0 * PI)),
        ]);
        cfg.alphas = vec![0.0];
        cfg.correct_state = CorrectState::Average;
        let result = run_ensemble(&cfg).unwrap();
        for cell in &result.cells {
            assert!(cell.curve.mean.iter().all(|&m| (m - 0.25).abs() < 1e-12));
            assert!(cell.curve.std.iter().all(|&s| s < 1e-12));
            assert_eq!(cell.time_to_threshold, None);
        }
        // threshold at the prior is met immediately
        let curve = &result.cells[0].curve.mean;
        assert_eq!(time_to_threshold(curve, result.grid, 0.25), Some(0.0));
    }

    #[test]
    fn single_run_cell_matches_its_stream() {
        let mut cfg = small_config(vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)]);
        cfg.n_runs = 1;
        cfg.alphas = vec![1.0, 3.0];
        let result = run_ensemble(&cfg).unwrap();
        let label = cfg.labels()[0];
        let c = cfg.constellation.with_amplitude(3.0).unwrap();
        let key = ensemble_stream(cfg.seed, 1, label, 0);
        let (record, _) = simulate_trajectory(&c, label, &Strategy::AdaptiveTopTwo, cfg.grid, key, true).unwrap();
        assert_eq!(
            result.cell(0, 1, label).unwrap().curve.mean,
            record.posterior_history.unwrap()
        );
    }

    #[test]
    fn deterministic_and_bounded() {
        let cfg = small_config(vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)]);
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&cfg).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| run_ensemble(&cfg)).unwrap();
        assert_eq!(a, c);
        for cell in &a.cells {
            let n = cell.curve.n as f64;
            for k in 0..cell.curve.mean.len() {
                assert!((0.0..=1.0).contains(&cell.curve.mean[k]));
                assert_eq!(cell.curve.stderr[k], cell.curve.std[k] / n.sqrt());
            }
        }
    }

    #[test]
    fn fixed_label_defaults_to_smallest_positive_phase() {
        let cfg = small_config(vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)]);
        assert_eq!(cfg.correct_state, CorrectState::Fixed(1));
        assert_eq!(cfg.labels(), vec![1]);
    }

    #[test]
    fn averaging_matches_hand_computation() {
        let mut cfg = small_config(vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)]);
        cfg.correct_state = CorrectState::Average;
        let result = run_ensemble(&cfg).unwrap();
        let avg = &average_over_correct_states(&result)[0];
        let k = 30;
        let means: Vec<f64> = result.cells.iter().map(|c| c.curve.mean[k]).collect();
        let m = means.iter().sum::<f64>() / 4.0;
        assert!((avg.mean[k] - m).abs() < 1e-15);
        let sl = (means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 3.0).sqrt();
        assert!((avg.std_labels[k] - sl).abs() < 1e-15);
        let rows = summarize(&result, &[0.2, 0.5]);
        assert_eq!(rows.len(), 2);
        assert!((rows[0].time - 0.2).abs() < 1e-12);
        assert_eq!(rows[1].mean, avg.mean[50]);
    }

    #[test]
    fn validation_errors() {
        let mut cfg = small_config(vec![NamedStrategy::new(Strategy::OptimalTwoPhase)]);
        assert!(matches!(run_ensemble(&cfg), Err(Error::Strategy(_))));
        cfg.strategies = vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)];
        cfg.n_runs = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.n_runs = 1;
        cfg.threshold = 1.0;
        assert!(cfg.validate().is_err());
        cfg.threshold = 0.5;
        cfg.alphas = vec![-1.0];
        assert!(cfg.validate().is_err());
        cfg.alphas = vec![1.0];
        cfg.correct_state = CorrectState::Fixed(9);
        assert!(matches!(cfg.validate(), Err(Error::Label { .. })));
        cfg.correct_state = CorrectState::Average;
        cfg.report_times = vec![2.0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn n2_success_probability_basics() {
        let pair = Constellation::build(&[PI / 10.0], 1.0).unwrap();
        let grid = TimeGrid::new(1e-2, 1.0).unwrap();
        // in-phase with the bisector: no discriminating signal at all
        let null = success_probability_n2(&pair, &Strategy::homodyne(0.0), 3.0, grid, 200, 1).unwrap();
        assert_eq!(null.p_c, 0.5);
        let zero = success_probability_n2(&pair, &Strategy::OptimalTwoPhase, 0.0, grid, 200, 1).unwrap();
        assert_eq!(zero.p_c, 0.5);
        let best = success_probability_n2(&pair, &Strategy::OptimalTwoPhase, 3.0, grid, 200, 1).unwrap();
        assert!(best.p_c > 0.8);
        assert!(best.stderr > 0.0);
        let four = four();
        assert!(success_probability_n2(&four, &Strategy::AdaptiveTopTwo, 1.0, grid, 10, 1).is_err());
    }

    #[test]
    fn sweep_shapes() {
        let cfg = small_config(vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)]);
        let rows = strategy_sweep(&cfg, &[100.0 * PI]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(strategy_sweep(&cfg, &[]).is_err());
        assert!(strategy_sweep(&cfg, &[-1.0]).is_err());
    }

    #[test]
    fn slow_heterodyne_is_homodyne_at_initial_phase() {
        let mut cfg = small_config(vec![NamedStrategy::new(Strategy::homodyne(0.0))]);
        cfg.grid = TimeGrid::new(1e-2, 0.3).unwrap();
        cfg.report_times = vec![0.3];
        let homodyne = run_ensemble(&cfg).unwrap();
        let sweep = strategy_sweep(&cfg, &[1e-12]).unwrap();
        let h = summarize(&homodyne, &[0.3]);
        assert!((sweep[0].mean - h[0].mean).abs() < 1e-9);
    }
}
