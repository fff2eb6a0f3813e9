//! CSV writers.
//!
//! Column order is fixed and every file starts with a header row. Floats are
//! written in Rust's shortest round-trip form, so identical results give
//! identical bytes.

use std::io::Write;

use phasediscrim::experiments::{average_over_correct_states, EnsembleResult, SummaryRow, SweepRow};
use phasediscrim::{Constellation, TrajectoryRecord};

use crate::CliError;

pub const CURVES_HEADER: [&str; 7] = ["strategy", "alpha", "label", "t", "mean", "std", "stderr"];
pub const SUMMARY_HEADER: [&str; 8] = [
    "strategy",
    "alpha",
    "time",
    "mean",
    "std",
    "stderr",
    "time_to_threshold",
    "std_labels",
];
pub const SWEEP_HEADER: [&str; 6] = ["rate", "alpha", "time", "mean", "std", "stderr"];
pub const TRAJECTORY_HEADER: [&str; 5] = ["step", "t", "lo_phase", "increment", "posterior_correct"];

/// Label written for rows averaged over every correct state.
pub const ALL_LABELS: &str = "all";

/// Placeholder for a threshold that was never reached.
pub const NOT_REACHED: &str = "NA";

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn num(x: f64) -> String {
    x.to_string()
}

/// Per-cell curves, then label-averaged curves when more than one label was
/// simulated. Only every `stride`-th grid point is written, plus the last.
pub fn write_curves<W: Write>(
    out: W,
    result: &EnsembleResult,
    constellation: &Constellation,
    stride: usize,
) -> Result<(), CliError> {
    let stride = stride.max(1);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVES_HEADER).map_err(csv_err)?;
    let points = result.grid.steps() + 1;
    let keep = |k: usize| k.is_multiple_of(stride) || k + 1 == points;
    for cell in &result.cells {
        let name = &result.strategy_names[cell.strategy];
        let label = constellation.label(cell.label).to_string();
        for k in (0..points).filter(|&k| keep(k)) {
            w.write_record([
                name.clone(),
                num(cell.alpha),
                label.clone(),
                num(result.grid.time(k)),
                num(cell.curve.mean[k]),
                num(cell.curve.std[k]),
                num(cell.curve.stderr[k]),
            ])
            .map_err(csv_err)?;
        }
    }
    if result.labels.len() > 1 {
        for avg in average_over_correct_states(result) {
            let name = &result.strategy_names[avg.strategy];
            for k in (0..points).filter(|&k| keep(k)) {
                w.write_record([
                    name.clone(),
                    num(avg.alpha),
                    ALL_LABELS.to_string(),
                    num(result.grid.time(k)),
                    num(avg.mean[k]),
                    num(avg.std_runs[k]),
                    num(avg.stderr[k]),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(|e| CliError::io("writing curves", e))
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.strategy.clone(),
            num(r.alpha),
            num(r.time),
            num(r.mean),
            num(r.std),
            num(r.stderr),
            r.time_to_threshold.map_or_else(|| NOT_REACHED.to_string(), num),
            num(r.std_labels),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io("writing summary", e))
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            num(r.rate),
            num(r.alpha),
            num(r.time),
            num(r.mean),
            num(r.std),
            num(r.stderr),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io("writing sweep", e))
}

/// One row per step: `t` is the step start, `posterior_correct` the value
/// after the step's increment has been absorbed.
pub fn write_trajectory<W: Write>(out: W, record: &TrajectoryRecord) -> Result<(), CliError> {
    let posterior = record
        .posterior_history
        .as_ref()
        .ok_or_else(|| CliError::Schema("trajectory has no posterior history".into()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER).map_err(csv_err)?;
    for (k, (&lo, &inc)) in record.lo_phases.iter().zip(&record.increments).enumerate() {
        w.write_record([
            k.to_string(),
            num(record.grid.time(k)),
            num(lo),
            num(inc),
            num(posterior[k + 1]),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io("writing trajectory", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use phasediscrim::experiments::{run_ensemble, CorrectState, ExperimentConfig, NamedStrategy};
    use phasediscrim::{simulate_trajectory, Strategy, StreamKey, TimeGrid};

    fn tiny(correct: CorrectState) -> (ExperimentConfig, EnsembleResult) {
        let c = Constellation::build(&[0.4, 0.3], 2.0).unwrap();
        let grid = TimeGrid::new(0.25, 0.5).unwrap();
        let mut cfg = ExperimentConfig::new(c, vec![NamedStrategy::new(Strategy::AdaptiveTopTwo)], vec![2.0], grid);
        cfg.n_runs = 3;
        cfg.correct_state = correct;
        let result = run_ensemble(&cfg).unwrap();
        (cfg, result)
    }

    fn lines(bytes: &[u8]) -> Vec<String> {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .lines()
            .map(str::to_owned)
            .collect()
    }

    #[test]
    fn curves_golden_layout() {
        let (cfg, result) = tiny(CorrectState::Fixed(1));
        let mut buf = Vec::new();
        write_curves(&mut buf, &result, &cfg.constellation, 1).unwrap();
        let lines = lines(&buf);
        assert_eq!(lines[0], "strategy,alpha,label,t,mean,std,stderr");
        assert_eq!(lines.len(), 1 + 3);
        assert_eq!(lines[1], "adaptive,2,+-,0,0.25,0,0");
        assert!(lines[3].starts_with("adaptive,2,+-,0.5,"));
    }

    #[test]
    fn curves_average_rows_and_stride() {
        let (cfg, result) = tiny(CorrectState::Average);
        let mut buf = Vec::new();
        write_curves(&mut buf, &result, &cfg.constellation, 2).unwrap();
        let lines = lines(&buf);
        // 4 labels + "all", each at t = 0 and t = 0.5
        assert_eq!(lines.len(), 1 + 5 * 2);
        assert!(lines.iter().filter(|l| l.contains(",all,")).count() == 2);
    }

    #[test]
    fn summary_golden_layout() {
        let rows = vec![
            SummaryRow {
                strategy: "static".into(),
                alpha: 5.0,
                time: 0.2,
                mean: 0.8595,
                std: 0.1,
                stderr: 0.004,
                std_labels: 0.01,
                time_to_threshold: Some(0.031),
            },
            SummaryRow {
                strategy: "adaptive".into(),
                alpha: 1.0,
                time: 1.0,
                mean: 0.4,
                std: 0.2,
                stderr: 0.01,
                std_labels: 0.0,
                time_to_threshold: None,
            },
        ];
        let mut buf = Vec::new();
        write_summary(&mut buf, &rows).unwrap();
        assert_eq!(
            lines(&buf),
            [
                "strategy,alpha,time,mean,std,stderr,time_to_threshold,std_labels",
                "static,5,0.2,0.8595,0.1,0.004,0.031,0.01",
                "adaptive,1,1,0.4,0.2,0.01,NA,0",
            ]
        );
    }

    #[test]
    fn sweep_golden_layout() {
        let rows = vec![SweepRow {
            rate: 314.0,
            alpha: 5.0,
            time: 1.0,
            mean: 0.97,
            std: 0.1,
            stderr: 0.002,
        }];
        let mut buf = Vec::new();
        write_sweep(&mut buf, &rows).unwrap();
        assert_eq!(
            lines(&buf),
            ["rate,alpha,time,mean,std,stderr", "314,5,1,0.97,0.1,0.002"]
        );
    }

    #[test]
    fn trajectory_layout() {
        let c = Constellation::build(&[0.4], 3.0).unwrap();
        let grid = TimeGrid::new(0.1, 0.3).unwrap();
        let (rec, state) =
            simulate_trajectory(&c, 0, &Strategy::homodyne(1.0), grid, StreamKey::new(1, 2, 3), true).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &rec).unwrap();
        let lines = lines(&buf);
        assert_eq!(lines[0], "step,t,lo_phase,increment,posterior_correct");
        assert_eq!(lines.len(), 1 + 3);
        assert!(lines[1].starts_with("0,0,1,"));
        let last: f64 = lines[3].rsplit(',').next().unwrap().parse().unwrap();
        assert!((last - state.posterior()[0]).abs() < 1e-12);

        let (bare, _) =
            simulate_trajectory(&c, 0, &Strategy::homodyne(1.0), grid, StreamKey::new(1, 2, 3), false).unwrap();
        assert!(matches!(write_trajectory(Vec::new(), &bare), Err(CliError::Schema(_))));
    }
}
