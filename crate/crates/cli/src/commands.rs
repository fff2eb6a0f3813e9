//! Subcommand implementations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use phasediscrim::experiments::{
    ensemble_stream, run_ensemble_with_progress, strategy_sweep, summarize, ExperimentConfig,
};
use phasediscrim::{simulate_trajectory, Angle};

use crate::config::{aliasing_warnings, ConfigFile, Overrides};
use crate::manifest::{unix_now, CellEntry, RunManifest, RunStatus};
use crate::output::{write_curves, write_summary, write_sweep, write_trajectory};
use crate::plot::{plot_csv, PlotReport, PlotStyle};
use crate::CliError;

pub const CURVES_FILE: &str = "curves.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const TRAJECTORY_DIR: &str = "trajectories";

#[derive(Debug, Parser)]
#[command(
    name = "phasediscrim",
    version,
    about = "Monte Carlo experiments on adaptive phase discrimination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the phases and labels of a config's constellation and check that
    /// every sign pattern gives a distinct phase.
    Constellation { config: PathBuf },
    /// Run the ensemble described by a config.
    Run(RunArgs),
    /// Draw an SVG chart from a curves or summary CSV.
    Plot(PlotArgs),
    /// Repeat a config's ensemble for several heterodyne cycling rates.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Master seed, overriding the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "PHASEDISCRIM_THREADS")]
    pub threads: Option<usize>,
    /// Integration step, overriding the config.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time, overriding the config.
    #[arg(long)]
    pub horizon: Option<f64>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            dt: self.dt,
            horizon: self.horizon,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Output directory. Without it the summary table goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl RunArgs {
    pub fn new(config: impl Into<PathBuf>) -> Self {
        RunArgs {
            config: config.into(),
            out: None,
            common: CommonArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    pub config: PathBuf,
    /// Comma-separated rates such as `50pi,100pi`; defaults to the config's list.
    #[arg(long, value_delimiter = ',')]
    pub rates: Vec<Angle>,
    /// Output directory. Without it the sweep table goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    pub csv: PathBuf,
    #[arg(long, value_enum, default_value = "time")]
    pub style: PlotStyle,
    /// SVG path; defaults to the input with an `.svg` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load(path: &Path, common: &CommonArgs) -> Result<(ConfigFile, ExperimentConfig), CliError> {
    let mut file = ConfigFile::load(path)?;
    file.apply(common.overrides());
    let config = file.experiment()?;
    for warning in aliasing_warnings(&config) {
        eprintln!("{warning}");
    }
    Ok((file, config))
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))
}

/// Files created in an output directory, removed again if the command fails.
struct Outputs {
    dir: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
    subdirs: Vec<PathBuf>,
    done: bool,
}

impl Outputs {
    fn open(dir: &Path) -> Result<Self, CliError> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
        if !dir.is_dir() {
            return Err(CliError::Io(format!("{} is not a directory", dir.display())));
        }
        Ok(Outputs {
            dir: dir.to_path_buf(),
            created_dir,
            files: Vec::new(),
            subdirs: Vec::new(),
            done: false,
        })
    }

    fn subdir(&mut self, name: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        if !path.exists() {
            fs::create_dir(&path).map_err(|e| CliError::io(path.display(), e))?;
            self.subdirs.push(path.clone());
        }
        Ok(path)
    }

    fn create(&mut self, path: PathBuf) -> Result<std::io::BufWriter<fs::File>, CliError> {
        let file = fs::File::create(&path).map_err(|e| CliError::io(path.display(), e))?;
        self.files.push(path);
        Ok(std::io::BufWriter::new(file))
    }

    fn track(&mut self, path: PathBuf) {
        if !self.files.contains(&path) {
            self.files.push(path);
        }
    }

    fn relative(&self, path: &Path) -> PathBuf {
        path.strip_prefix(&self.dir).unwrap_or(path).to_path_buf()
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if self.done {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        for d in self.subdirs.iter().rev() {
            let _ = fs::remove_dir(d);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

/// Result of `constellation`: exit 0 when unique, 2 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstellationOutcome {
    pub phases: usize,
    pub collisions: usize,
}

impl ConstellationOutcome {
    pub fn exit_code(&self) -> u8 {
        if self.collisions == 0 {
            0
        } else {
            2
        }
    }
}

pub fn cmd_constellation<W: Write>(config: &Path, mut out: W) -> Result<ConstellationOutcome, CliError> {
    let file = ConfigFile::load(config)?;
    let c = file.constellation()?;
    let report = c.validate_unique(file.constellation.tolerance);
    let io = |e| CliError::io("stdout", e);
    writeln!(out, "label,phase,phase_over_pi").map_err(io)?;
    for (label, phase) in c.labels().iter().zip(c.phases()) {
        writeln!(out, "{label},{phase},{}", phase / std::f64::consts::PI).map_err(io)?;
    }
    writeln!(
        out,
        "{} phases, {} pairs checked, {} collision(s)",
        c.len(),
        report.pairs_checked,
        report.collisions.len()
    )
    .map_err(io)?;
    for col in &report.collisions {
        writeln!(
            out,
            "collision: {} and {} are {:.3e} rad apart",
            c.label(col.a),
            c.label(col.b),
            col.distance
        )
        .map_err(io)?;
    }
    Ok(ConstellationOutcome {
        phases: c.len(),
        collisions: report.collisions.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Rows in the summary table.
    pub summary_rows: usize,
    /// Files written below `--out`, relative to it.
    pub outputs: Vec<PathBuf>,
}

/// Runs the ensemble. With `--out`, writes `curves.csv`, `summary.csv`,
/// optional trajectory dumps and `manifest.json` there; otherwise prints the
/// summary to `stdout`.
pub fn cmd_run<W: Write>(args: &RunArgs, stdout: W) -> Result<RunOutcome, CliError> {
    let (file, config) = load(&args.config, &args.common)?;
    let pool = thread_pool(args.common.threads)?;
    let Some(dir) = &args.out else {
        let result = pool.install(|| run_ensemble_with_progress(&config, |_, _, _| {}))?;
        let rows = summarize(&result, &config.report_times);
        write_summary(stdout, &rows)?;
        return Ok(RunOutcome {
            summary_rows: rows.len(),
            outputs: Vec::new(),
        });
    };

    let clock = Instant::now();
    let mut outputs = Outputs::open(dir)?;
    let mut manifest = RunManifest::start(file.checksum(), config.seed, pool.current_num_threads());
    outputs.track(manifest.write(dir)?);

    let mut last = Instant::now();
    let mut timings = Vec::new();
    let result = pool.install(|| {
        run_ensemble_with_progress(&config, |_, _, _| {
            timings.push(last.elapsed().as_secs_f64());
            last = Instant::now();
        })
    })?;

    let curves = dir.join(CURVES_FILE);
    let mut w = outputs.create(curves.clone())?;
    write_curves(&mut w, &result, &config.constellation, file.experiment.curve_stride)?;
    w.flush().map_err(|e| CliError::io(curves.display(), e))?;
    drop(w);

    let rows = summarize(&result, &config.report_times);
    let summary = dir.join(SUMMARY_FILE);
    let mut w = outputs.create(summary.clone())?;
    write_summary(&mut w, &rows)?;
    w.flush().map_err(|e| CliError::io(summary.display(), e))?;
    drop(w);

    let dumps = file.experiment.dump_trajectories.min(config.n_runs);
    for (cell, seconds) in result.cells.iter().zip(&timings) {
        let name = &result.strategy_names[cell.strategy];
        let label = config.constellation.label(cell.label);
        let mut files = vec![outputs.relative(&curves)];
        if dumps > 0 {
            let traj_dir = outputs.subdir(TRAJECTORY_DIR)?;
            let strategy = config.strategies[cell.strategy].strategy;
            let c = config
                .constellation
                .with_amplitude(cell.alpha)
                .map_err(phasediscrim::Error::from)?;
            let tag: String = label
                .to_string()
                .chars()
                .map(|ch| if ch == '+' { 'p' } else { 'm' })
                .collect();
            for run in 0..dumps {
                let key = ensemble_stream(config.seed, cell.alpha_index, cell.label, run);
                let (record, _) = simulate_trajectory(&c, cell.label, &strategy, config.grid, key, true)?;
                let path = traj_dir.join(format!("{name}_a{}_{tag}_{run}.csv", cell.alpha_index));
                let mut w = outputs.create(path.clone())?;
                write_trajectory(&mut w, &record)?;
                w.flush().map_err(|e| CliError::io(path.display(), e))?;
                files.push(outputs.relative(&path));
            }
        }
        manifest.cells.push(CellEntry {
            strategy: name.clone(),
            alpha: cell.alpha,
            label: label.to_string(),
            seconds: *seconds,
            outputs: files,
        });
    }

    manifest.status = RunStatus::Complete;
    manifest.wall_seconds = Some(clock.elapsed().as_secs_f64());
    manifest.outputs = outputs.files.iter().map(|f| outputs.relative(f)).collect();
    manifest.write(dir)?;
    outputs.done = true;
    Ok(RunOutcome {
        summary_rows: rows.len(),
        outputs: manifest.outputs.clone(),
    })
}

/// Heterodyne rate sweep; writes `sweep.csv` under `--out` or to `stdout`.
pub fn cmd_sweep<W: Write>(args: &SweepArgs, stdout: W) -> Result<usize, CliError> {
    let (file, config) = load(&args.config, &args.common)?;
    let rates: Vec<f64> = if args.rates.is_empty() {
        file.experiment.rates.iter().map(|r| r.0).collect()
    } else {
        args.rates.iter().map(|r| r.0).collect()
    };
    if rates.is_empty() {
        return Err(CliError::Config(
            "no rates given on the command line or in [experiment] rates".into(),
        ));
    }
    let pool = thread_pool(args.common.threads)?;
    let rows = pool.install(|| strategy_sweep(&config, &rates))?;
    match &args.out {
        None => write_sweep(stdout, &rows)?,
        Some(dir) => {
            let mut outputs = Outputs::open(dir)?;
            let path = dir.join(SWEEP_FILE);
            let mut w = outputs.create(path.clone())?;
            write_sweep(&mut w, &rows)?;
            w.flush().map_err(|e| CliError::io(path.display(), e))?;
            outputs.done = true;
        }
    }
    Ok(rows.len())
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(PathBuf, PlotReport), CliError> {
    let out = args.out.clone().unwrap_or_else(|| args.csv.with_extension("svg"));
    let report = plot_csv(&args.csv, args.style, &out)?;
    Ok((out, report))
}

/// Dispatches a parsed command line and returns the process exit code.
pub fn run_cli(cli: Cli) -> u8 {
    let stdout = std::io::stdout().lock();
    let started = unix_now();
    let outcome = match &cli.command {
        Command::Constellation { config } => cmd_constellation(config, stdout).map(|o| o.exit_code()),
        Command::Run(args) => cmd_run(args, stdout).map(|o| {
            if let Some(dir) = &args.out {
                eprintln!(
                    "wrote {} file(s) to {} in {:.1}s",
                    o.outputs.len(),
                    dir.display(),
                    unix_now() - started
                );
            }
            0
        }),
        Command::Sweep(args) => cmd_sweep(args, stdout).map(|_| 0),
        Command::Plot(args) => cmd_plot(args).map(|(path, report)| {
            eprintln!("wrote {} ({} series)", path.display(), report.series);
            0
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
