//! SVG line charts from the CSV outputs.

use std::collections::HashMap;
use std::path::Path;

use plotters::prelude::*;

use crate::output::{ALL_LABELS, NOT_REACHED};
use crate::CliError;

/// What to put on the axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotStyle {
    /// Posterior of the correct state against time (curves file).
    Time,
    /// Posterior against α at each reported time (summary file).
    Snr,
    /// Time to reach the threshold against α (summary file).
    Ttt,
}

impl PlotStyle {
    fn required(self) -> &'static [&'static str] {
        match self {
            PlotStyle::Time => &["strategy", "alpha", "label", "t", "mean"],
            PlotStyle::Snr => &["strategy", "alpha", "time", "mean"],
            PlotStyle::Ttt => &["strategy", "alpha", "time_to_threshold"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotReport {
    pub series: usize,
    pub points: usize,
    pub error_bars: usize,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    y: f64,
    err: Option<f64>,
}

struct Series {
    name: String,
    points: Vec<Point>,
}

/// Error bars per series on time plots; the curves have one point per step.
const TIME_ERROR_BARS: usize = 20;

struct Table {
    columns: HashMap<String, usize>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn read(path: &Path) -> Result<Self, CliError> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::io(path.display(), e))?;
        let headers = reader
            .headers()
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
            .clone();
        let columns = headers.iter().enumerate().map(|(i, h)| (h.to_string(), i)).collect();
        let rows = reader
            .records()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        if rows.is_empty() {
            return Err(CliError::Schema(format!("{} has no data rows", path.display())));
        }
        Ok(Table { columns, rows })
    }

    fn has(&self, column: &str) -> bool {
        self.columns.contains_key(column)
    }

    fn text<'r>(&self, row: &'r csv::StringRecord, column: &str) -> &'r str {
        row.get(self.columns[column]).unwrap_or("")
    }

    fn number(&self, row: &csv::StringRecord, column: &str) -> Result<f64, CliError> {
        let text = self.text(row, column);
        text.parse::<f64>()
            .map_err(|_| CliError::Schema(format!("column `{column}`: `{text}` is not a number")))
    }
}

fn push(series: &mut Vec<Series>, name: String, point: Point) {
    match series.iter_mut().find(|s| s.name == name) {
        Some(s) => s.points.push(point),
        None => series.push(Series {
            name,
            points: vec![point],
        }),
    }
}

fn collect(table: &Table, style: PlotStyle) -> Result<Vec<Series>, CliError> {
    let with_err = table.has("stderr");
    let err = |row| -> Result<Option<f64>, CliError> {
        if with_err {
            table.number(row, "stderr").map(Some)
        } else {
            Ok(None)
        }
    };
    let mut series = Vec::new();
    match style {
        PlotStyle::Time => {
            let averaged = table.rows.iter().any(|r| table.text(r, "label") == ALL_LABELS);
            for row in &table.rows {
                let label = table.text(row, "label");
                if averaged && label != ALL_LABELS {
                    continue;
                }
                let name = format!(
                    "{} α={} {}",
                    table.text(row, "strategy"),
                    table.text(row, "alpha"),
                    label
                );
                let point = Point {
                    x: table.number(row, "t")?,
                    y: table.number(row, "mean")?,
                    err: err(row)?,
                };
                push(&mut series, name, point);
            }
        }
        PlotStyle::Snr => {
            for row in &table.rows {
                let name = format!("{} t={}", table.text(row, "strategy"), table.text(row, "time"));
                let point = Point {
                    x: table.number(row, "alpha")?,
                    y: table.number(row, "mean")?,
                    err: err(row)?,
                };
                push(&mut series, name, point);
            }
        }
        PlotStyle::Ttt => {
            for row in &table.rows {
                let name = table.text(row, "strategy").to_string();
                let x = table.number(row, "alpha")?;
                if series
                    .iter()
                    .any(|s: &Series| s.name == name && s.points.iter().any(|p| p.x == x))
                {
                    continue;
                }
                if table.text(row, "time_to_threshold") == NOT_REACHED {
                    // keep the series in the legend even if nothing was reached
                    if !series.iter().any(|s| s.name == name) {
                        series.push(Series {
                            name,
                            points: Vec::new(),
                        });
                    }
                    continue;
                }
                let point = Point {
                    x,
                    y: table.number(row, "time_to_threshold")?,
                    err: None,
                };
                push(&mut series, name, point);
            }
        }
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.x.total_cmp(&b.x));
    }
    Ok(series)
}

fn range(values: impl Iterator<Item = f64>) -> std::ops::Range<f64> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return 0.0..1.0;
    }
    let pad = if hi > lo { (hi - lo) * 0.05 } else { 0.5 };
    lo - pad..hi + pad
}

fn draw_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Io(format!("drawing chart: {e}"))
}

/// Renders `input` as an SVG chart at `output`.
pub fn plot_csv(input: &Path, style: PlotStyle, output: &Path) -> Result<PlotReport, CliError> {
    let table = Table::read(input)?;
    let missing: Vec<&str> = style.required().iter().copied().filter(|c| !table.has(c)).collect();
    if !missing.is_empty() {
        return Err(CliError::Schema(format!(
            "{} lacks column(s) {} needed for this style",
            input.display(),
            missing.join(", ")
        )));
    }
    let series = collect(&table, style)?;
    let (caption, x_desc, y_desc) = match style {
        PlotStyle::Time => ("posterior of the correct state", "t", "P(correct)"),
        PlotStyle::Snr => ("posterior against amplitude", "alpha", "P(correct)"),
        PlotStyle::Ttt => ("time to threshold", "alpha", "t"),
    };
    let points = || series.iter().flat_map(|s| s.points.iter());
    let x_range = range(points().map(|p| p.x));
    let y_range = range(points().flat_map(|p| {
        let e = p.err.unwrap_or(0.0);
        [p.y - e, p.y + e]
    }));

    let mut svg = String::new();
    let mut error_bars = 0;
    {
        let root = SVGBackend::with_string(&mut svg, (800, 560)).into_drawing_area();
        root.fill(&WHITE).map_err(draw_err)?;
        let mut chart = ChartBuilder::on(&root)
            .caption(caption, ("sans-serif", 22))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(60)
            .build_cartesian_2d(x_range, y_range)
            .map_err(draw_err)?;
        chart
            .configure_mesh()
            .x_desc(x_desc)
            .y_desc(y_desc)
            .draw()
            .map_err(draw_err)?;
        for (i, s) in series.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            chart
                .draw_series(LineSeries::new(
                    s.points.iter().map(|p| (p.x, p.y)),
                    color.stroke_width(2),
                ))
                .map_err(draw_err)?
                .label(s.name.clone())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
            let every = match style {
                PlotStyle::Time => s.points.len().div_ceil(TIME_ERROR_BARS).max(1),
                _ => 1,
            };
            let bars: Vec<_> = s
                .points
                .iter()
                .step_by(every)
                .filter_map(|p| {
                    p.err
                        .map(|e| ErrorBar::new_vertical(p.x, p.y - e, p.y, p.y + e, color.filled(), 6))
                })
                .collect();
            error_bars += bars.len();
            chart.draw_series(bars).map_err(draw_err)?;
            if style != PlotStyle::Time {
                chart
                    .draw_series(s.points.iter().map(|p| Circle::new((p.x, p.y), 3, color.filled())))
                    .map_err(draw_err)?;
            }
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()
            .map_err(draw_err)?;
        root.present().map_err(draw_err)?;
    }
    std::fs::write(output, svg).map_err(|e| CliError::io(output.display(), e))?;
    Ok(PlotReport {
        series: series.len(),
        points: series.iter().map(|s| s.points.len()).sum(),
        error_bars,
    })
}
