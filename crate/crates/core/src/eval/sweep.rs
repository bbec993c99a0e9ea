use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::{evaluate_split, generate_synthetic, Encoder, EvalError, EvalReport, Protocol, SyntheticSpec};
use crate::data::{DescriptorDataset, Hyperparameters};
use crate::solver::{exclusivity_penalty, train};

/// One swept hyperparameter and its values.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepGrid {
    Lambda1(Vec<f64>),
    DBar(Vec<usize>),
}

impl SweepGrid {
    pub fn name(&self) -> &'static str {
        match self {
            SweepGrid::Lambda1(_) => "lambda1",
            SweepGrid::DBar(_) => "d_bar",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepGrid::Lambda1(v) => v.len(),
            SweepGrid::DBar(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, i: usize, base: &Hyperparameters) -> (f64, Hyperparameters) {
        match self {
            SweepGrid::Lambda1(v) => (v[i], Hyperparameters { lambda1: v[i], ..*base }),
            SweepGrid::DBar(v) => (v[i] as f64, Hyperparameters { d_bar: v[i], ..*base }),
        }
    }
}

/// Parses `lambda1=0.01,0.1,1` or `d_bar=2,4,8`.
impl FromStr for SweepGrid {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, values) = s
            .split_once('=')
            .ok_or_else(|| EvalError::Config(format!("grid '{s}' is not of the form name=v1,v2,...")))?;
        let items: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
        if items.is_empty() {
            return Err(EvalError::Config(format!("grid '{s}' has no values")));
        }
        let bad = |v: &str| EvalError::Config(format!("bad grid value '{v}' in '{s}'"));
        match name.trim() {
            "lambda1" => items
                .iter()
                .map(|v| v.parse::<f64>().ok().filter(|x| *x >= 0.0 && x.is_finite()).ok_or_else(|| bad(v)))
                .collect::<Result<_, _>>()
                .map(SweepGrid::Lambda1),
            "d_bar" | "prototypes" => items
                .iter()
                .map(|v| v.parse::<usize>().ok().filter(|x| *x > 0).ok_or_else(|| bad(v)))
                .collect::<Result<_, _>>()
                .map(SweepGrid::DBar),
            other => Err(EvalError::Config(format!("unknown grid parameter '{other}' (use lambda1 or d_bar)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub report: EvalReport,
    /// Exclusivity penalty of the selection trained on the whole dataset
    /// with the base seed.
    pub exclusivity: f64,
    pub final_objective: f64,
}

/// Trains and evaluates every grid point. Grid points run in parallel; the
/// result keeps grid order. Errors name the failing point.
pub fn run_sweep(
    ds: &DescriptorDataset,
    grid: &SweepGrid,
    base: &Hyperparameters,
    protocol: &Protocol,
    train_fraction: f64,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>, EvalError> {
    if grid.is_empty() {
        return Err(EvalError::Config("empty grid".into()));
    }
    let semi = matches!(protocol.encoder, Encoder::Prolfa { semi: true, .. });
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (value, hyper) = grid.point(i, base);
            let annotate = |e: EvalError| EvalError::Config(format!("{}={value}: {e}", grid.name()));
            let full = train(ds, &Hyperparameters { seed: seed as u32, ..hyper }).map_err(|e| annotate(e.into()))?;
            let p = protocol.with_encoder(Encoder::Prolfa { hyper, semi });
            let report = evaluate_split(ds, train_fraction, &p, repetitions, seed).map_err(annotate)?;
            Ok(SweepPoint {
                value,
                report,
                exclusivity: exclusivity_penalty(&full.state.c),
                final_objective: full.model.final_objective,
            })
        })
        .collect()
}

pub fn write_sweep_csv(
    points: &[SweepPoint],
    grid_name: &str,
    path: impl AsRef<Path>,
    comments: &[String],
) -> Result<(), EvalError> {
    let mut out = String::new();
    for c in comments {
        out += &format!("# {c}\n");
    }
    out += &format!("{grid_name},metric,mean,std,repetitions,exclusivity,final_objective\n");
    for p in points {
        out += &format!(
            "{},{},{},{},{},{},{}\n",
            p.value,
            p.report.metric,
            p.report.mean,
            p.report.std,
            p.report.repetitions(),
            p.exclusivity,
            p.final_objective
        );
    }
    write_text(path.as_ref(), &out)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), EvalError> {
    let mut f = std::fs::File::create(path).map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes()).map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingRow {
    pub n: usize,
    /// Median training time over the repeats, seconds.
    pub seconds: f64,
    pub outer_iterations: usize,
    pub admm_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingTable {
    pub rows: Vec<TimingRow>,
    /// Least-squares fit `seconds ≈ slope · N + intercept`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ a x + b`; returns `(a, b, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}

/// Wall-clock training time on synthetic data for each `N` (samples of
/// `base.points_per_sample` descriptors). Each size is trained `repeats`
/// times and the median is kept. Sizes run one after another so timings do
/// not compete for cores.
pub fn run_timing_benchmark(
    n_grid: &[usize],
    base: &SyntheticSpec,
    hyper: &Hyperparameters,
    repeats: usize,
) -> Result<TimingTable, EvalError> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvalError::Config("N grid must be non-empty and strictly ascending".into()));
    }
    let repeats = repeats.max(1);
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n % base.points_per_sample != 0 {
            return Err(EvalError::Config(format!(
                "N = {n} is not a multiple of {} descriptors per sample",
                base.points_per_sample
            )));
        }
        let ds = generate_synthetic(&base.with_points(n))?;
        let mut times = Vec::with_capacity(repeats);
        let mut iters = (0, 0);
        for _ in 0..repeats {
            let start = Instant::now();
            let t = train(&ds, hyper)?;
            times.push(start.elapsed().as_secs_f64());
            iters = (t.state.objective_trace.len() - 1, t.state.admm_trace.len());
        }
        times.sort_by(f64::total_cmp);
        rows.push(TimingRow {
            n,
            seconds: times[times.len() / 2],
            outer_iterations: iters.0,
            admm_iterations: iters.1,
        });
        log::info!("N = {n}: {:.4}s", times[times.len() / 2]);
    }
    let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.seconds).collect();
    let (slope, intercept, r_squared) = linear_fit(&x, &y);
    Ok(TimingTable {
        rows,
        slope,
        intercept,
        r_squared,
    })
}

pub fn write_timing_csv(table: &TimingTable, path: impl AsRef<Path>, comments: &[String]) -> Result<(), EvalError> {
    let mut out = String::new();
    for c in comments {
        out += &format!("# {c}\n");
    }
    out += &format!("# fit slope={} intercept={} r_squared={}\n", table.slope, table.intercept, table.r_squared);
    out += "n,seconds,fit_seconds,outer_iterations,admm_iterations\n";
    for r in &table.rows {
        out += &format!(
            "{},{},{},{},{}\n",
            r.n,
            r.seconds,
            table.slope * r.n as f64 + table.intercept,
            r.outer_iterations,
            r.admm_iterations
        );
    }
    write_text(path.as_ref(), &out)
}
