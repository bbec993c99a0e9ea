//! Command-line front end.
//!
//! ```text
//! prolfa synth     --output data.plfa [--seed 7] [--labeled-fraction 0.2]
//! prolfa train     --input data.plfa --output model.plfm [--semi] [--lambda1 ..]
//! prolfa aggregate --model model.plfm --input data.plfa --output reps.csv [--normalize]
//! prolfa eval      --input data.plfa --output report.txt [--repetitions 6] [--k 1]
//! prolfa sweep     --input data.plfa --output sweep.csv --grid d_bar=2,4,8
//! prolfa bench     --output timing.csv --bench-N 500,1000,2000,4000
//! ```
//!
//! `--config FILE` reads `key=value` lines (`#` comments, keys are long flag
//! names with `-` or `_`); flags on the command line win. Every output
//! records the resolved settings: CSV and report files as leading
//! `# key=value` lines, binary files in a `<output>.run.cfg` sidecar that is
//! itself a valid `--config` file.
//!
//! Exit codes: 0 success, 2 training stopped on an iteration cap, 3 usage or
//! configuration error, 4 data or format error, 5 solver failure, 6 I/O
//! failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::aggregate::{
    aggregate_dataset, aggregate_unlabeled, write_representations_binary, write_representations_csv,
    AggregateError, AggregatedRepresentation,
};
use crate::data::{
    load_model, read_descriptor_csv, read_descriptor_file, save_model, write_descriptor_file, DataError,
    DescriptorDataset, Hyperparameters,
};
use crate::eval::{
    evaluate_split, generate_synthetic, run_sweep, run_timing_benchmark, stratified_split, write_sweep_csv,
    write_timing_csv, Encoder, EvalError, Metric, Protocol, SweepGrid, SyntheticSpec, Task,
};
use crate::solver::{train, train_semi, SolverError, SolverState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CAPS: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_DATA: i32 = 4;
pub const EXIT_SOLVER: i32 = 5;
pub const EXIT_IO: i32 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Data(#[from] DataError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error(transparent)]
    Aggregate(#[from] AggregateError),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(DataError::Hyperparameters(_))
            | CliError::Solver(SolverError::Data(DataError::Hyperparameters(_)))
            | CliError::Eval(EvalError::Data(DataError::Hyperparameters(_)))
            | CliError::Eval(EvalError::Solver(SolverError::Data(DataError::Hyperparameters(_)))) => EXIT_USAGE,
            CliError::Data(DataError::Io { .. }) | CliError::Io { .. } => EXIT_IO,
            CliError::Data(_) => EXIT_DATA,
            CliError::Solver(SolverError::Data(_) | SolverError::MissingMask | SolverError::MissingResponses) => {
                EXIT_DATA
            }
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Eval(EvalError::Config(_)) => EXIT_USAGE,
            CliError::Eval(EvalError::Io(_)) => EXIT_IO,
            CliError::Eval(EvalError::Solver(SolverError::Data(_)) | EvalError::Data(_)) => EXIT_DATA,
            CliError::Eval(EvalError::Solver(_)) => EXIT_SOLVER,
            CliError::Eval(_) => EXIT_DATA,
            CliError::Aggregate(AggregateError::Io { .. }) => EXIT_IO,
            CliError::Aggregate(_) => EXIT_DATA,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "prolfa", version, about = "Prototype-selection local feature aggregation")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "PROLFA_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// `key=value` settings file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic Gaussian dataset.
    Synth(SynthArgs),
    /// Train a prototype model.
    Train(TrainArgs),
    /// Encode samples with a trained model.
    Aggregate(AggregateArgs),
    /// Split, train, encode and score over repetitions.
    Eval(EvalArgs),
    /// Evaluate over a lambda1 or d_bar grid.
    Sweep(SweepArgs),
    /// Training time against the number of descriptors.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub n_points: usize,
    #[arg(long, default_value_t = 10)]
    pub n_samples: usize,
    #[arg(long, default_value_t = 20)]
    pub points_per_sample: usize,
    #[arg(long, default_value_t = 2)]
    pub n_classes: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 6.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attach a stratified label mask with this fraction labeled.
    #[arg(long)]
    pub labeled_fraction: Option<f64>,
}

/// Solver settings shared by every training command.
#[derive(Debug, Clone, Args)]
pub struct HyperArgs {
    #[arg(long, default_value_t = Hyperparameters::default().lambda1)]
    pub lambda1: f64,
    #[arg(long, default_value_t = Hyperparameters::default().lambda2)]
    pub lambda2: f64,
    #[arg(long, default_value_t = Hyperparameters::default().mu)]
    pub mu: f64,
    /// Number of prototypes.
    #[arg(long, default_value_t = Hyperparameters::default().d_bar)]
    pub prototypes: usize,
    #[arg(long, default_value_t = Hyperparameters::default().eps_reweight)]
    pub eps_reweight: f64,
    #[arg(long, default_value_t = Hyperparameters::default().tol_inner_row)]
    pub tol_inner_row: f64,
    #[arg(long, default_value_t = Hyperparameters::default().tol_admm)]
    pub tol_admm: f64,
    #[arg(long, default_value_t = Hyperparameters::default().tol_outer)]
    pub tol_outer: f64,
    #[arg(long, default_value_t = Hyperparameters::default().max_inner_row)]
    pub max_inner_row: u32,
    #[arg(long, default_value_t = Hyperparameters::default().max_admm)]
    pub max_admm: u32,
    #[arg(long, default_value_t = Hyperparameters::default().max_outer)]
    pub max_outer: u32,
    #[arg(long, default_value_t = Hyperparameters::default().seed)]
    pub seed: u32,
}

impl HyperArgs {
    pub fn hyper(&self) -> Hyperparameters {
        Hyperparameters {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            mu: self.mu,
            d_bar: self.prototypes,
            eps_reweight: self.eps_reweight,
            tol_inner_row: self.tol_inner_row,
            tol_admm: self.tol_admm,
            tol_outer: self.tol_outer,
            max_inner_row: self.max_inner_row,
            max_admm: self.max_admm,
            max_outer: self.max_outer,
            seed: self.seed,
        }
    }
}

/// Dataset source: binary, or CSV with an optional label file.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Dataset file (`.csv` for the text import, anything else binary).
    #[arg(long)]
    pub input: PathBuf,
    /// `sample_id,class` file for CSV input.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

impl InputArgs {
    pub fn load(&self) -> Result<(DescriptorDataset, Option<Vec<String>>), CliError> {
        if is_csv(&self.input) {
            let (ds, ids) = read_descriptor_csv(&self.input, self.labels.as_deref())?;
            Ok((ds, Some(ids)))
        } else {
            Ok((read_descriptor_file(&self.input)?, None))
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Model file.
    #[arg(long)]
    pub output: PathBuf,
    /// Objective trace CSV (default `<output>.trace.csv`).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Regression terms over the dataset's labeled samples only.
    #[arg(long)]
    pub semi: bool,
    /// Leave the selection matrix out of the model file.
    #[arg(long)]
    pub no_selection: bool,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub model: PathBuf,
    /// `.csv` for text, anything else for the binary dataset format.
    #[arg(long)]
    pub output: PathBuf,
    /// Scale every representation to unit ℓ2 norm.
    #[arg(long)]
    pub normalize: bool,
    /// Only the samples the label mask leaves unlabeled.
    #[arg(long)]
    pub unlabeled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Classification,
    Retrieval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Cosine,
    Mahalanobis,
    Minkowski,
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value_t = TaskArg::Classification)]
    pub task: TaskArg,
    /// Fraction of each class used for training (or labeled, with --semi).
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 6)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    pub metric: MetricArg,
    /// Minkowski exponent.
    #[arg(long, default_value_t = Metric::DEFAULT_MINKOWSKI_P)]
    pub p: f64,
    #[arg(long)]
    pub normalize: bool,
    /// Semi-supervised training: every descriptor, training split labeled.
    #[arg(long)]
    pub semi: bool,
    /// Score the k-means bag-of-words baseline with this codebook size
    /// instead of a prototype model.
    #[arg(long)]
    pub baseline_codebook: Option<usize>,
    /// Seed of the first repetition's split.
    #[arg(long, default_value_t = 0)]
    pub split_seed: u64,
}

impl ProtocolArgs {
    pub fn protocol(&self, hyper: Hyperparameters) -> Result<Protocol, CliError> {
        let metric = match self.metric {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Cosine => Metric::Cosine,
            MetricArg::Mahalanobis => Metric::Mahalanobis,
            MetricArg::Minkowski => Metric::parse("minkowski", Some(self.p))?,
        };
        let encoder = match self.baseline_codebook {
            Some(codebook_size) => Encoder::KMeansBow { codebook_size },
            None => Encoder::Prolfa { hyper, semi: self.semi },
        };
        Ok(Protocol {
            task: match self.task {
                TaskArg::Classification => Task::Classification,
                TaskArg::Retrieval => Task::Retrieval,
            },
            encoder,
            k: self.k as usize,
            metric,
            normalize: self.normalize,
        })
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Report file (`key=value` lines).
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub output: PathBuf,
    /// `lambda1=v1,v2,..` or `d_bar=v1,v2,..`.
    #[arg(long)]
    pub grid: String,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub output: PathBuf,
    /// Ascending descriptor counts.
    #[arg(long = "bench-N", value_delimiter = ',', default_value = "500,1000,2000,4000")]
    pub bench_n: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub dim: usize,
    #[arg(long, default_value_t = 20)]
    pub points_per_sample: usize,
    /// Timed runs per size; the median is kept.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

const SUBCOMMANDS: [&str; 6] = ["synth", "train", "aggregate", "eval", "sweep", "bench"];

/// Settings in a `--config` file as extra arguments.
fn config_arguments(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected key=value, got '{line}'", path.display(), n + 1))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        // Provenance-only keys written by this tool.
        if matches!(key.as_str(), "command" | "version" | "config") {
            continue;
        }
        match value {
            "true" if is_switch(&key) => out.push(format!("--{key}").into()),
            "false" if is_switch(&key) => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

fn is_switch(key: &str) -> bool {
    matches!(key, "semi" | "normalize" | "no-selection" | "unlabeled")
}

/// Inserts `--config` file settings right after the subcommand so that
/// later command-line flags override them.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut config = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            config = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        }
    }
    let Some(path) = config else { return Ok(args) };
    let extra = config_arguments(&path)?;
    let at = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map_or(args.len(), |i| i + 1);
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

/// Resolved settings of the subcommand as `key=value` strings, defaults
/// included.
fn resolved_settings(name: &str, m: &ArgMatches) -> Vec<String> {
    let cmd = Cli::command();
    let args: Vec<String> = cmd
        .find_subcommand(name)
        .map(|c| c.get_arguments().map(|a| a.get_id().as_str().to_string()).collect())
        .unwrap_or_default();
    let mut ids: Vec<String> = m
        .ids()
        .map(|id| id.as_str().to_string())
        .filter(|id| args.contains(id))
        .collect();
    ids.sort();
    let mut out = vec![
        format!("command={name}"),
        format!("version={}", env!("CARGO_PKG_VERSION")),
    ];
    for id in ids {
        if matches!(id.as_str(), "config" | "verbose" | "threads") {
            continue;
        }
        if let Ok(Some(raw)) = m.try_get_raw(&id) {
            let values: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
            if !values.is_empty() {
                out.push(format!("{}={}", id.replace('_', "-"), values.join(",")));
            }
        }
    }
    out
}

fn is_csv(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".run.cfg");
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_sidecar(path: &Path, settings: &[String]) -> Result<(), CliError> {
    write_file(&sidecar(path), &(settings.join("\n") + "\n"))
}

fn comment_block(settings: &[String]) -> String {
    settings.iter().map(|s| format!("# {s}\n")).collect()
}

/// Objective trace CSV: one row per outer iteration.
pub fn write_trace_csv(state: &SolverState, path: &Path, settings: &[String]) -> Result<(), CliError> {
    let mut text = comment_block(settings);
    text += "k,objective,exclusivity,primal_residual,elapsed_seconds,admm_iterations,admm_converged\n";
    for r in &state.objective_trace {
        text += &format!(
            "{},{},{},{},{},{},{}\n",
            r.k, r.objective, r.exclusivity, r.primal_residual, r.elapsed, r.admm_iterations, r.admm_converged
        );
    }
    write_file(path, &text)
}

fn cmd_synth(a: &SynthArgs, settings: &[String]) -> Result<i32, CliError> {
    let spec = SyntheticSpec {
        n_points: a.n_points,
        n_samples: a.n_samples,
        points_per_sample: a.points_per_sample,
        n_classes: a.n_classes,
        dim: a.dim,
        class_separation: a.separation,
        noise_sigma: a.noise,
        seed: a.seed,
    };
    let mut ds = generate_synthetic(&spec)?;
    if let Some(f) = a.labeled_fraction {
        let labels = ds.labels().expect("synthetic data has responses");
        let (train, _) = stratified_split(&labels, f, a.seed)?;
        let mut mask = vec![false; ds.n_samples()];
        for i in train {
            mask[i] = true;
        }
        ds = ds.with_label_mask(Some(mask)).map_err(DataError::from)?;
    }
    write_descriptor_file(&ds, &a.output)?;
    write_sidecar(&a.output, settings)?;
    println!(
        "wrote {}: N = {}, m = {}, classes = {}, d = {}",
        a.output.display(),
        ds.n_descriptors(),
        ds.n_samples(),
        ds.n_outputs(),
        ds.dim()
    );
    Ok(EXIT_OK)
}

fn cmd_train(a: &TrainArgs, settings: &[String]) -> Result<i32, CliError> {
    let (ds, _) = a.input.load()?;
    let hyper = a.hyper.hyper();
    let trained = if a.semi { train_semi(&ds, &hyper)? } else { train(&ds, &hyper)? };
    let mut model = trained.model;
    if a.no_selection {
        model.selection = None;
    }
    save_model(&model, &a.output, Some(ds.descriptors()))?;
    write_sidecar(&a.output, settings)?;
    let trace = a.trace.clone().unwrap_or_else(|| {
        let mut s = a.output.as_os_str().to_owned();
        s.push(".trace.csv");
        PathBuf::from(s)
    });
    let state = &trained.state;
    write_trace_csv(state, &trace, settings)?;
    println!(
        "trained {} prototypes in {} outer iterations: objective {:.6e}, converged = {}, ADMM cap hits = {}",
        model.d_bar(),
        state.objective_trace.len() - 1,
        model.final_objective,
        state.converged,
        state.admm_cap_hits
    );
    Ok(if state.caps_hit() { EXIT_CAPS } else { EXIT_OK })
}

fn cmd_aggregate(a: &AggregateArgs, settings: &[String]) -> Result<i32, CliError> {
    let (ds, ids) = a.input.load()?;
    let model = load_model(&a.model)?;
    let mut reps = if a.unlabeled {
        aggregate_unlabeled(&ds, &model)?
    } else {
        aggregate_dataset(&ds, &model)?
    };
    if a.normalize {
        reps = reps.into_iter().map(AggregatedRepresentation::normalize).collect();
    }
    let rows: Vec<usize> = reps
        .iter()
        .map(|r| r.sample_id.parse().expect("sample index"))
        .collect();
    if let Some(ids) = ids {
        for (r, &i) in reps.iter_mut().zip(&rows) {
            r.sample_id = ids[i].clone();
        }
    }
    if is_csv(&a.output) {
        write_representations_csv(&reps, &a.output, settings)?;
    } else {
        let responses = ds
            .responses()
            .map(|y| nalgebra::DMatrix::from_fn(rows.len(), y.ncols(), |r, c| y[(rows[r], c)]));
        write_representations_binary(&reps, responses, &a.output)?;
        write_sidecar(&a.output, settings)?;
    }
    println!("wrote {} representations of length {}", reps.len(), model.d_bar());
    Ok(EXIT_OK)
}

fn cmd_eval(a: &EvalArgs, settings: &[String]) -> Result<i32, CliError> {
    let (ds, _) = a.input.load()?;
    let protocol = a.protocol.protocol(a.hyper.hyper())?;
    let report = evaluate_split(&ds, a.protocol.train_fraction, &protocol, a.protocol.repetitions, a.protocol.split_seed)?;
    write_file(&a.output, &(comment_block(settings) + &report.to_key_value()))?;
    println!(
        "{} {}: {:.4} ± {:.4} over {} repetitions",
        report.task.name(),
        report.metric,
        report.mean,
        report.std,
        report.repetitions()
    );
    Ok(EXIT_OK)
}

fn cmd_sweep(a: &SweepArgs, settings: &[String]) -> Result<i32, CliError> {
    let grid: SweepGrid = a.grid.parse()?;
    let (ds, _) = a.input.load()?;
    let hyper = a.hyper.hyper();
    let protocol = a.protocol.protocol(hyper)?;
    let points = run_sweep(&ds, &grid, &hyper, &protocol, a.protocol.train_fraction, a.protocol.repetitions, a.protocol.split_seed)?;
    write_sweep_csv(&points, grid.name(), &a.output, settings)?;
    for p in &points {
        println!(
            "{}={}: {} {:.4} ± {:.4}, exclusivity {:.4e}",
            grid.name(),
            p.value,
            p.report.metric,
            p.report.mean,
            p.report.std,
            p.exclusivity
        );
    }
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, settings: &[String]) -> Result<i32, CliError> {
    let base = SyntheticSpec {
        dim: a.dim,
        points_per_sample: a.points_per_sample,
        seed: a.data_seed,
        ..Default::default()
    };
    let table = run_timing_benchmark(&a.bench_n, &base, &a.hyper.hyper(), a.repeats)?;
    write_timing_csv(&table, &a.output, settings)?;
    for r in &table.rows {
        println!("N = {:>6}: {:.4}s", r.n, r.seconds);
    }
    println!("fit: {:.3e} s per descriptor, R² = {:.4}", table.slope, table.r_squared);
    Ok(EXIT_OK)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are printed to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
    if cli.threads > 0 {
        // Fails only if a pool already exists (e.g. a second call in-process).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let settings = resolved_settings(name, sub);
    let result = match &cli.command {
        Command::Synth(a) => cmd_synth(a, &settings),
        Command::Train(a) => cmd_train(a, &settings),
        Command::Aggregate(a) => cmd_aggregate(a, &settings),
        Command::Eval(a) => cmd_eval(a, &settings),
        Command::Sweep(a) => cmd_sweep(a, &settings),
        Command::Bench(a) => cmd_bench(a, &settings),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
