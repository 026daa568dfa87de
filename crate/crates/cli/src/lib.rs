//! Command-line front end for fidsamp: model selection, seeding, CSV and
//! JSON output, and experiment orchestration.

pub mod emit;
pub mod registry;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::builder::{PossibleValue, PossibleValuesParser};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fidsamp_core::group::{finite_loop_invariant_measure, quasigroup_check};
use fidsamp_core::inference::{coverage_experiment, IntervalSpec};
use fidsamp_core::models1d::{lindley_separability_test, SEPARABILITY_THRESHOLD};
use fidsamp_core::{LoopTable, RandomStream};

use emit::{emit, Format, SummaryDoc};
use registry::{Kind, ModelEntry, Params};

/// Seed used when neither `--seed` nor `FIDSAMP_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_231_001;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] fidsamp_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fidsamp", version, about = "Fiducial and posterior Monte Carlo sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a fiducial sample and print its summary.
    Sample(SampleArgs),
    /// Draw a posterior sample and print its summary.
    Posterior(SampleArgs),
    /// Repeated-sampling coverage of central fiducial intervals.
    Coverage(CoverageArgs),
    /// Lindley's separability test on the model's sampling CDF.
    Separability(SeparabilityArgs),
    /// Quasigroup, loop and invariant-measure checks on an operation table.
    LoopCheck(LoopCheckArgs),
}

fn model_ids() -> PossibleValuesParser {
    PossibleValuesParser::new(
        registry::REGISTRY
            .iter()
            .map(|m| PossibleValue::new(m.id).help(m.about)),
    )
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model id.
    #[arg(long, value_parser = model_ids())]
    pub model: String,
    /// Known gamma shape.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of observations behind the statistic.
    #[arg(long = "n-obs")]
    pub n_obs: Option<f64>,
    /// Observed statistic.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Known noise standard deviation.
    #[arg(long)]
    pub sigma0: Option<f64>,
    /// Observed sample correlation.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Observed sample standard deviation (divisor n).
    #[arg(long)]
    pub scale: Option<f64>,
    /// Probability of the first noise atom.
    #[arg(long)]
    pub p: Option<f64>,
    /// Half-width of a uniform prior.
    #[arg(long)]
    pub bound: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Random seed; falls back to FIDSAMP_SEED, then to a fixed default.
    #[arg(long, env = "FIDSAMP_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of draws.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// File receiving the sample.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the sample file.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Level of the central interval in the summary.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// True parameter value.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    /// Number of replications.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Fiducial draws per replication.
    #[arg(long, default_value_t = 199)]
    pub samples: usize,
    /// Nominal level of the central interval.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct SeparabilityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Monte Carlo replicates for simulated CDFs.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Observation grid as lo:hi:points.
    #[arg(long = "t-grid")]
    pub t_grid: Option<GridArg>,
    /// Parameter grid as lo:hi:points.
    #[arg(long = "theta-grid")]
    pub theta_grid: Option<GridArg>,
}

#[derive(Debug, Args)]
pub struct LoopCheckArgs {
    /// Table file: the order on the first line, then one row per line.
    #[arg(long)]
    pub table: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridArg {
    pub fn nodes(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:points, got {s}"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
        let points: usize = n.parse().map_err(|e| format!("points: {e}"))?;
        if !(hi > lo) || points < 2 {
            return Err(format!("need lo < hi and at least two points, got {s}"));
        }
        Ok(Self { lo, hi, points })
    }
}

#[derive(Debug, Serialize)]
struct CoverageDoc {
    model: String,
    params: std::collections::BTreeMap<String, f64>,
    seed: u64,
    truth: f64,
    level: f64,
    samples: usize,
    replications: usize,
    hits: usize,
    rate: f64,
    std_error: f64,
    failures: usize,
}

#[derive(Debug, Serialize)]
struct SeparabilityDoc {
    model: String,
    params: std::collections::BTreeMap<String, f64>,
    seed: u64,
    max_residual: f64,
    threshold: f64,
    separable: bool,
}

#[derive(Debug, Serialize)]
struct InvariantDoc {
    uniform: bool,
    nullspace_dim: usize,
    weights: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct LoopDoc {
    order: usize,
    quasigroup: bool,
    #[serde(rename = "loop")]
    is_loop: bool,
    identity: Option<usize>,
    associative: bool,
    invariant_measure: Option<InvariantDoc>,
}

/// Runs the command line `args` (program name first), writing JSON to `out`
/// and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Sample(a) => sample(a, Kind::Fiducial, out),
        Command::Posterior(a) => sample(a, Kind::Posterior, out),
        Command::Coverage(a) => coverage(a, out),
        Command::Separability(a) => separability(a, out),
        Command::LoopCheck(a) => loop_check(a, out),
    }
}

fn print_json<S: Serialize>(out: &mut dyn Write, doc: &S) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| CliError::Io(format!("standard output: {e}")))
}

/// Model entry and its parameters. Observed statistics may be absent when
/// `observed` is false; they are then left out of the map.
fn resolve(a: &ModelArgs, observed: bool) -> Result<(&'static ModelEntry, Params), CliError> {
    let entry = registry::lookup(&a.model)
        .ok_or_else(|| CliError::Usage(format!("unknown model {}", a.model)))?;
    let given = [
        ("alpha", a.alpha),
        ("n-obs", a.n_obs),
        ("t", a.t),
        ("sigma0", a.sigma0),
        ("r", a.r),
        ("scale", a.scale),
        ("p", a.p),
        ("bound", a.bound),
    ];
    for (name, v) in given {
        if v.is_some() && !entry.params.iter().any(|p| p.name == name) {
            return Err(CliError::Usage(format!("model {} does not take --{name}", entry.id)));
        }
    }
    let mut params = Params::new();
    for spec in entry.params {
        let v = given
            .iter()
            .find(|(n, _)| *n == spec.name)
            .and_then(|(_, v)| *v)
            .or(spec.default);
        match v {
            Some(v) => {
                params.insert(spec.name, v);
            }
            None if spec.observed && !observed => {}
            None => {
                return Err(CliError::Usage(format!("model {} needs --{}", entry.id, spec.name)))
            }
        }
    }
    Ok((entry, params))
}

fn string_keys(p: &Params) -> std::collections::BTreeMap<String, f64> {
    p.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn sample(a: SampleArgs, kind: Kind, out: &mut dyn Write) -> Result<(), CliError> {
    let (entry, params) = resolve(&a.model, true)?;
    if entry.kind != kind {
        let cmd = match entry.kind {
            Kind::Fiducial => "sample",
            Kind::Posterior => "posterior",
        };
        return Err(CliError::Usage(format!("model {} is run by `{cmd}`", entry.id)));
    }
    if a.samples == 0 {
        return Err(CliError::Usage("refusing to emit an empty cloud: --samples is 0".into()));
    }
    let seed = a.seed.seed;
    let d = (entry.sample)(&params, a.samples, &mut RandomStream::new(seed, 0))?;
    let doc = SummaryDoc::build(entry.id, &params, seed, &d, a.level)?;
    if let Some(path) = &a.out {
        emit(&d, &doc, a.format, path)?;
    }
    print_json(out, &doc)
}

fn coverage(a: CoverageArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (entry, params) = resolve(&a.model, false)?;
    let simulate = entry
        .simulate
        .ok_or_else(|| CliError::Usage(format!("model {} does not support coverage", entry.id)))?;
    if a.samples == 0 || a.reps == 0 {
        return Err(CliError::Usage("--samples and --reps must be positive".into()));
    }
    let seed = a.seed.seed;
    let report = coverage_experiment(
        |s| simulate(&params, a.theta, s),
        |p, s| (entry.sample)(p, a.samples, s),
        a.theta,
        &IntervalSpec::symmetric(a.level)?,
        a.reps,
        &RandomStream::new(seed, 0),
    )?;
    print_json(
        out,
        &CoverageDoc {
            model: entry.id.to_string(),
            params: string_keys(&params),
            seed,
            truth: a.theta,
            level: a.level,
            samples: a.samples,
            replications: report.replications,
            hits: report.hits,
            rate: report.rate,
            std_error: report.std_error,
            failures: report.failures,
        },
    )
}

fn separability(a: SeparabilityArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (entry, params) = resolve(&a.model, false)?;
    let (make, (tg, thg)) = entry
        .cdf
        .ok_or_else(|| CliError::Usage(format!("model {} has no sampling CDF", entry.id)))?;
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let seed = a.seed.seed;
    let cdf = make(&params, a.samples, &mut RandomStream::new(seed, 0))?;
    let default_grid = |(lo, hi, points)| GridArg { lo, hi, points };
    let t_grid = a.t_grid.unwrap_or_else(|| default_grid(tg)).nodes();
    let theta_grid = a.theta_grid.unwrap_or_else(|| default_grid(thg)).nodes();
    let r = lindley_separability_test(cdf.as_ref(), &t_grid, &theta_grid)?;
    print_json(
        out,
        &SeparabilityDoc {
            model: entry.id.to_string(),
            params: string_keys(&params),
            seed,
            max_residual: r.max_residual,
            threshold: SEPARABILITY_THRESHOLD,
            separable: r.max_residual <= SEPARABILITY_THRESHOLD,
        },
    )
}

fn loop_check(a: LoopCheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.table)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.table.display())))?;
    let table: LoopTable = text
        .parse()
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.table.display())))?;
    let c = quasigroup_check(&table);
    let invariant_measure = if c.is_quasigroup {
        let m = finite_loop_invariant_measure(&table)?;
        Some(InvariantDoc {
            uniform: m.is_uniform,
            nullspace_dim: m.nullspace_dim,
            weights: m.weights,
        })
    } else {
        None
    };
    print_json(
        out,
        &LoopDoc {
            order: table.order(),
            quasigroup: c.is_quasigroup,
            is_loop: c.is_loop,
            identity: c.identity,
            associative: c.is_associative,
            invariant_measure,
        },
    )
}
