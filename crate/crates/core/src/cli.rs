//! The `acos` command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 I/O, data or
//! configuration error. Every flag can also be set through an `ACOS_*`
//! environment variable (`ACOS_DATASET`, `ACOS_TAU`, ...).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acos::{load_dataset, Example, Split};
use crate::category::CategoryMap;
use crate::error::Error;
use crate::eval::{dataset_stats, score};
use crate::format::{linearize_example, FormatStyle};
use crate::parse::parse_output;
use crate::profile::DatasetKind;
use crate::scl::demo::{toy_demo, write_representations_tsv, DemoOptions};
use crate::scl::{contrastive_loss, run_suite, SclConfig, SclLoss, SuiteOptions};
use crate::synth::synthetic_corpus;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "acos", version, about = "ACOS quadruple generation formats, evaluation and contrastive-loss checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dataset statistics (sentences, categories, quads per type).
    Stats(StatsArgs),
    /// Write one generation target per example.
    Linearize(LinearizeArgs),
    /// Parse predictions and score them against gold quadruples.
    Evaluate(EvaluateArgs),
    /// Verify the contrastive loss against its reference and finite differences.
    SclCheck(SclCheckArgs),
    /// Train characteristic heads on a toy encoder and report separation.
    SclDemo(SclDemoArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StyleArg {
    GenNat,
    Paraphrase,
}

impl From<StyleArg> for FormatStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::GenNat => FormatStyle::GenNat,
            StyleArg::Paraphrase => FormatStyle::Paraphrase,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Rest,
    Laptop,
    LaptopL1,
}

impl From<ProfileArg> for DatasetKind {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Rest => DatasetKind::Rest,
            ProfileArg::Laptop => DatasetKind::Laptop,
            ProfileArg::LaptopL1 => DatasetKind::LaptopL1,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, env = "ACOS_OUT")]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of a plain-text table.
    #[arg(long, env = "ACOS_JSON")]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset TSV file.
    #[arg(long, env = "ACOS_DATASET")]
    pub dataset: PathBuf,
    /// Category map TSV (RAW_LABEL<TAB>description).
    #[arg(long, env = "ACOS_CATEGORY_MAP")]
    pub category_map: Option<PathBuf>,
    /// Use a shipped category map when --category-map is not given.
    #[arg(long, value_enum, env = "ACOS_PROFILE")]
    pub profile: Option<ProfileArg>,
    #[arg(long, value_enum, default_value = "gen-nat", env = "ACOS_STYLE")]
    pub style: StyleArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Dataset TSV files; repeat to pool train/dev/test.
    #[arg(long, required = true, env = "ACOS_DATASET", value_delimiter = ',')]
    pub dataset: Vec<PathBuf>,
    /// Warn when the number of categories differs.
    #[arg(long)]
    pub expected_categories: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct LinearizeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, env = "ACOS_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// One generated output per line, aligned with the dataset.
    #[arg(long, env = "ACOS_PREDICTIONS")]
    pub predictions: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SclCheckArgs {
    #[arg(long, default_value_t = 0, env = "ACOS_SEED")]
    pub seed: u64,
    #[arg(long, default_value_t = 0.25, env = "ACOS_TAU")]
    pub tau: f64,
    /// Random batches compared with the reference summation.
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    /// Random batches gradient-checked.
    #[arg(long, default_value_t = 100)]
    pub grad_cases: usize,
    /// Check a deliberately broken gradient (sign flipped); must fail.
    #[arg(long, hide = true)]
    pub negative_control: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SclDemoArgs {
    /// Train on this dataset instead of the synthetic corpus.
    #[arg(long, env = "ACOS_DATASET")]
    pub dataset: Option<PathBuf>,
    /// Size of the synthetic corpus.
    #[arg(long, default_value_t = 200)]
    pub synthetic: usize,
    /// key = value SCL configuration file.
    #[arg(long, env = "ACOS_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, env = "ACOS_PROFILE")]
    pub profile: Option<ProfileArg>,
    #[arg(long, env = "ACOS_TAU")]
    pub tau: Option<f64>,
    #[arg(long, env = "ACOS_ALPHA")]
    pub alpha: Option<f64>,
    #[arg(long, env = "ACOS_DROPOUT")]
    pub dropout: Option<f64>,
    #[arg(long, env = "ACOS_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DemoOptions::default().steps)]
    pub steps: usize,
    #[arg(long, default_value_t = DemoOptions::default().learning_rate)]
    pub learning_rate: f64,
    /// Write the trained representations as TSV here.
    #[arg(long, env = "ACOS_EXPORT")]
    pub export: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: EXIT_ERROR,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    Error::io(path, e).into()
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut w = open_output(out)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| io_error(out.unwrap_or(Path::new("<stdout>")), e))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn category_map(data: &DataArgs, xs: &[Example]) -> Result<CategoryMap, CliError> {
    if let Some(p) = &data.category_map {
        return Ok(CategoryMap::load(p)?);
    }
    if let Some(profile) = data.profile {
        return Ok(DatasetKind::from(profile).category_map());
    }
    log::warn!("no category map given; deriving descriptions mechanically from the dataset");
    Ok(CategoryMap::mechanical(
        xs.iter().flat_map(|x| x.quads.iter().map(|q| q.category.as_str())),
    )?)
}

pub fn cmd_stats(args: &StatsArgs) -> Result<i32, CliError> {
    let mut xs = Vec::new();
    for p in &args.dataset {
        xs.extend(load_dataset(p, Split::Test)?);
    }
    let stats = dataset_stats(&xs, args.expected_categories);
    let text = if args.output.json {
        to_json(&stats)
    } else {
        stats.to_text()
    };
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_linearize(args: &LinearizeArgs) -> Result<i32, CliError> {
    let xs = load_dataset(&args.data.dataset, Split::Test)?;
    let map = category_map(&args.data, &xs)?;
    let mut text = String::new();
    for (x, line) in xs.iter().zip(line_numbers(&xs)) {
        let target = linearize_example(x, args.data.style.into(), &map).map_err(|e| CliError {
            code: EXIT_ERROR,
            message: format!("{}: line {line}: {e}", args.data.dataset.display()),
        })?;
        text.push_str(&target);
        text.push('\n');
    }
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn line_numbers(xs: &[Example]) -> impl Iterator<Item = String> + '_ {
    xs.iter()
        .map(|x| x.id.rsplit('-').next().unwrap_or(&x.id).to_owned())
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<i32, CliError> {
    let golds = load_dataset(&args.data.dataset, Split::Test)?;
    let map = category_map(&args.data, &golds)?;
    let path = &args.predictions;
    let content = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let lines: Vec<&str> = content.lines().collect();
    if lines.len() != golds.len() {
        return Err(Error::LengthMismatch {
            left: lines.len(),
            right: golds.len(),
        }
        .into());
    }
    let style: FormatStyle = args.data.style.into();
    let mut dropped = 0;
    let preds: Vec<_> = lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let out = parse_output(line, style, &map);
            for w in &out.warnings {
                log::debug!("prediction line {}: {w}", i + 1);
            }
            dropped += out.dropped;
            out.quads
        })
        .collect();
    let report = score(&preds, &golds)?.with_dropped(dropped);
    let text = if args.output.json {
        to_json(&report)
    } else {
        report.to_text()
    };
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn sign_flipped(reps: ndarray::ArrayView2<f64>, labels: &[usize], tau: f64) -> crate::Result<SclLoss> {
    let mut out = contrastive_loss(reps, labels, tau)?;
    out.grad.mapv_inplace(|g| -g);
    Ok(out)
}

pub fn cmd_scl_check(args: &SclCheckArgs) -> Result<i32, CliError> {
    let opts = SuiteOptions {
        seed: args.seed,
        tau: args.tau,
        oracle_cases: args.cases,
        grad_cases: args.grad_cases,
        ..SuiteOptions::default()
    };
    SclConfig {
        tau: args.tau,
        ..SclConfig::default()
    }
    .validate()?;
    let report = if args.negative_control {
        run_suite(&opts, sign_flipped)?
    } else {
        run_suite(&opts, contrastive_loss)?
    };
    let text = if args.output.json {
        to_json(&report)
    } else {
        report.summary() + "\n"
    };
    emit(args.output.out.as_deref(), &text)?;
    if report.passed() {
        Ok(EXIT_OK)
    } else {
        for f in &report.failures {
            eprintln!("failing case: {}", serde_json::to_string(f).expect("serializes"));
        }
        Ok(EXIT_FAILURE)
    }
}

/// Resolves the SCL configuration: profile or file, then flag overrides.
fn scl_config(args: &SclDemoArgs) -> Result<SclConfig, CliError> {
    let mut cfg = match (&args.config, args.profile) {
        (Some(p), _) => SclConfig::load(p)?,
        (None, Some(profile)) => DatasetKind::from(profile).scl_config(),
        (None, None) => SclConfig::default(),
    };
    if let Some(t) = args.tau {
        cfg.tau = t;
    }
    if let Some(a) = args.alpha {
        cfg.alpha = [a; 3];
    }
    if let Some(d) = args.dropout {
        cfg.dropout_p = d;
    }
    if let Some(s) = args.seed {
        cfg.rng_seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn cmd_scl_demo(args: &SclDemoArgs) -> Result<i32, CliError> {
    let scl = scl_config(args)?;
    let corpus = match &args.dataset {
        Some(p) => load_dataset(p, Split::Train)?,
        None => synthetic_corpus(args.synthetic, scl.rng_seed),
    };
    let opts = DemoOptions {
        scl,
        steps: args.steps,
        learning_rate: args.learning_rate,
        ..DemoOptions::default()
    };
    let report = toy_demo(&corpus, &opts)?;
    if let Some(p) = &args.export {
        let f = File::create(p).map_err(|e| io_error(p, e))?;
        write_representations_tsv(&report.representations, BufWriter::new(f))
            .map_err(|e| io_error(p, e))?;
    }
    let text = if args.output.json {
        to_json(&report)
    } else {
        report.to_text()
    };
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Stats(a) => cmd_stats(a),
        Command::Linearize(a) => cmd_linearize(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::SclCheck(a) => cmd_scl_check(a),
        Command::SclDemo(a) => cmd_scl_demo(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
