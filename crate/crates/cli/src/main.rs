//! `reflector`: analyze essays, serve the engine, evaluate runs, lint
//! prompt databases and summarize corpora.
//!
//! Exit codes: 0 success, 1 domain rejection (gate or lint), 2 input or
//! schema error.

mod analyze;
mod eval;
mod lint;
mod stats;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reflector::classifiers::ClusteringId;
use reflector::gate::GateMode;
use reflector::metrics::EvalTask;
use reflector::{LanguageCode, SeedPolicy};
use reflector_service::config::{parse_gate_mode, parse_seed_policy};
use reflector_service::{ConfigOverrides, ServiceConfig};

pub const DEFAULT_CONFIG: &str = "reflector.toml";

#[derive(Debug, Parser)]
#[command(name = "reflector", version, about = "Feedback engine for reflective essays")]
struct Cli {
    /// Configuration file. Falls back to ./reflector.toml when present.
    #[arg(long, global = true, env = "REFLECTOR_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze essay files and print feedback reports.
    Analyze(AnalyzeArgs),
    /// Run the WebSocket and HTTP service.
    Serve(ServeArgs),
    /// Score a prediction file against gold annotations.
    Eval(EvalArgs),
    /// Check a prompt database for gaps.
    PromptsLint(LintArgs),
    /// Summarize a directory of essays.
    CorpusStats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Essay files (UTF-8 plain text).
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Seed for prompt variant choice.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Feedback language; defaults to the detected input language.
    #[arg(long)]
    pub lang: Option<LanguageCode>,
    #[arg(long, value_parser = parse_clustering)]
    pub clustering: Option<ClusteringId>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write one report per input into this directory instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long)]
    listen: Option<SocketAddr>,
    #[arg(long)]
    max_text_chars: Option<usize>,
    #[arg(long)]
    store_path: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    forbidden_path: Option<PathBuf>,
    #[arg(long)]
    prompts_path: Option<PathBuf>,
    #[arg(long, value_parser = parse_gate_mode)]
    gate_mode: Option<GateMode>,
    /// `text_hash`, `random` or a fixed integer.
    #[arg(long, value_parser = parse_seed_policy)]
    seed_policy: Option<SeedPolicy>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long, value_parser = parse_task)]
    pub task: EvalTask,
    /// Number of labels in the emotion scheme.
    #[arg(long)]
    pub scheme_size: Option<usize>,
    /// A previous JSON report; deltas against it are printed.
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct LintArgs {
    /// Prompt database; the bundled one when omitted.
    pub path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Directory searched recursively for `.txt` files.
    pub dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn parse_clustering(s: &str) -> Result<ClusteringId, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = ClusteringId::ALL.iter().map(|c| c.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_task(s: &str) -> Result<EvalTask, String> {
    s.parse()
}

/// Process outcome shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Rejected = 1,
    InputError = 2,
}

impl From<Status> for ExitCode {
    fn from(status: Status) -> Self {
        ExitCode::from(status as u8)
    }
}

/// `--config`, then `$REFLECTOR_CONFIG` (both via clap), then
/// `./reflector.toml` if it exists.
fn config_path(explicit: Option<PathBuf>) -> Option<PathBuf> {
    explicit.or_else(|| Path::new(DEFAULT_CONFIG).exists().then(|| PathBuf::from(DEFAULT_CONFIG)))
}

fn load_config(explicit: Option<PathBuf>, flags: &ConfigOverrides) -> anyhow::Result<ServiceConfig> {
    Ok(ServiceConfig::resolve(config_path(explicit).as_deref(), std::env::vars(), flags)?)
}

fn init_logging(level: tracing_subscriber::filter::LevelFilter) {
    tracing_subscriber::fmt().with_writer(std::io::stderr).with_max_level(level).init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => {
            init_logging(tracing_subscriber::filter::LevelFilter::WARN);
            load_config(cli.config, &ConfigOverrides::default()).and_then(|c| analyze::run(&c, &args))
        }
        Command::Serve(args) => {
            init_logging(tracing_subscriber::filter::LevelFilter::INFO);
            let flags = ConfigOverrides {
                listen: args.listen,
                max_text_chars: args.max_text_chars,
                store_path: args.store_path,
                workers: args.workers,
                data_dir: args.data_dir,
                forbidden_path: args.forbidden_path,
                prompts_path: args.prompts_path,
                gate_mode: args.gate_mode,
                seed_policy: args.seed_policy,
            };
            load_config(cli.config, &flags).and_then(|config| {
                let runtime = tokio::runtime::Runtime::new()?;
                runtime.block_on(reflector_service::serve(config))?;
                Ok(Status::Ok)
            })
        }
        Command::Eval(args) => eval::run(&args),
        Command::PromptsLint(args) => lint::run(&args),
        Command::CorpusStats(args) => {
            load_config(cli.config, &ConfigOverrides::default()).and_then(|c| stats::run(&c, &args))
        }
    };
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            Status::InputError.into()
        }
    }
}
