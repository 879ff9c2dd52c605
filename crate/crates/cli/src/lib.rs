//! The `topikrank` command line: one subcommand per pipeline stage, each a
//! pure function of its input files and flags.

pub mod pipeline;
pub mod stages;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use topikrank_core::SimilarityMetric;

/// Default directory for relative artifact paths when set.
pub const DATA_DIR_ENV: &str = "TOPIKRANK_DATA_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl From<topikrank_core::Error> for CliError {
    fn from(e: topikrank_core::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<topikrank_server::ServerError> for CliError {
    fn from(e: topikrank_server::ServerError) -> Self {
        match e {
            topikrank_server::ServerError::Core(c) => c.into(),
            topikrank_server::ServerError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "topikrank", version, about = "Rank the latent topics of a blog corpus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a directory of blog XML files into a corpus file.
    Ingest(IngestArgs),
    /// Train LDA by collapsed Gibbs sampling.
    Train(TrainArgs),
    /// Build a topic network from a model or a doc-topics table.
    Network(NetworkArgs),
    /// Rank topics by weighted PageRank over a network.
    Rank(RankArgs),
    /// Render a topic cloud as SVG.
    ExportCloud(ExportCloudArgs),
    /// Bundle every artifact into a navigator index.
    BuildIndex(BuildIndexArgs),
    /// Serve the navigator API over an index.
    Serve(ServeArgs),
    /// Run every stage from a manifest file.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Replaces the bundled English stop list.
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub topics: usize,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to 50 / topics.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    #[arg(long)]
    pub output: PathBuf,
    /// Also write the doc-topics TSV here.
    #[arg(long)]
    pub doc_topics: Option<PathBuf>,
    /// Print the top words of every topic to stdout.
    #[arg(short = 'n', long)]
    pub top_words: Option<usize>,
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    #[arg(long, conflicts_with = "doc_topics", required_unless_present = "doc_topics")]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub doc_topics: Option<PathBuf>,
    #[arg(long)]
    pub metric: SimilarityMetric,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub graphml: Option<PathBuf>,
    /// Node labels for the GraphML export.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: usize,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    #[arg(long, default_value_t = 42)]
    pub layout_seed: u64,
    #[arg(long, default_value_t = 10.0)]
    pub min_font: f64,
    #[arg(long, default_value_t = 48.0)]
    pub max_font: f64,
}

#[derive(Debug, Args)]
pub struct ExportCloudArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub layout: LayoutArgs,
}

#[derive(Debug, Args)]
pub struct BuildIndexArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// One per metric; paired with `--scores` by metric tag.
    #[arg(long, required = true)]
    pub network: Vec<PathBuf>,
    #[arg(long, required = true)]
    pub scores: Vec<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub layout: LayoutArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Directory of UI assets served at `/`.
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    1
                }
            };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Ingest(a) => stages::ingest(&a),
        Command::Train(a) => stages::train(&a),
        Command::Network(a) => stages::network(&a),
        Command::Rank(a) => stages::rank(&a),
        Command::ExportCloud(a) => stages::export_cloud(&a),
        Command::BuildIndex(a) => stages::build_index(&a),
        Command::Serve(a) => stages::serve(&a),
        Command::Pipeline(a) => pipeline::run_manifest(&stages::resolve(&a.manifest)),
    }
}
