use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use resolv_cli::commands::{self, DetectParams, Method};
use resolv_cli::config::ModelConfig;
use resolv_cli::grid::GammaGrid;
use resolv_cli::sweep::{run_sweep, SweepConfig};
use resolv_cli::truth::{GraphTruth, Reference, TruthFormat};
use resolv_cli::{exit, CliError, CliResult};
use resolv_core::io::read_communities;
use resolv_core::LouvainOptions;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  runtime failure (I/O, unwritable output)
  2  usage error (bad or missing flags)
  3  parse error (malformed edge list, community file, or JSON)
  4  validation error (parameters or model constraints violated)";

#[derive(Parser)]
#[command(name = "resolv", version, about = "Community detection with resolution bounds", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph from a model config; writes PREFIX.edges,
    /// PREFIX.communities and PREFIX.provenance.json.
    Generate(GenerateArgs),
    /// Detect communities with Louvain at a fixed γ or with the multiscale
    /// recursion; writes PREFIX.communities and PREFIX.json.
    Detect(DetectArgs),
    /// Density matrix, admissible γ interval and planted-partition fits for
    /// a graph and a community assignment.
    Bounds(BoundsArgs),
    /// Louvain over a γ grid and several seeds, scored against ground truth.
    Sweep(SweepArgs),
    /// NMI, ARI and F-measure of a detected partition against a reference.
    Metrics(MetricsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Louvain,
    Multiscale,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TruthFormatArg {
    /// `node community` per line.
    Pairs,
    /// One community per line, best first; may overlap.
    Lines,
}

impl From<TruthFormatArg> for TruthFormat {
    fn from(f: TruthFormatArg) -> Self {
        match f {
            TruthFormatArg::Pairs => TruthFormat::Pairs,
            TruthFormatArg::Lines => TruthFormat::Lines,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// JSON model config tagged by "model": dcsbm, extended_ppm, plateau, er, clique.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path prefix.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    /// Whitespace-separated edge list.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Louvain)]
    method: MethodArg,
    /// Resolution for louvain.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Base resolution for multiscale.
    #[arg(long, default_value_t = 0.5)]
    gamma0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Recursion depth cap for multiscale.
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
    /// Multiscale accepts smaller subgraphs without testing them.
    #[arg(long, default_value_t = 3)]
    min_size: usize,
    /// Seeded Louvain runs per maximization; the best Q is kept.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Output path prefix; without it the JSON report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `node community` file covering every graph node.
    #[arg(long)]
    truth: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, value_enum, default_value_t = TruthFormatArg::Pairs)]
    truth_format: TruthFormatArg,
    /// Inclusive grid `lo:hi:steps`.
    #[arg(long)]
    grid: GammaGrid,
    /// Louvain runs per γ.
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    /// Master seed; run j uses a seed derived from (master, j).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seeded Louvain restarts inside each run; the best Q is kept.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Mean NMI defining the stable interval.
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    /// Worker thread cap.
    #[arg(long, env = "RESOLV_THREADS")]
    threads: Option<usize>,
    /// Stdout format when --out is omitted.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path prefix; writes PREFIX.json and PREFIX.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// `node community` file.
    #[arg(long)]
    detected: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, value_enum, default_value_t = TruthFormatArg::Pairs)]
    truth_format: TruthFormatArg,
    /// Score only against the first K reference communities (ranked files).
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn emit(out: Option<&Path>, contents: &str) -> CliResult<()> {
    match out {
        Some(path) => write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(args) => {
            let config = ModelConfig::load(&args.config)?;
            let out = commands::generate(&config, args.seed)?;
            write(&with_suffix(&args.out, ".edges"), &out.edges)?;
            write(&with_suffix(&args.out, ".communities"), &out.communities)?;
            write(&with_suffix(&args.out, ".provenance.json"), &out.provenance)
        }
        Command::Detect(args) => {
            let graph = commands::load_graph(&args.graph)?;
            let params = DetectParams {
                method: match args.method {
                    MethodArg::Louvain => Method::Louvain,
                    MethodArg::Multiscale => Method::Multiscale,
                },
                gamma: args.gamma,
                gamma0: args.gamma0,
                seed: args.seed,
                max_depth: args.max_depth,
                min_size: args.min_size,
                restarts: args.restarts,
            };
            let detected = commands::detect(&graph, &params)?;
            let report = json(&detected.report)?;
            match args.out {
                Some(prefix) => {
                    write(&with_suffix(&prefix, ".communities"), &detected.communities)?;
                    write(&with_suffix(&prefix, ".json"), &report)
                }
                None => emit(None, &report),
            }
        }
        Command::Bounds(args) => {
            let graph = commands::load_graph(&args.graph)?;
            let report = commands::bounds(&graph, &args.truth)?;
            emit(args.out.as_deref(), &json(&report)?)
        }
        Command::Sweep(args) => {
            let graph = commands::load_graph(&args.graph)?;
            let reference = Reference::load(&args.truth, args.truth_format.into())?;
            let truth = GraphTruth::align(&reference, &graph.labels)?;
            let config = SweepConfig {
                gammas: args.grid.values(),
                seeds: args.seeds,
                master_seed: args.seed,
                threshold: args.threshold,
                threads: args.threads,
                louvain: LouvainOptions {
                    restarts: args.restarts,
                    ..LouvainOptions::default()
                },
            };
            let report = run_sweep(&graph.graph, &truth, &config)?;
            match args.out {
                Some(prefix) => {
                    write(&with_suffix(&prefix, ".json"), &json(&report)?)?;
                    write(&with_suffix(&prefix, ".csv"), &report.to_csv())
                }
                None if args.format == Format::Csv => emit(None, &report.to_csv()),
                None => emit(None, &json(&report)?),
            }
        }
        Command::Metrics(args) => {
            let detected = read_communities(&args.detected)?;
            let reference = Reference::load(&args.truth, args.truth_format.into())?;
            let report = commands::metrics(&detected, &reference, args.top_k)?;
            let text = match args.format {
                Format::Json => json(&report)?,
                Format::Csv => report.to_csv(),
            };
            emit(args.out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit::SUCCESS),
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(e.exit_code())
        }
    }
}
