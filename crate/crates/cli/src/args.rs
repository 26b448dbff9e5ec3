use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semigraph::engine::{DEFAULT_MAX_RUNNING, DEFAULT_RANGE_SHIFT};
use semigraph::store::DEFAULT_ANCHOR_STRIDE;

#[derive(Debug, Parser)]
#[command(
    name = "semigraph",
    version,
    about = "Semi-external-memory graph engine"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a text edge list into .fgg/.fgi files.
    Convert(ConvertArgs),
    /// Run one algorithm over a converted graph.
    Run(RunArgs),
    /// Compare engine results against in-memory reference implementations.
    Verify(VerifyArgs),
    /// Sweep merging, page size and cache size on a synthetic graph.
    Bench(BenchArgs),
    /// Print header and index facts about a converted graph.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    pub graph: PathBuf,
    pub index: PathBuf,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, default_value_t = 0)]
    pub attr_bytes: u16,
    #[arg(long, default_value_t = DEFAULT_ANCHOR_STRIDE)]
    pub anchor_stride: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Bfs,
    Bc,
    Pr,
    Wcc,
    Tc,
    Ss,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Bfs,
        Algorithm::Bc,
        Algorithm::Pr,
        Algorithm::Wcc,
        Algorithm::Tc,
        Algorithm::Ss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bfs => "bfs",
            Algorithm::Bc => "bc",
            Algorithm::Pr => "pr",
            Algorithm::Wcc => "wcc",
            Algorithm::Tc => "tc",
            Algorithm::Ss => "ss",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

/// Engine knobs shared by `run`, `verify` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Cache capacity in pages; defaults to the whole file.
    #[arg(long)]
    pub cache_pages: Option<u64>,
    #[arg(long, default_value_t = 4096)]
    pub page_size: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: u32,
    /// Range-partition shift: 2^r consecutive vertices share a partition.
    #[arg(long, default_value_t = DEFAULT_RANGE_SHIFT)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub merging: Switch,
    #[arg(long, default_value_t = 1)]
    pub vertical_parts: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_RUNNING)]
    pub max_running: u32,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub stealing: Switch,
}

/// Algorithm parameters.
#[derive(Debug, Clone, Args)]
pub struct AlgoArgs {
    /// Source vertex for bfs and bc.
    #[arg(long, default_value_t = 0)]
    pub source: u32,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    pub d: f64,
    /// PageRank iteration cap.
    #[arg(long, default_value_t = 30)]
    pub iters: u32,
    /// PageRank activation threshold.
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    /// Disable degree-bound pruning in ss.
    #[arg(long)]
    pub no_prune: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub index: PathBuf,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// Result CSV (`vertex_id,value`); stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Per-iteration statistics CSV.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Cumulative I/O counters CSV.
    #[arg(long)]
    pub io_stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Text edge list the reference implementations read.
    pub input: PathBuf,
    /// Algorithms to check; all six if none are given.
    #[arg(value_enum)]
    pub algorithms: Vec<Algorithm>,
    #[arg(long)]
    pub directed: bool,
    /// Check these converted files instead of converting `input` in memory.
    #[arg(long, requires = "index")]
    pub graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    pub index: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    Merge,
    PageSize,
    Cache,
    All,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_enum, default_value_t = Sweep::All)]
    pub sweep: Sweep,
    #[arg(long, default_value_t = 100_000)]
    pub vertices: u32,
    #[arg(long, default_value_t = 8)]
    pub avg_degree: u32,
    /// Generate a power-law graph instead of Erdős–Rényi.
    #[arg(long)]
    pub power_law: bool,
    #[arg(long, default_value_t = 1)]
    pub threads: u32,
    /// Results CSV; stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub index: PathBuf,
}
