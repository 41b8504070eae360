use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "porttour", version, about = "Port numberings for periodic graph exploration")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a graph from one of the built-in families.
    Generate(GenerateArgs),
    /// Print the three-layer partition of a graph.
    Partition(PartitionArgs),
    /// Compute a port numbering.
    Label(LabelArgs),
    /// Run an agent on a labeled graph and write its trace.
    Simulate(SimulateArgs),
    /// Check a labeled graph (and optionally a witness walk).
    Verify(VerifyArgs),
    /// Shortest spanning right-hand cycle over all numberings (small graphs).
    Oracle(OracleArgs),
    /// Length ratios and operation counts over a batch of instances.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    DiamondChain,
    Diamond,
    Parachute,
    #[value(alias = "random")]
    RandomConnected,
    RandomTwoConnected,
    Cycle,
    Path,
    Star,
    Complete,
    Grid,
    Petersen,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge count for the random families (default 2n, capped).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Required by the random families, ignored otherwise.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the choice hooks that reproduce the parachute worst case.
    #[arg(long)]
    pub hooks_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    pub graph: PathBuf,
    /// First node to saturate.
    #[arg(long)]
    pub start: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Terse,
    General,
    Constmem,
}

#[derive(Args, Debug)]
pub struct LabelArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    pub graph: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Choice hooks for the general mode.
    #[arg(long)]
    pub hooks: Option<PathBuf>,
    /// Write the witness walk (terse and general modes).
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Sham edge sidecar for the constmem mode (default: `<output>.sham`).
    #[arg(long)]
    pub sham: Option<PathBuf>,
    /// Search budget for the spanning tree of the terse mode.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agent {
    Rh,
    Constmem,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub agent: Agent,
    pub labeled: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Entry port; 0 places a fresh agent.
    #[arg(long, default_value_t = 0)]
    pub port: usize,
    /// Sham edge sidecar; the run fails if an outside edge is used.
    #[arg(long)]
    pub sham: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub labeled: PathBuf,
    #[arg(long, value_enum, default_value = "rh")]
    pub agent: Agent,
    /// Witness walk to replay instead of searching for a spanning cycle.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub sham: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub graph: PathBuf,
    /// Largest number of numberings to enumerate, e.g. `1e7`.
    #[arg(long, default_value = "1e7", value_parser = parse_cap)]
    pub cap: u128,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMode {
    General,
    Terse,
    Constmem,
    All,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "random-connected")]
    pub family: Family,
    /// Node counts (random families) or family parameters `k` (parachute,
    /// diamond chain).
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub sizes: Vec<usize>,
    /// Instances per size for the random families.
    #[arg(long, default_value_t = 3)]
    pub instances: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Average degree of the random families.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: BenchMode,
    #[arg(long)]
    pub json: bool,
}

fn parse_cap(s: &str) -> Result<u128, String> {
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && (1.0..1e38).contains(&v) => Ok(v as u128),
        _ => Err(format!("not a count: {s:?}")),
    }
}
