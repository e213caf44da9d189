//! Command-line surface. Every value is kept as text so that it can be merged
//! with the INI config before typed parsing; comma-separated values form a
//! grid.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gwtool", version, about = "Gromov-Wasserstein experiment runner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align a graph with a relabeled (optionally noisy) copy, or with a given target.
    Align(AlignArgs),
    /// Partition a graph by aligning it to k isolated super nodes.
    Partition(PartitionArgs),
    /// Match a 2D point cloud with a rotated sample of the same shape.
    Match2d(Match2dArgs),
    /// Print diagnostics of a stored coupling as JSON.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// INI config file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Solver(s): bapg, bpg, ebpg, hbpg, fw.
    #[arg(long)]
    pub solver: Option<String>,
    /// BAPG geometry: entropy or quadratic.
    #[arg(long)]
    pub geometry: Option<String>,
    /// BAPG step size(s) rho.
    #[arg(long)]
    pub rho: Option<String>,
    /// BPG step size(s) t.
    #[arg(long)]
    pub step: Option<String>,
    /// eBPG regularization(s).
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub inner_iters: Option<String>,
    #[arg(long)]
    pub inner_tol: Option<String>,
    /// Relative-change stopping tolerance [default: 1e-6].
    #[arg(long)]
    pub rel_tol: Option<String>,
    /// Iteration cap [default: 2000].
    #[arg(long)]
    pub max_iters: Option<String>,
    /// hBPG warm-start budget.
    #[arg(long)]
    pub switch_iters: Option<String>,
    /// BPG mixing weight toward the uniform coupling.
    #[arg(long)]
    pub perturbation: Option<String>,
    /// Amplitude of the seeded jitter applied to the initial coupling.
    #[arg(long)]
    pub init_jitter: Option<String>,
    /// Run eBPG's Sinkhorn in the log domain (true/false).
    #[arg(long)]
    pub log_domain: Option<String>,
    /// Record the Luo-Tseng residual at every iteration (true/false).
    #[arg(long)]
    pub track_residual: Option<String>,
    /// Trace detail: full, final or none.
    #[arg(long)]
    pub trace: Option<String>,
    /// Seed(s); each seed is one instance.
    #[arg(long)]
    pub seed: Option<String>,
    /// Worker threads [default: 1].
    #[arg(long)]
    pub jobs: Option<String>,
    /// Output directory [default: gw_out].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Source edge list; a Barabasi-Albert graph is generated when absent.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Target edge list (requires --ground-truth); defaults to a relabeled noisy copy of the source.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// One target index per line, for each source node.
    #[arg(long)]
    pub ground_truth: Option<PathBuf>,
    /// Generated graph size [default: 50].
    #[arg(long)]
    pub nodes: Option<String>,
    /// Barabasi-Albert attachment count [default: 2].
    #[arg(long)]
    pub attach: Option<String>,
    /// Noise level q in percent [default: 0].
    #[arg(long)]
    pub noise: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Edge list to partition (requires --labels); generated when absent.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Ground-truth cluster id per node, one per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Generated graph size [default: 60].
    #[arg(long)]
    pub nodes: Option<String>,
    /// Number of clusters k [default: 3].
    #[arg(long)]
    pub clusters: Option<String>,
    #[arg(long)]
    pub p_in: Option<String>,
    #[arg(long)]
    pub p_out: Option<String>,
    /// Super-node weights: uniform or sizes (ground-truth proportions).
    #[arg(long)]
    pub target_weights: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Match2dArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    /// cross, ring or blob [default: cross].
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long)]
    pub source_points: Option<String>,
    #[arg(long)]
    pub target_points: Option<String>,
    /// Rotation of the target in degrees [default: 30].
    #[arg(long)]
    pub angle: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    /// Coupling CSV with an `n,m` first line.
    #[arg(long)]
    pub coupling: PathBuf,
    /// Source distance matrix (headerless square CSV).
    #[arg(long)]
    pub dx: PathBuf,
    /// Target distance matrix (headerless square CSV).
    #[arg(long)]
    pub dy: PathBuf,
    /// Source marginal; uniform when absent.
    #[arg(long)]
    pub mu: Option<PathBuf>,
    /// Target marginal; uniform when absent.
    #[arg(long)]
    pub nu: Option<PathBuf>,
}
