use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Resilience, connectivity and replication-attack analysis of the
/// q-composite key predistribution scheme.
#[derive(Debug, Parser)]
#[command(name = "qcomposite", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed-p_s resilience study: solve the pool size per q and tabulate
    /// the exact link-compromise probability per capture count
    Resilience(ResilienceArgs),
    /// Overlap thresholds that best resist capture attacks
    #[command(subcommand, name = "optimal-q")]
    OptimalQ(OptimalQCommand),
    /// Critical design parameters and connectivity simulation
    #[command(subcommand)]
    Connectivity(ConnectivityCommand),
    /// Monte Carlo estimators for compromise and replication attacks
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Replication-attack budget planning
    #[command(subcommand)]
    Replication(ReplicationCommand),
    /// Canned experiments emitting figure/table plot data
    Experiment(ExperimentArgs),
}

/// Flags shared by every subcommand. All values are optional here; the
/// resolution order is flag, then config file, then built-in default.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Output directory; results go to stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Plain-text key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed of the trial-stream generator
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of Monte Carlo trials
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ResilienceArgs {
    /// Key ring size K
    #[arg(long = "K")]
    pub key_ring_size: Option<u64>,
    /// Target link-setup probability p_s used to solve P per q
    #[arg(long)]
    pub ps: Option<f64>,
    /// Captured-node counts, comma separated (e.g. 10,20,40)
    #[arg(long = "m")]
    pub captures: Option<String>,
    /// Smallest overlap threshold in the sweep
    #[arg(long)]
    pub q_min: Option<u64>,
    /// Largest overlap threshold in the sweep
    #[arg(long)]
    pub q_max: Option<u64>,
    /// Also tabulate the historical (incorrect) formula
    #[arg(long)]
    pub chan: bool,
    /// Also tabulate the asymptotic law
    #[arg(long)]
    pub asym: bool,
    /// How P is solved from p_s: exact or asymptotic
    #[arg(long)]
    pub pool_solve: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum OptimalQCommand {
    /// q minimizing link compromise against m captured nodes
    Capture(OptimalQCaptureArgs),
    /// q maximizing the captures an adversary needs for a target fraction
    Budget(OptimalQBudgetArgs),
}

#[derive(Debug, Args)]
pub struct OptimalQCaptureArgs {
    /// Key ring size K
    #[arg(long = "K")]
    pub key_ring_size: Option<u64>,
    /// Number of captured nodes
    #[arg(long = "m")]
    pub captures: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct OptimalQBudgetArgs {
    /// Key ring size K
    #[arg(long = "K")]
    pub key_ring_size: Option<u64>,
    /// Link-setup probability p_s
    #[arg(long)]
    pub ps: Option<f64>,
    /// Target fraction of compromised links
    #[arg(long)]
    pub pcomp: Option<f64>,
    /// Largest threshold considered
    #[arg(long)]
    pub q_max: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum ConnectivityCommand {
    /// Solve one critical design parameter (K, P or r)
    Critical(ConnectivityCriticalArgs),
    /// Sweep one parameter and estimate connectivity per value
    Simulate(ConnectivitySimulateArgs),
}

#[derive(Debug, Args)]
pub struct ConnectivityCriticalArgs {
    /// Which parameter to solve for: K, P or r
    #[arg(long)]
    pub solve: Option<String>,
    /// Network size n
    #[arg(long = "n")]
    pub node_count: Option<u64>,
    /// Captured-node count (0 = attack free)
    #[arg(long = "m")]
    pub captures: Option<u64>,
    /// Overlap threshold q
    #[arg(long = "q")]
    pub overlap: Option<u64>,
    /// Key ring size K (when not solved for)
    #[arg(long = "K")]
    pub key_ring_size: Option<f64>,
    /// Key pool size P (when not solved for)
    #[arg(long = "P")]
    pub key_pool_size: Option<f64>,
    /// Transmission radius r (when not solved for)
    #[arg(long = "r")]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ConnectivitySimulateArgs {
    /// Parameter to sweep: K, P, r or m
    #[arg(long)]
    pub sweep: Option<String>,
    /// First swept value
    #[arg(long)]
    pub from: Option<f64>,
    /// Last swept value
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of sweep points
    #[arg(long)]
    pub steps: Option<u64>,
    /// Network size n
    #[arg(long = "n")]
    pub node_count: Option<u64>,
    /// Key ring size K (fixed value when not swept)
    #[arg(long = "K")]
    pub key_ring_size: Option<u64>,
    /// Key pool size P (fixed value when not swept)
    #[arg(long = "P")]
    pub key_pool_size: Option<u64>,
    /// Overlap threshold q
    #[arg(long = "q")]
    pub overlap: Option<u64>,
    /// Transmission radius r (fixed value when not swept)
    #[arg(long = "r")]
    pub radius: Option<f64>,
    /// Captured-node count (fixed value when not swept)
    #[arg(long = "m")]
    pub captures: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Fraction of compromised links among non-captured linked pairs
    Compromise(SimulateCompromiseArgs),
    /// Replication-attack success probability
    Replication(SimulateReplicationArgs),
}

#[derive(Debug, Args)]
pub struct SimulateCompromiseArgs {
    /// Network size n
    #[arg(long = "n")]
    pub node_count: Option<u64>,
    /// Key ring size K
    #[arg(long = "K")]
    pub key_ring_size: Option<u64>,
    /// Key pool size P
    #[arg(long = "P")]
    pub key_pool_size: Option<u64>,
    /// Overlap threshold q
    #[arg(long = "q")]
    pub overlap: Option<u64>,
    /// Number of captured nodes
    #[arg(long = "m")]
    pub captures: Option<u64>,
    /// Model hash-renewal hardening (always zero compromise)
    #[arg(long)]
    pub hardened: bool,
    /// Count only pairs within this torus radius (exploratory view)
    #[arg(long = "radius")]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SimulateReplicationArgs {
    /// Key ring size K
    #[arg(long = "K")]
    pub key_ring_size: Option<u64>,
    /// Key pool size P
    #[arg(long = "P")]
    pub key_pool_size: Option<u64>,
    /// Overlap threshold q
    #[arg(long = "q")]
    pub overlap: Option<u64>,
    /// Keys loaded into each replica
    #[arg(long = "b")]
    pub payload: Option<u64>,
    /// Number of replicas
    #[arg(long = "c")]
    pub replicas: Option<u64>,
    /// Benign neighbors probed per replica
    #[arg(long = "d")]
    pub density: Option<u64>,
    /// Draw Poisson(d) neighbors instead of exactly d
    #[arg(long)]
    pub poisson: bool,
    /// Optional sweep over c or b
    #[arg(long)]
    pub sweep: Option<String>,
    /// First swept value
    #[arg(long)]
    pub from: Option<u64>,
    /// Last swept value
    #[arg(long)]
    pub to: Option<u64>,
    /// Number of sweep points
    #[arg(long)]
    pub steps: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum ReplicationCommand {
    /// Optimal payload/replica split under a cost budget
    Plan(ReplicationPlanArgs),
}

#[derive(Debug, Args)]
pub struct ReplicationPlanArgs {
    /// Total attack budget
    #[arg(long)]
    pub budget: Option<f64>,
    /// Cost exponent of the payload size b
    #[arg(long)]
    pub pb: Option<f64>,
    /// Cost exponent of the replica count c
    #[arg(long)]
    pub pc: Option<f64>,
    /// Overlap threshold q
    #[arg(long = "q")]
    pub overlap: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Preset name: fig2, fig3, fig-connectivity-K, fig-connectivity-P,
    /// fig-connectivity-r, fig-capture, fig8, table1, table2-ratio
    pub preset: String,
    #[command(flatten)]
    pub common: CommonArgs,
}
