use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qetlab", version, about = "Strong local passivity and quantum energy teleportation on two qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide strong local passivity of a state with the M-matrix test and the channel oracle.
    Certify(CertifyArgs),
    /// Run the teleportation protocol and report energies.
    Run(RunArgs),
    /// Sweep κ/h and compare the flip-flop and original extraction.
    Sweep(SweepArgs),
    /// Simulate the protocol circuit and estimate Bob's energy from shots.
    Circuit(CircuitArgs),
    /// Compare the Zeno iteration against exact effective evolution.
    Zeno(ZenoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Model {
    Original,
    Flipflop,
    AppendixB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Before,
    After,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Dynamic,
    Deferred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutcomeArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Local field strength.
    #[arg(long = "h")]
    pub h: Option<f64>,
    /// Coupling strength.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Outer energy of the two-parameter family.
    #[arg(long = "E")]
    pub big_e: Option<f64>,
    /// Inner energy of the two-parameter family.
    #[arg(long = "F")]
    pub big_f: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// key=value file providing defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// 00, 01, 10, 11, ground, v2 or eigenstate-k (k = 0..3, ascending energy).
    #[arg(long)]
    pub state: Option<String>,
    /// Certify the mixture left after Alice's X measurement.
    #[arg(long)]
    pub post_measurement: bool,
    /// Oracle start count.
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long)]
    pub kappa_min: Option<f64>,
    #[arg(long)]
    pub kappa_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub stage: Option<Stage>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ZenoArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Evolution time.
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Comma-separated step counts in ascending order.
    #[arg(long)]
    pub steps: Option<String>,
    /// Alice's outcome pinning the effective Hamiltonian.
    #[arg(long, value_enum)]
    pub outcome: Option<OutcomeArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}
