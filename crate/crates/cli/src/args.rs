use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rindler_core::teleport::BellOutcome;
use rindler_core::Statistics;

use crate::report::Format;
use crate::sweep::Variable;

#[derive(Parser, Debug, Clone)]
#[command(name = "rindler", version, about = "Teleportation fidelity and entropy for a uniformly accelerated receiver")]
pub struct Cli {
    /// Flat key=value file supplying defaults for any flag
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sweep the teleportation fidelity over r or acceleration
    Fidelity(SweepArgs),
    /// Sweep the receiver's entropy information gain
    Entropy(SweepArgs),
    /// Write one receiver density matrix with sector annotations
    Dump(DumpArgs),
    /// Down-conversion analogue of the Rindler vacuum
    Pdc(PdcArgs),
    /// Acceleration and frequency to Omega, r and Unruh temperature
    Convert(ConvertArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// csv or json
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct QubitArgs {
    /// |0_L> amplitude, e.g. 0.6 or 0.6+0.8i (normalized together with beta)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Complex64>,
    /// |1_L> amplitude
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Complex64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SweepArgs {
    /// bosonic or fermionic
    #[arg(long)]
    pub statistics: Option<Statistics>,
    /// Swept variable: r or acceleration
    #[arg(long)]
    pub variable: Option<Variable>,
    #[arg(long)]
    pub r_start: Option<f64>,
    #[arg(long)]
    pub r_stop: Option<f64>,
    #[arg(long)]
    pub r_step: Option<f64>,
    /// Acceleration grid start, m/s^2
    #[arg(long)]
    pub a_start: Option<f64>,
    #[arg(long)]
    pub a_stop: Option<f64>,
    #[arg(long)]
    pub a_step: Option<f64>,
    /// Mode frequency in rad/s, for acceleration sweeps
    #[arg(long)]
    pub omega: Option<f64>,
    /// Bosonic occupation cap per mode
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Bound on the dropped receiver weight when n_max is chosen adaptively
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Fix the Bell outcome (ij); all four are averaged otherwise
    #[arg(long)]
    pub outcome: Option<BellOutcome>,
    #[command(flatten)]
    pub qubit: QubitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DumpArgs {
    #[arg(long)]
    pub statistics: Option<Statistics>,
    /// Squeeze parameter
    #[arg(long)]
    pub r: Option<f64>,
    /// Bell outcome ij
    #[arg(long)]
    pub outcome: Option<BellOutcome>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub qubit: QubitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PdcArgs {
    /// |S11|; give with --s21, or give --r instead
    #[arg(long)]
    pub s11: Option<f64>,
    /// |S21|
    #[arg(long)]
    pub s21: Option<f64>,
    /// Two-mode squeeze parameter, sets |S11| = cosh r, |S21| = sinh r
    #[arg(long)]
    pub r: Option<f64>,
    /// Pump phase
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Mode frequency in rad/s
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ConvertArgs {
    /// Proper acceleration, m/s^2
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Mode frequency, rad/s
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}
