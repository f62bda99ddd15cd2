use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const SUBCOMMANDS: [&str; 5] = ["sector-spectrum", "hw-spectrum", "dispersion", "scan-convergence", "verify"];

/// Spectra of the ferromagnetic XXZ chain and its droplet bound states.
#[derive(Debug, Parser)]
#[command(name = "xxz", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file of default flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Relative residual tolerance of the eigensolvers.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues of a magnetization sector or momentum block.
    SectorSpectrum(SectorArgs),
    /// Lowest kink energy on the highest-weight space.
    HwSpectrum(HwArgs),
    /// Bound-state energy against the reduced kernel over a momentum grid.
    Dispersion(DispersionArgs),
    /// Ground-state energy of a sector as the chain grows.
    ScanConvergence(ScanArgs),
    /// Run an invariant battery and report one verdict per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Open,
    Kink,
    Droplet,
    Cyclic,
}

#[derive(Debug, Args)]
pub struct SectorArgs {
    #[arg(long, value_enum)]
    pub bc: BcArg,
    #[arg(long = "L")]
    pub len: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: f64,
    /// Droplet boundary field (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Ring momentum index k, for the block with phase e^{2πik/L}.
    #[arg(long)]
    pub momentum: Option<usize>,
    /// Number of eigenvalues (default 2, capped at the dimension).
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HwMethodArg {
    Gram,
    Direct,
    Both,
}

#[derive(Debug, Args)]
pub struct HwArgs {
    #[arg(long = "L")]
    pub len: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = HwMethodArg::Gram)]
    pub method: HwMethodArg,
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub n: usize,
    /// Interior grid points of (-π/n, π/n).
    #[arg(long)]
    pub theta_steps: usize,
    /// Largest gap kept in the reduced kernel.
    #[arg(long)]
    pub nmax: u32,
    /// Also report the second-lowest kernel eigenvalue.
    #[arg(long)]
    pub gap: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitArg {
    Geometric,
    InversePower,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub bc: BcArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: f64,
    #[arg(long = "L-min")]
    pub len_min: usize,
    #[arg(long = "L-max")]
    pub len_max: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = FitArg::InversePower)]
    pub fit: FitArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Tl,
    Rmaps,
    Pf,
    Wielandt,
    Mono,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Longest chain of the algebraic and monotonicity suites.
    #[arg(long = "max-L")]
    pub max_len: Option<usize>,
    /// Gap truncation of the Perron-Frobenius suite.
    #[arg(long, default_value_t = 120)]
    pub nmax: u32,
}
