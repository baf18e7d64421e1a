use std::path::PathBuf;

use capflow::TubeShape;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Pressure drop and flow rate of power-law fluids in converging-diverging
/// capillaries. All quantities are SI: lengths in m, flow rates in m³/s,
/// pressures in Pa, consistency in Pa·s^n.
#[derive(Debug, Parser)]
#[command(name = "capflow", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure drop for a flow rate, or flow rate for a pressure drop
    Solve(SolveArgs),
    /// Solve over a range of one parameter
    Sweep(SweepArgs),
    /// Compare closed forms with quadrature over a parameter grid
    Validate(ValidateArgs),
    /// Sample the tube radius along its axis
    Profile(ProfileArgs),
    /// Sample viscosity and stress over a log grid of strain rates
    Rheology(RheologyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FluidArgs {
    /// Flow behaviour index n (dimensionless)
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    /// Consistency factor C in Pa·s^n
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub consistency: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TubeArgs {
    /// conic, parabolic, hyperbolic, hyperbolic-cosine or sinusoidal
    #[arg(long, value_parser = parse_shape)]
    pub shape: TubeShape,
    /// Throat radius in m
    #[arg(long, allow_negative_numbers = true)]
    pub rmin: Option<f64>,
    /// End radius in m
    #[arg(long, allow_negative_numbers = true)]
    pub rmax: Option<f64>,
    /// Length of one unit in m
    #[arg(long, allow_negative_numbers = true)]
    pub length: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Volumetric flow rate in m³/s; the pressure drop is computed
    #[arg(long, allow_negative_numbers = true)]
    pub flow_rate: Option<f64>,
    /// Pressure drop in Pa; the flow rate is computed
    #[arg(long, allow_negative_numbers = true)]
    pub pressure: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveControl {
    /// Number of identical units in series; P scales with it at fixed Q
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub periods: u32,
    /// Quadrature tolerance for fallback and validation
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Also run the quadrature oracle and report the relative error
    #[arg(long)]
    pub validate: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub tube: TubeArgs,
    #[command(flatten)]
    pub fluid: FluidArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    pub control: SolveControl,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParameter {
    FlowRate,
    Pressure,
    N,
    Consistency,
    Rmin,
    Rmax,
    Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub tube: TubeArgs,
    #[command(flatten)]
    pub fluid: FluidArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    /// Parameter to vary; its own flag is ignored
    #[arg(long, value_enum)]
    pub vary: SweepParameter,
    #[arg(long, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: f64,
    #[arg(long, default_value_t = 11)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    #[command(flatten)]
    pub control: SolveControl,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    /// 5 shapes x 6 indices x 4 ratios x 2 lengths x 2 flow rates
    Default,
    /// 5 shapes x 2 indices, one geometry
    Quick,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Grid::Default)]
    pub grid: Grid,
    /// Quadrature tolerance of the oracle
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Largest acceptable relative error; exit status 3 if any row exceeds it
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub tube: TubeArgs,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RheologyArgs {
    #[command(flatten)]
    pub fluid: FluidArgs,
    /// Smallest strain rate in 1/s
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub start: f64,
    /// Largest strain rate in 1/s
    #[arg(long, default_value_t = 1e3, allow_negative_numbers = true)]
    pub stop: f64,
    #[arg(long, default_value_t = 61)]
    pub count: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_shape(s: &str) -> Result<TubeShape, String> {
    s.parse::<TubeShape>().map_err(|e| e.to_string())
}
