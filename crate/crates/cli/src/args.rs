use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ofke",
    version,
    about = "Kinetic-energy density functionals, bounds and fits on radial and line grids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the functionals on a built-in system or a density file.
    Eval(EvalArgs),
    /// Check lower <= T <= upper <= Zumbach for a built-in system.
    Bounds(BoundsArgs),
    /// Brute-force check of T = T_W + I for a two-fermion state.
    Decompose(DecomposeArgs),
    /// Least-squares fit of the gradient weight q.
    #[command(name = "fit-q")]
    FitQ(FitArgs),
    /// Minimize the combined energy in an external potential.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// Built-in system, `name` or `name:key=value,...`; one of hydrogen, box1d, harm1d, gauss3d.
    #[arg(long = "system")]
    pub system: Vec<String>,
    /// Nuclear charge (hydrogen).
    #[arg(long = "Z")]
    pub z: Option<f64>,
    /// Box length (box1d).
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Particle count; for fit-q the 1D families run over 1..N.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Oscillator frequency (harm1d, gauss3d).
    #[arg(long = "omega")]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Number of grid nodes.
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    /// Radial extent, or the half width of the harmonic line grid.
    #[arg(long = "grid-rmax")]
    pub grid_rmax: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CoeffArgs {
    /// Coefficient of the local term.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Weight of the Weizsaecker term, in [0, 1].
    #[arg(long = "q")]
    pub q: Option<f64>,
    /// Lieb-Thirring constant.
    #[arg(long = "c-lt")]
    pub c_lt: Option<f64>,
    /// 1D lower-bound coefficient of integral rho^3.
    #[arg(long = "c-lt-1d")]
    pub c_lt_1d: Option<f64>,
    /// 1D upper-bound coefficient of integral rho^3.
    #[arg(long = "c-1d")]
    pub c_1d: Option<f64>,
    /// March-Young coefficient; the form is only evaluated when given.
    #[arg(long = "c-my")]
    pub c_my: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when the solver does not converge.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Density file to evaluate instead of a built-in system.
    #[arg(long)]
    pub density: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Nodes per axis of the square grid.
    #[arg(long = "n2", default_value_t = ofke_core::pair::DEFAULT_PAIR_N)]
    pub n2: usize,
    /// Half width of the harmonic pair axis.
    #[arg(long = "grid-rmax")]
    pub grid_rmax: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Coefficient of the local term.
    #[arg(long = "C")]
    pub c: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Coefficient of the local term.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Weight of the Weizsaecker term, in [0, 1].
    #[arg(long = "q")]
    pub q: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Stop once an accepted step lowers the energy by less than this.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Include the final density profile in the report.
    #[arg(long)]
    pub profile: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}
