use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "beltrami",
    version,
    about = "Exact Euler and Navier-Stokes solutions: eigenvalue tables, residual suites, path limits and field export",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Radial eigenvalues of the ball, disc or annulus.
    #[command(allow_negative_numbers = true)]
    Eigen(EigenArgs),
    /// Build a flow and print it at one point.
    #[command(allow_negative_numbers = true)]
    Construct(ConstructArgs),
    /// Run the residual suite on a flow.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Follow paths νt = ω and probe the double limit.
    #[command(allow_negative_numbers = true)]
    Pathlimit(PathlimitArgs),
    /// Sample a flow on a grid and write CSV or VTK files.
    #[command(allow_negative_numbers = true)]
    Export(ExportArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// key=value file; command-line flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory [default: $BELTRAMI_OUT_DIR or .]
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Override one tolerance, e.g. `ns=1e-7`. Repeatable.
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryArg {
    Ball,
    Disc,
    Annulus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcArg {
    Dirichlet,
    Neumann,
    Coupled,
}

#[derive(Args, Debug, Clone)]
pub struct EigenArgs {
    #[arg(value_enum)]
    pub geometry: Option<GeometryArg>,
    /// Same as the positional GEOMETRY; lets config files set it.
    #[arg(long = "geometry", value_enum, hide = true, conflicts_with = "geometry")]
    pub geometry_key: Option<GeometryArg>,
    /// Ball or disc radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r2: f64,
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    pub bc: BcArg,
    /// Coupling matrix k11,k12,k21,k22 for --bc coupled (det 1).
    #[arg(long, value_name = "K11,K12,K21,K22", allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Upper end of the annulus scan window.
    #[arg(long)]
    pub zeta_max: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowClassArg {
    /// α sin(λr)/r + β cos(λr)/r about the origin.
    Radial,
    /// J₀ disc profile times α sin ηx₃ + β cos ηx₃.
    Disc,
    /// Annulus profile times α sin ηx₃ + β cos ηx₃.
    Annulus,
    /// Planar swirl built from two radial profiles.
    Swirl,
    /// u ≡ 0.
    Zero,
}

/// Parameters that select and build a flow.
#[derive(Args, Debug, Clone)]
pub struct FlowArgs {
    #[arg(long, value_enum, default_value_t = FlowClassArg::Radial)]
    pub class: FlowClassArg,
    /// Beltrami eigenvalue of a radial mode.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Axial wavenumber of disc and annulus modes.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// 1-based radial eigenvalue index of disc and annulus modes.
    #[arg(long, default_value_t = 1)]
    pub index: usize,
    /// Disc radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r2: f64,
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    pub bc: BcArg,
    #[arg(long, value_name = "K11,K12,K21,K22", allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Viscosity; 0 gives the static Euler flow.
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Symplectic axis a1,a2,a3 of radial modes.
    #[arg(long, value_name = "A1,A2,A3", allow_hyphen_values = true)]
    pub axis: Option<String>,
    /// Radius of the excluded core around a singularity.
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Swirl amplitude a.
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Swirl Φ: zero, rigid, or gaussian:C:SIGMA for C·exp(−ρ²/4σ).
    #[arg(long, default_value = "gaussian:-1:0.25", allow_hyphen_values = true)]
    pub phi: String,
    /// Swirl Ψ, same syntax as --phi.
    #[arg(long, default_value = "gaussian:1:0.5", allow_hyphen_values = true)]
    pub psi: String,
}

#[derive(Args, Debug, Clone)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    #[arg(long, value_name = "X1,X2,X3", default_value = "0.5,0.3,0.2", allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value_t = 0.0)]
    pub time: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated sample times [default: 0, or 1 for heat flows].
    #[arg(long, value_name = "T,...")]
    pub times: Option<String>,
    /// Replace the pressure by 0; the suite must then fail.
    #[arg(long)]
    pub negative_control: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct PathlimitArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Comma-separated path constants ω = νt.
    #[arg(long, value_name = "W,...")]
    pub omega: Option<String>,
    /// Draw ω uniformly from LO,HI instead.
    #[arg(long, value_name = "LO,HI")]
    pub omega_range: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub omega_count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10.0)]
    pub t_first: f64,
    #[arg(long, default_value_t = 1e6)]
    pub t_last: f64,
    /// Schedule points per path.
    #[arg(long, default_value_t = 6)]
    pub points: usize,
    /// Probe points.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Vtk,
}

#[derive(Args, Debug, Clone)]
pub struct ExportArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Points per axis.
    #[arg(long, value_name = "NX,NY,NZ", default_value = "2,2,2")]
    pub grid: String,
    /// Box x0,x1,y0,y1,z0,z1.
    #[arg(long = "box", value_name = "X0,X1,Y0,Y1,Z0,Z1", default_value = "-1,1,-1,1,-1,1", allow_hyphen_values = true)]
    pub bounds: String,
    #[arg(long, value_name = "T,...", default_value = "0")]
    pub times: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// File name prefix; files are PREFIX_K.csv for the K-th time.
    #[arg(long, default_value = "field")]
    pub prefix: String,
    #[command(flatten)]
    pub common: Common,
}
