//! `krein-bem` command line: solvers and identity checks with JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 usage or input error, 2 near-singular
//! boundary operator, 3 a check exceeded its tolerance.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krein_bem::config::{ComplexLiteral, DataSpec, SourceSpec, ThetaSpec};

#[derive(Debug, Parser)]
#[command(name = "krein-bem", version, about = "Boundary integral solvers and resolvent checks for 2-D Helmholtz problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental solution spot checks.
    #[command(subcommand)]
    Kernels(KernelsCommand),
    /// Boundary value problems.
    #[command(subcommand)]
    Bvp(BvpCommand),
    /// Robin-to-Dirichlet and Dirichlet-to-Robin maps.
    #[command(subcommand)]
    Map(MapCommand),
    /// Operator identity checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Spectral scans.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Closed-form disk values.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum KernelsCommand {
    /// Evaluate E_n(z; x) and its derivatives.
    Eval(KernelArgs),
}

#[derive(Debug, Subcommand)]
pub enum BvpCommand {
    /// Solve a Robin, Neumann or Dirichlet problem with boundary data.
    Solve(BvpArgs),
}

#[derive(Debug, Subcommand)]
pub enum MapCommand {
    /// Robin-to-Dirichlet map.
    Rtd(MapArgs),
    /// Dirichlet-to-Robin map.
    Dtr(MapArgs),
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Single layer jump relations.
    Jump(JumpArgs),
    /// Mutual inversion of the two maps.
    Inverse(InverseArgs),
    /// Weighted-adjoint symmetry of the Robin-to-Dirichlet map.
    Symmetry(CouplingArgs),
    /// Herglotz identity and positivity.
    Herglotz(HerglotzArgs),
    /// Krein resolvent formula.
    Krein(KreinArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCommand {
    /// Scan the smallest singular value over a real interval.
    Scan(ScanArgs),
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Disk eigenvalues and map eigenvalues.
    Disk(OracleArgs),
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Tolerance override, `key=value` for one check or a bare value for all.
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Problem {
    /// Domain description (JSON file).
    #[arg(long)]
    pub domain: PathBuf,
    /// Spectral parameter, e.g. `2+1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: ComplexLiteral,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Space dimension.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub z: ComplexLiteral,
    /// Comma-separated coordinates of x.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Highest derivative order (0, 1 or 2).
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BvpArgs {
    #[command(flatten)]
    pub problem: Problem,
    /// Coupling: `const:c`, `multiplier:k^s,c`, `matrix:path` or `dirichlet`.
    #[arg(long)]
    pub theta: ThetaSpec,
    /// Boundary data: `fourier:m`, `const:c` or `gauss:angle,width`.
    #[arg(long)]
    pub data: DataSpec,
    /// Interior points `x,y;x,y;...` where the solution is evaluated.
    #[arg(long, allow_hyphen_values = true)]
    pub targets: Option<String>,
    /// Write the boundary traces as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub theta: ThetaSpec,
    /// Destination of the operator (dense operator JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the matrix entries as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Args)]
pub struct JumpArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub data: DataSpec,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CouplingArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub theta: ThetaSpec,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub theta: ThetaSpec,
    /// Highest Fourier mode of the test subspace (default N/32).
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct HerglotzArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long, default_value = "const:0")]
    pub theta: ThetaSpec,
    #[arg(long, default_value = "fourier:1")]
    pub data: DataSpec,
    /// Interior grid spacing.
    #[arg(long, default_value_t = 0.02)]
    pub h: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct KreinArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long, default_value = "const:1")]
    pub theta: ThetaSpec,
    /// Source: `gaussian:x,y,width[,amplitude]`.
    #[arg(long, default_value = "gaussian:0.1,0,0.13", allow_hyphen_values = true)]
    pub source: SourceSpec,
    /// Interior grid spacing.
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
    /// Interior points `x,y;x,y;...` (default: a spiral of 12 points).
    #[arg(long, allow_hyphen_values = true)]
    pub targets: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub domain: PathBuf,
    /// Coupling, or `dirichlet` for the Dirichlet spectrum.
    #[arg(long)]
    pub theta: ThetaSpec,
    #[arg(long, allow_hyphen_values = true)]
    pub zmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub zmax: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Write the sampled curve as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OracleKind {
    /// Dirichlet eigenvalues up to `--lambda-max`.
    Dirichlet,
    /// Robin eigenvalues for `--theta` up to `--lambda-max`.
    Robin,
    /// Eigenvalue of the Robin-to-Dirichlet map on mode `--m` at `--z`.
    Rtd,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub query: OracleKind,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 30.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value = "1+0i", allow_hyphen_values = true)]
    pub z: ComplexLiteral,
    #[command(flatten)]
    pub common: Common,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(pass) => {
            if pass {
                0
            } else {
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                krein_bem::Error::NearSingular { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
