mod config;
mod numeric;
mod params;
mod report;
mod symbolic;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use params::ParamArgs;
use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: vlasym::exprparse::ParseError,
    },
    #[error(transparent)]
    Catalog(#[from] vlasym::catalog::CatalogError),
    #[error(transparent)]
    Coeff(#[from] vlasym::coeffode::CoeffError),
    #[error(transparent)]
    Vlasov(#[from] vlasym::vlasov::VlasovError),
    #[error(transparent)]
    Vf(#[from] vlasym::vectorfield::VfError),
    #[error(transparent)]
    Sym(#[from] vlasym::symexpr::SymError),
}

pub fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Exact checks of the conformal symmetry representations of the 1D Vlasov
/// equation, with numerical companions for the coefficient ODEs and the PDE.
///
/// Exit status: 0 when every check passes, 1 when some check fails, 2 on errors.
#[derive(Parser, Debug)]
#[command(name = "vlasym", version)]
struct Cli {
    /// File of `key = value` lines giving defaults for the command's flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Structure table and symmetry multipliers of a representation.
    Verify(VerifyArgs),
    /// Bracket of two vector fields read from files.
    Bracket(BracketArgs),
    /// Obstruction to extending case A by a generator X[2].
    Nogo(NogoArgs),
    /// Coefficient ODEs of the force family F = r^(1-2z) phi(u).
    #[command(subcommand)]
    Ode(OdeCmd),
    /// Numerical checks on the transport PDE.
    #[command(subcommand)]
    Pde(PdeCmd),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Catalog representation: standard, caseA, caseB1, caseB2, example1, example2_z2.
    #[arg(long, required_unless_present = "rep_file")]
    pub rep: Option<String>,
    /// Representation in the `key = value` text format instead of a catalog name.
    #[arg(long, conflicts_with = "rep", value_name = "PATH")]
    pub rep_file: Option<PathBuf>,
    /// Exponents z, comma separated [default: 2,3,-1,1/2 where z applies].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Vec<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct BracketArgs {
    /// File holding the first field.
    pub first: PathBuf,
    /// File holding the second field.
    pub second: PathBuf,
    /// Expand the bracket in the basis of this catalog representation.
    #[arg(long)]
    pub basis: Option<String>,
    /// Expand the bracket in the basis of a representation file.
    #[arg(long, conflicts_with = "basis", value_name = "PATH")]
    pub basis_file: Option<PathBuf>,
    /// Exponent z, needed when the fields or the basis mention z or u.
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct NogoArgs {
    /// Exponents z, comma separated [default: 2,3,-1,1/2].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Vec<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Left end of the u grid.
    #[arg(long, default_value = "0.5", allow_negative_numbers = true)]
    pub from: f64,
    /// Right end of the u grid.
    #[arg(long, default_value = "4", allow_negative_numbers = true)]
    pub to: f64,
    /// Grid spacing.
    #[arg(long, default_value = "0.001")]
    pub step: f64,
    /// Largest accepted equation residual.
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
    /// Write the solution as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OdeArgs {
    /// Exponent z.
    #[arg(long, allow_negative_numbers = true)]
    pub z: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Parameter s of the b0 equation.
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    pub s: f64,
    /// Initial value(s) at the left end: `d` for d12, `b,b'` for b12.
    /// Defaults to the closed form at z = 2 when available, else zero.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub init: Vec<f64>,
    /// Compare with the closed forms (z = 2 only).
    #[arg(long)]
    pub compare_closed: bool,
    /// Largest accepted deviation from the closed form, relative to max(1, sup |closed|).
    #[arg(long, default_value = "1e-8")]
    pub compare_tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum OdeCmd {
    /// z u d + Phi d' + 2 mu x / z = 0.
    D12(OdeArgs),
    /// The second-order equation for b12, with c12 derived from it.
    B12(OdeArgs),
    /// Two independent solutions of the b0 equation and their Wronskian.
    B0(OdeArgs),
    /// d12 by quadrature, and the fit of an RK4 solution to the quadrature form.
    Quadrature(OdeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum ProfileArg {
    First,
    Second,
    Gaussian,
}

#[derive(Args, Debug)]
pub struct SymcheckArgs {
    /// Representation: caseA, caseB1, caseB2, example1, example2_z2.
    #[arg(long)]
    pub rep: String,
    /// Exponent z.
    #[arg(long, default_value = "2", allow_negative_numbers = true)]
    pub z: String,
    /// Generator to check (`X1`, `Y[-1]`, ...) or `all`.
    #[arg(long, default_value = "all")]
    pub gen: String,
    /// Replace this generator by a copy with its Dr coefficient doubled.
    #[arg(long)]
    pub corrupt: Option<String>,
    /// Number of sample points.
    #[arg(long, default_value = "64")]
    pub points: usize,
    /// Seed of the sample points.
    #[arg(long, default_value = "7")]
    pub seed: u64,
    /// Deformation sizes.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,5e-3,2.5e-3")]
    pub eps: Vec<f64>,
    /// Smallest accepted slope of log residual against log eps.
    #[arg(long, default_value = "1.9")]
    pub min_slope: f64,
    /// Profile g(a, b) of the exact solution.
    #[arg(long, value_enum, default_value = "gaussian")]
    pub profile: ProfileArg,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum ForceArg {
    Zero,
    Example1,
    InverseCube,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// Force field.
    #[arg(long, value_enum, default_value = "example1")]
    pub force: ForceArg,
    /// Exponent z (example1 only; the inverse-cube force has z = 2).
    #[arg(long, default_value = "2", allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    pub t0: f64,
    #[arg(long, default_value = "1")]
    pub r0: f64,
    #[arg(long, default_value = "1", allow_negative_numbers = true)]
    pub v0: f64,
    #[arg(long, default_value = "1", allow_negative_numbers = true)]
    pub t_end: f64,
    /// RK4 step in t.
    #[arg(long, default_value = "0.001")]
    pub step: f64,
    /// Largest accepted drift of the invariants.
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
    /// Write the trajectory as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Subcommand, Debug)]
pub enum PdeCmd {
    /// First-order symmetry test: residual of the deformed solution against eps.
    Symcheck(SymcheckArgs),
    /// Integrate one characteristic and check that the invariants stay constant.
    Trace(TraceArgs),
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let report = match &cli.command {
        Cmd::Verify(a) => symbolic::verify(a)?,
        Cmd::Bracket(a) => symbolic::bracket(a)?,
        Cmd::Nogo(a) => symbolic::nogo(a)?,
        Cmd::Ode(c) => numeric::ode(c)?,
        Cmd::Pde(PdeCmd::Symcheck(a)) => numeric::symcheck(a)?,
        Cmd::Pde(PdeCmd::Trace(a)) => numeric::trace(a)?,
    };
    Ok(report.finish())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let root = Cli::command();
    let argv = match config::merge_config(argv, &root) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match root.try_get_matches_from(argv).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if cli.json { report.to_json() } else { report.to_text() };
    match &cli.out {
        Some(p) => {
            if let Err(e) = write_file(p, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
