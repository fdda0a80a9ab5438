//! `qes`: exact and AIM eigenvalues of decatic potentials.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "qes", version, about = "Exact and AIM eigenvalues of decatic potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact QES eigenpairs with a polynomial factor of degree n.
    Exact(ExactArgs),
    /// Eigenvalues by the asymptotic iteration method.
    Aim(AimArgs),
    /// Polynomial-solution conditions for a second-order ODE read from JSON.
    Conditions(ConditionsArgs),
    /// Closed-form ground-state (1) or first-excited-state (2) families, or
    /// reference AIM eigenvalues (5).
    Table(TableArgs),
    /// Sampled x, V(x) and ψ(x) for plotting.
    PlotData(PlotArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReprArg {
    Full,
    Truncated,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    /// Degree of the polynomial factor.
    #[arg(long)]
    pub n: usize,
    /// Significant digits for values that are not exact.
    #[arg(long, env = "QES_PRECISION", default_value_t = 40)]
    pub digits: u32,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    #[arg(long, allow_hyphen_values = true)]
    pub e: String,
}

#[derive(Args, Debug)]
pub struct AimArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Target digits: sets the convergence tolerance and the printed width.
    #[arg(long, default_value_t = 10)]
    pub digits: u32,
    #[arg(long, default_value_t = 120)]
    pub iters: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x0: String,
    /// Working precision in decimal digits.
    #[arg(long, env = "QES_PRECISION", default_value_t = 60)]
    pub precision: u32,
    #[arg(long, default_value = "-50", allow_hyphen_values = true)]
    pub emin: String,
    #[arg(long, default_value = "200", allow_hyphen_values = true)]
    pub emax: String,
    #[arg(long, value_enum, default_value_t = ReprArg::Truncated)]
    pub representation: ReprArg,
}

#[derive(Args, Debug)]
pub struct ConditionsArgs {
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub which: u8,
    #[arg(long, default_value = "1")]
    pub mu: String,
    #[arg(long, default_value = "1")]
    pub k: String,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    /// AIM table only: target digits.
    #[arg(long, default_value_t = 8)]
    pub digits: u32,
    /// AIM table only: iterations per block.
    #[arg(long, default_value_t = 120)]
    pub iters: usize,
    /// AIM table only: eigenvalues per block.
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long, env = "QES_PRECISION", default_value_t = 60)]
    pub precision: u32,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Degree of the polynomial factor; omit for the V column only.
    #[arg(long)]
    pub state: Option<usize>,
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    pub xmin: String,
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub xmax: String,
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    #[arg(long, env = "QES_PRECISION", default_value_t = 16)]
    pub digits: u32,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Exact(a) => commands::exact(a),
        Command::Aim(a) => commands::aim(a),
        Command::Conditions(a) => commands::conditions(a),
        Command::Table(a) => commands::table(a),
        Command::PlotData(a) => commands::plot_data(a),
    };
    match result.and_then(|out| out.emit(&cli.output)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
