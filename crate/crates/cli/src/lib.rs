//! Command-line front end for the `elastica` library.
//!
//! Every command writes a single document to the given writer; [`run`]
//! returns a [`CliError`] whose [`CliError::exit_code`] the binary uses.

pub mod commands;
pub mod error;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "elastica", version, about = "Euler elasticae: exponential map, Maxwell strata, cut-time bounds")]
pub struct Cli {
    /// Output format; svg only applies to `elastica`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Read angle flags in degrees.
    #[arg(long, global = true)]
    pub deg: bool,
    /// Worker threads for sweeps and shooting (0: one per logical CPU).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Tolerance for stratum and Maxwell membership tests.
    #[arg(long, global = true, env = "ELASTICA_TOL")]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct CovectorArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Curve {
    /// First positive root of f1.
    P11,
    /// First positive root of g1 on the oscillating family.
    Pg1,
    /// Root of a1 in (π/4, π/2].
    Ua1,
    /// Root of h1 in amplitude.
    Uh1,
    /// Cut-time bound at r = 1.
    Cutbound,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    /// Oscillating pendulum.
    N1,
    /// Rotating pendulum.
    N2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Endpoint of the extremal at time t from the closed form.
    Exp {
        #[command(flatten)]
        lam: CovectorArgs,
        #[arg(long)]
        t: f64,
    },
    /// Endpoint of the extremal at time t by RK4 integration.
    OracleExp {
        #[command(flatten)]
        lam: CovectorArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// The constants k0, k*, u* with their residuals.
    Constants,
    /// Tabulate a root curve over a modulus range.
    Sweep {
        #[arg(value_enum)]
        curve: Curve,
        #[arg(long)]
        kmin: f64,
        #[arg(long)]
        kmax: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Pendulum family for `cutbound`.
        #[arg(long, value_enum, default_value = "n1")]
        family: Family,
    },
    /// Sample an elastica as SVG or CSV.
    Elastica {
        #[command(flatten)]
        lam: CovectorArgs,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 500)]
        n: usize,
        /// Output file; standard output if absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// One SVG per elastica class.
    Gallery {
        #[arg(long, default_value = "gallery")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 800)]
        n: usize,
    },
    /// Maxwell strata containing (λ, t) and the cut-time bound.
    Maxwell {
        #[command(flatten)]
        lam: CovectorArgs,
        #[arg(long)]
        t: f64,
    },
    /// Solve exp(λ, t1) = (x, y, θ) by shooting.
    Bvp {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 200)]
        starts: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli, out)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    commands::dispatch(cli, &pool, out)
}
