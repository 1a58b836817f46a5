//! Benchmark CLI: run the solver methods on Matrix Market systems, on the
//! 2D nonlinear heat-conduction model, or as a parameter sweep, emitting one
//! CSV row per solve.
//!
//! Exit codes: 0 when every requested solve converged, 1 on solver
//! non-convergence, 2 on I/O, format, or dimension errors.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use locsolve::krylov::{Preconditioner, SolverConfig};
use locsolve::solve::MethodSelector;

#[derive(Parser)]
#[command(
    name = "locsolve",
    version,
    about = "Sparse solves accelerated by local-domain subsystem solves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one linear system read from Matrix Market files
    Solve(SolveArgs),
    /// Run the 2D nonlinear heat-conduction benchmark
    Heat(HeatArgs),
    /// Sweep alpha or the expansion cap over a list of values
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Preconditioned GMRES on the global system (method0)
    #[value(alias = "0", alias = "method0")]
    Baseline,
    /// Local solve, gradient-built domain (method1)
    #[value(alias = "1", alias = "method1")]
    Gradient,
    /// Local solve, residual-built domain (method2)
    #[value(alias = "2", alias = "method2")]
    Residual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PrecondArg {
    None,
    Jacobi,
    Sgs,
}

impl From<PrecondArg> for Preconditioner {
    fn from(p: PrecondArg) -> Self {
        match p {
            PrecondArg::None => Preconditioner::None,
            PrecondArg::Jacobi => Preconditioner::Jacobi,
            PrecondArg::Sgs => Preconditioner::SymmetricGaussSeidel,
        }
    }
}

/// Solver and method parameters shared by all subcommands.
#[derive(Args, Clone, Debug)]
struct MethodOpts {
    /// Relative convergence tolerance
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,

    /// Gradient-strategy threshold fraction in [0, 1]
    #[arg(long, default_value_t = 1e-4)]
    alpha: f64,

    /// Residual-strategy expansion-round cap
    #[arg(long, default_value_t = 1)]
    emax: usize,

    /// Global Gauss-Seidel smoothing sweeps after the subsystem solve
    #[arg(long, default_value_t = 1)]
    sweeps: usize,

    /// GMRES restart dimension
    #[arg(long, default_value_t = 40)]
    restart: usize,

    /// Total GMRES iteration budget
    #[arg(long, default_value_t = 80)]
    max_iterations: usize,

    /// Left preconditioner for GMRES
    #[arg(long, value_enum, default_value_t = PrecondArg::Sgs)]
    precond: PrecondArg,
}

impl MethodOpts {
    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.eps,
            max_iterations: self.max_iterations,
            restart_dim: self.restart,
            preconditioner: self.precond.into(),
        }
    }

    fn selector(&self, method: MethodArg) -> MethodSelector {
        match method {
            MethodArg::Baseline => MethodSelector::baseline(),
            MethodArg::Gradient => {
                MethodSelector::gradient(self.alpha).with_smoothing_sweeps(self.sweeps)
            }
            MethodArg::Residual => {
                MethodSelector::residual(self.emax).with_smoothing_sweeps(self.sweeps)
            }
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Coefficient matrix (Matrix Market coordinate file)
    #[arg(long)]
    matrix: PathBuf,

    /// Right-hand side (Matrix Market array file or one value per line)
    #[arg(long)]
    rhs: PathBuf,

    /// Initial iterate; zero vector when omitted
    #[arg(long)]
    x0: Option<PathBuf>,

    /// Methods to run, in order
    #[arg(long, value_enum, value_delimiter = ',', default_value = "baseline")]
    methods: Vec<MethodArg>,

    /// Single method to run (alternative to --methods)
    #[arg(long, value_enum, conflicts_with = "methods")]
    method: Option<MethodArg>,

    #[command(flatten)]
    opts: MethodOpts,

    /// Write the residual-strategy expansion trace (stderr unless --trace-out)
    #[arg(long)]
    trace: bool,

    /// Trace destination file
    #[arg(long)]
    trace_out: Option<PathBuf>,

    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Label used in the problem_id column
    #[arg(long, default_value = "problem")]
    problem_id: String,
}

#[derive(Args)]
struct HeatArgs {
    /// Interior nodes in x
    #[arg(long, default_value_t = 99)]
    nx: usize,

    /// Interior nodes in y
    #[arg(long, default_value_t = 99)]
    ny: usize,

    /// Time step size
    #[arg(long, default_value_t = 1e-2)]
    dt: f64,

    /// Number of time steps
    #[arg(long, default_value_t = 100)]
    steps: usize,

    /// Dirichlet temperature at x = 0
    #[arg(long, default_value_t = 1.0)]
    tl: f64,

    /// Dirichlet temperature at x = 1
    #[arg(long, default_value_t = 1e-4)]
    tr: f64,

    /// Conductivity exponent in kappa(T) = T^e
    #[arg(long, default_value_t = 3.5)]
    kappa_exponent: f64,

    /// Picard stopping tolerance
    #[arg(long, default_value_t = 1e-8)]
    nonlinear_tol: f64,

    /// Methods to run, each as a full simulation
    #[arg(long, value_enum, value_delimiter = ',', default_value = "baseline,gradient,residual")]
    methods: Vec<MethodArg>,

    #[command(flatten)]
    opts: MethodOpts,

    /// Dump the field every k steps (0 disables; the initial field counts as step 0)
    #[arg(long, default_value_t = 0)]
    snapshot_every: usize,

    /// Directory for field snapshots
    #[arg(long, default_value = ".")]
    snapshot_dir: PathBuf,

    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepParameter {
    Alpha,
    Emax,
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter to sweep
    #[arg(long, value_enum)]
    parameter: SweepParameter,

    /// Values to sweep over (comma separated)
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<String>,

    /// Coefficient matrix file (file-based problem source)
    #[arg(long, requires = "rhs")]
    matrix: Option<PathBuf>,

    /// Right-hand side file
    #[arg(long)]
    rhs: Option<PathBuf>,

    /// Initial iterate file; zero vector when omitted
    #[arg(long)]
    x0: Option<PathBuf>,

    /// Generate the problem from a heat-model Picard system: interior nodes in x
    #[arg(long, conflicts_with = "matrix")]
    heat_nx: Option<usize>,

    /// Heat-model interior nodes in y
    #[arg(long, default_value_t = 33)]
    heat_ny: usize,

    /// Heat-model time step size
    #[arg(long, default_value_t = 1e-2)]
    heat_dt: f64,

    /// Baseline time steps to advance before extracting the Picard system
    #[arg(long, default_value_t = 0)]
    heat_warmup: usize,

    #[command(flatten)]
    opts: MethodOpts,

    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Label used in the problem_id column
    #[arg(long, default_value = "sweep")]
    problem_id: String,
}

const EXIT_OK: u8 = 0;
const EXIT_NOT_CONVERGED: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve::run(args),
        Command::Heat(args) => commands::heat::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
    };
    match outcome {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_NOT_CONVERGED),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
