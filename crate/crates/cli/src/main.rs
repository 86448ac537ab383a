//! `phaselab`: generate, test, reduce, sweep and verify planted dense
//! subgraph instances from the command line.
//!
//! Exit codes: 0 ok, 1 check failure, 2 usage, 3 parse or I/O, 4 precondition.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pds_core::Error;

#[derive(Parser, Debug)]
#[command(name = "phaselab", version, about = "Planted dense subgraph detection experiments")]
struct Cli {
    /// Worker threads; defaults to one per core. Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a graph and write it with a JSON sidecar.
    Generate(GenerateArgs),
    /// Run a detection test on a graph file and print the outcome as JSON.
    Test(TestArgs),
    /// Map a planted clique instance to a planted dense subgraph instance.
    Reduce(ReduceArgs),
    /// Estimate error rates over an (alpha, beta) grid; writes CSV and SVG.
    Sweep {
        /// JSON sweep configuration.
        config: PathBuf,
    },
    /// Run a check battery and print one JSON report per line.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// G(n, q).
    Er,
    /// G(n, k, p, q) with Bernoulli(k/n) membership.
    Pds,
    /// G(n, k, p, q) with exactly k planted vertices.
    PdsFixed,
    /// Planted k-clique in G(n, gamma).
    Pc,
    /// Bipartite G_b(n, n_bottom, q).
    Ber,
    /// Bipartite planted dense subgraph.
    Bpds,
    /// Bipartite planted biclique.
    Bpc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlantArg {
    Random,
    Fixed,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub model: Model,
    /// Vertex count (top side for bipartite models).
    #[arg(long)]
    pub n: usize,
    /// Bottom side vertex count for bipartite models; defaults to n.
    #[arg(long)]
    pub n_bottom: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Planted set size law for bpds.
    #[arg(long, value_enum, default_value = "random")]
    pub plant: PlantArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list destination; the sidecar goes to `<out>.json`.
    /// Defaults to `<model>.edges`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    Lin,
    Scan,
    Combined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanArg {
    Exact,
    Heuristic,
}

#[derive(Args, Debug)]
pub struct TestArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub test: TestArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    /// Defaults to exact up to 60 vertices and heuristic above.
    #[arg(long, value_enum)]
    pub scan_mode: Option<ScanArg>,
    #[arg(long, default_value_t = pds_core::phase::DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Largest number of subsets the exact scan may enumerate.
    #[arg(long, default_value_t = pds_core::detectors::DEFAULT_SCAN_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Edge-list file holding the planted clique instance.
    pub graph: PathBuf,
    /// Expected vertex count (per side when bipartite).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub q: f64,
    /// Abort unless 16*q*ell^2 <= 1 and k >= 6*e*ell.
    #[arg(long)]
    pub strict: bool,
    /// Treat the input as a bipartite edge list.
    #[arg(long)]
    pub bipartite: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reduced edge-list destination; the sidecar goes to `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BatteryArg {
    Kernel,
    Lemmas,
    ReductionExact,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    FlipATerm,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub battery: BatteryArg,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

/// Failure of a subcommand, tagged with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Some check was violated; the reports are already printed.
    Check,
    Usage(String),
    Core(Error),
    /// An error reading or writing the named file.
    File(PathBuf, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Usage(_) => 2,
            Failure::Core(e) | Failure::File(_, e) => match e {
                Error::Parse { .. }
                | Error::DuplicateEdge { .. }
                | Error::OutOfRange { .. }
                | Error::VertexCountMismatch { .. }
                | Error::Config(_)
                | Error::Io(_) => 3,
                Error::Precondition(_) | Error::NegativeMass { .. } | Error::NotNormalized { .. } => 4,
                Error::ContractViolation(_) | Error::AbsoluteContinuity { .. } => 1,
                Error::InvalidProbability(_)
                | Error::InvalidParameters(_)
                | Error::BudgetExceeded { .. }
                | Error::TooLarge(_) => 2,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("global thread pool is configured once");
    }
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Test(args) => commands::test(&args),
        Command::Reduce(args) => commands::reduce(&args),
        Command::Sweep { config } => commands::sweep(&config),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Check => {}
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::File(path, e) => eprintln!("error: {}: {e}", path.display()),
            }
            ExitCode::from(failure.code())
        }
    }
}
