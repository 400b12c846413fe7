mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

/// Continuous piecewise quadratic finite element wavelets on triangulated polygons.
#[derive(Debug, Parser)]
#[command(name = "femwave", version)]
struct Cli {
    /// Threads used by dense linear algebra
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the reference element collections and their Gram matrices
    RefReport {
        /// Write the report to this file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the wavelet levels and print counts and support sizes
    Build {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Directory receiving the two-level blocks M0_j.mtx and M1_j.mtx
        #[arg(long, value_name = "DIR")]
        export_mm: Option<PathBuf>,
    },
    /// Condition numbers of the normalized wavelet bases, one CSV row per level
    Cond {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Norm of the normalization and the condition number
        #[arg(long, value_enum, default_value_t = NormArg::L2)]
        norm: NormArg,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the CSV to this file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the normalized Gram matrix of the finest level to this file
        #[arg(long, value_name = "FILE")]
        export_mm: Option<PathBuf>,
        /// Highest level of the dense dual computation
        #[arg(long, default_value_t = femwave::spectral::DEFAULT_DUAL_CAP)]
        dual_cap: usize,
    },
    /// Run the invariant suite; exits with status 3 if any check fails
    Check {
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Write a global matrix of one level in Matrix Market format
    Export {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Matrix to write
        #[arg(long, value_enum)]
        matrix: MatrixArg,
        /// Output file
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct MeshArgs {
    /// Mesh file (`femwave-mesh 1` format)
    #[arg(long, conflicts_with = "bundled")]
    mesh: Option<PathBuf>,
    /// Bundled mesh used when no file is given
    #[arg(long, value_enum, default_value_t = BundledArg::UnitSquare)]
    bundled: BundledArg,
    /// Level J (finest level for build, cond and check)
    #[arg(long, allow_negative_numbers = true, default_value_t = 2)]
    levels: i64,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Relative residual of the extreme Ritz values
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Seed of the Lanczos start vector
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Iteration limit of the eigenvalue solver
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BundledArg {
    UnitSquare,
    LShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NormArg {
    L2,
    H1,
    H1dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixArg {
    Mass,
    Stiffness,
    Prolongation,
    Wavelets,
    GramNNtilde,
    GramNN,
    GramThetaPhitilde,
    GramXiPhitilde,
    GramThetaXi,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Failure::Usage(String::new()).code() } else { ExitCode::SUCCESS };
        }
    };
    femwave::set_threads(cli.threads);
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("femwave: {}", f.message());
            }
            f.code()
        }
    }
}
