//! `randext`: generate random structures, solve EXT instances, hunt triangle
//! subalgebras, apply reductions and run experiments.
//!
//! Exit status: 0 for a positive answer, 1 for a negative one, 2 for usage
//! or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "randext", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded random relational structure.
    Gen(GenArgs),
    /// Decide an EXT instance; prints the outcome JSON.
    Solve(SolveArgs),
    /// Search a digraph for a triangle subalgebra.
    Find(FindArgs),
    /// Apply an instance transformation.
    Reduce {
        #[command(subcommand)]
        pass: ReducePass,
    },
    /// Monte Carlo experiments and closed-form bounds.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
    /// Check a certificate.
    Verify {
        #[command(subcommand)]
        what: VerifyTarget,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    arity: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    seed: u64,
    /// Never include constant tuples (a, ..., a).
    #[arg(long)]
    loopless: bool,
    /// Append the unary constant relation {(a)} for every element.
    #[arg(long)]
    constants: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Use exhaustive enumeration instead of backtracking.
    #[arg(long)]
    brute_force: bool,
    /// Maximum number of maps brute force may enumerate.
    #[arg(long, default_value_t = randext_core::solver::BRUTE_FORCE_CAP)]
    cap: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Closure,
    PaperProcedure,
}

impl From<StrategyArg> for randext_core::Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Closure => Self::Closure,
            StrategyArg::PaperProcedure => Self::PaperProcedure,
        }
    }
}

#[derive(Debug, Args)]
struct FindArgs {
    /// Digraph as a structure JSON file with one binary relation.
    digraph: PathBuf,
    #[arg(long, value_enum, default_value = "closure")]
    strategy: StrategyArg,
    /// Disjoint subalgebras sought by the chunked procedure.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Edge probability used to pick the chunk length.
    #[arg(long)]
    p: Option<f64>,
    /// Chunk length override.
    #[arg(long)]
    l: Option<usize>,
    /// Also write the chunked procedure's step trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Subcommand)]
enum ReducePass {
    /// 3-coloring of a graph into EXT of a digraph with a triangle subalgebra.
    #[command(name = "3col-to-ext")]
    ThreeColToExt {
        /// Graph as DIMACS ("p edge n m" / "e u v") or structure JSON.
        #[arg(long)]
        graph: PathBuf,
        /// Target digraph (structure JSON).
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Binary slice of a single l-ary relation at a pivot.
    Slice {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 1)]
        pivot: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Lift a binary instance to an l-ary target (the instance's own target
    /// is replaced).
    Lift {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 1)]
        pivot: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Binary relation on A^m from a single k-ary relation.
    Pair {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Split a binary instance over A^m into a k-ary instance (the
    /// instance's own target is replaced).
    Split {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum ExperimentKind {
    /// Finder success frequency per n; writes CSV and a JSON sidecar.
    Finder {
        /// Comma-separated digraph sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "closure")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        l: Option<usize>,
        /// Draw digraphs with a planted triangle subalgebra at chunk 1.
        #[arg(long)]
        planted: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Fill the ms column with wall time (breaks byte reproducibility).
        #[arg(long)]
        timing: bool,
        /// CSV report path.
        #[arg(long)]
        out: PathBuf,
        /// Sidecar path; defaults to `<out>.config.json`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Loopless-triangle frequency on random 3-vertex digraphs.
    Triangle {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Fresh-chunk acceptance frequency of the chunked procedure.
    Chunk {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        graphs: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Per-step probability and its simplified lower bound.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyTarget {
    /// Check a triangle subalgebra witness against a digraph.
    Witness {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Check that a map is a homomorphism (and extends a partial map).
    Map {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        partial: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
