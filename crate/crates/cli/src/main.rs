//! `quasiwide`: generators, splitter, kernel and solvers from the command line.
//!
//! Every subcommand except `gen` prints a JSON report on stdout. Exit codes:
//! 0 success, 1 input error, 2 algorithmic failure (certificate in the
//! report), 3 a decision problem answered "no".

mod bench;
mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quasiwide::uqw::UqwConfig;

#[derive(Parser, Debug)]
#[command(name = "quasiwide", version, about = "Sparse-graph domination toolkit")]
pub struct Cli {
    /// Seed for random families that do not carry their own.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for `bench` (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Single-threaded, id-ordered execution.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        /// Family spec such as `grid:8x8`, `stars:3x4` or `random_degenerate:100,2[,seed]`.
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the splitter on a vertex set.
    Uqw {
        #[arg(long)]
        graph: PathBuf,
        /// `all` or a file of vertex ids.
        #[arg(long = "A", alias = "a", default_value = "all")]
        a: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        uqw: UqwArgs,
    },
    /// Extract a Δ_k-indiscernible subsequence.
    Indiscernible {
        #[arg(long)]
        graph: PathBuf,
        /// `all` or a file of vertex ids, in sequence order.
        #[arg(long, default_value = "all")]
        seq: String,
        /// Arity of the standard formula family.
        #[arg(long, default_value_t = 2)]
        delta: usize,
        /// Use the edge relation only.
        #[arg(long, conflicts_with = "delta")]
        edge_only: bool,
        #[arg(long)]
        target_len: Option<usize>,
    },
    /// Ladder index by exhaustive search.
    Ladder {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_k: usize,
    },
    /// Compute a distance-r domination core.
    Core {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        core: CoreArgs,
    },
    /// Build the kernel instance (H, k+1).
    Kernelize {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        core: CoreArgs,
        /// Kernel file to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare exact answers on G and H.
        #[arg(long)]
        verify: bool,
        /// Skip `--verify` when G has more vertices than this.
        #[arg(long, default_value_t = 200)]
        verify_limit: usize,
    },
    /// Solve a domination or Steiner problem.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Comma-separated terminal ids.
        #[arg(long)]
        terminals: Option<String>,
        /// Branching threshold for `cds-fpt`; defaults to 4(k+1)².
        #[arg(long)]
        k_threshold: Option<usize>,
        #[command(flatten)]
        uqw: UqwArgs,
    },
    /// Kernel-size sweep written as CSV.
    Bench {
        /// Family: grid, path, cycle, star, stars, clique, halfgraph,
        /// biclique, random_degenerate or random_bounded_degree.
        #[arg(long)]
        family: String,
        /// Sizes, `a..b` or `a,b,...`.
        #[arg(long)]
        sizes: String,
        /// Second family parameter (stars: leaves, random_degenerate: c,
        /// random_bounded_degree: d).
        #[arg(long)]
        param: Option<usize>,
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 200)]
        verify_limit: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Drds,
    Cds,
    CdsFpt,
    Steiner,
}

#[derive(Args, Debug, Clone)]
pub struct UqwArgs {
    #[arg(long, default_value_t = 16)]
    pub s_max: usize,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// Fixed Δ_k arity for every round.
    #[arg(long)]
    pub delta_k: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub delta_cap: usize,
    #[arg(long)]
    pub max_rounds: Option<usize>,
}

impl UqwArgs {
    pub fn config(&self) -> UqwConfig {
        UqwConfig {
            s_max: self.s_max,
            theta: self.theta,
            delta_k: self.delta_k,
            delta_cap: self.delta_cap,
            max_rounds: self.max_rounds,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CoreArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub k: usize,
    /// Stop shrinking at this core size; defaults to max(4(k+2)(2r+1)², 64).
    #[arg(long)]
    pub ell: Option<usize>,
    /// Drop one vertex per bucket instead of all surplus members.
    #[arg(long)]
    pub single: bool,
    #[arg(long, default_value_t = 3)]
    pub retries: usize,
    #[command(flatten)]
    pub uqw: UqwArgs,
}

impl CoreArgs {
    pub fn config(&self) -> quasiwide::kernel::CoreConfig {
        let mut cfg = quasiwide::kernel::CoreConfig::new(self.r, self.k);
        if let Some(ell) = self.ell {
            cfg.ell = ell;
        }
        cfg.batch = !self.single;
        cfg.retries = self.retries;
        cfg.uqw = self.uqw.config();
        cfg
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError { code: 1, msg: msg.into() }
    }
}

impl From<quasiwide::Error> for CliError {
    fn from(e: quasiwide::Error) -> Self {
        use quasiwide::Error as E;
        let code = match e {
            E::VertexOutOfRange { .. } | E::Input(_) | E::Parse { .. } | E::Config(_) | E::Io(_) => 1,
            E::Infeasible { .. } => 3,
            E::TooDense(_) | E::OverlappingBalls { .. } | E::Internal(_) => 2,
        };
        CliError { code, msg: e.to_string() }
    }
}

/// How a subcommand ended when it did not hit an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
    No,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Failure => 2,
            Outcome::No => 3,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QUASIWIDE_LOG", "warn")).init();
    let cli = Cli::parse();
    let threads = if cli.deterministic { 1 } else { cli.threads };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        log::warn!("thread pool: {e}");
    }
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
