mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit codes of the command-line contract.
pub mod exit {
    pub const INPUT: u8 = 2;
    pub const AUDIT_FAILURE: u8 = 3;
    pub const SEARCH_INCOMPLETE: u8 = 4;
    pub const COVERING_FAILURE: u8 = 5;
}

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn input(message: impl std::fmt::Display) -> Self {
        Self::new(exit::INPUT, message.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::input(format!("{e:#}"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "osclab", version, about = "Numerical lab for converse Markov inequalities on convex domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Directory for output files and the run manifest; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Diameter, width, perimeter, depth, transfinite bracket and vertex angles.
    Geometry {
        #[arg(long)]
        domain: PathBuf,
        /// Number of Fekete points for the transfinite-diameter estimate.
        #[arg(long, default_value_t = 24)]
        fekete: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized audit batch; exits 3 when any report fails.
    Audit {
        /// Fixed domain; random polygons when omitted.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long)]
        audit: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Minimizes M_q over root configurations; exits 4 without an upper witness.
    Search {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        /// boundary-uniform, interior-uniform or corner-clustered.
        #[arg(long, default_value = "interior-uniform")]
        init: String,
        #[command(flatten)]
        common: Common,
    },
    /// Builds the elementary-arc cover; exits 5 when it cannot be built.
    Covering {
        #[arg(long)]
        domain: PathBuf,
        /// Degree; sets r from the schedule r(n).
        #[arg(long, conflicts_with = "r", required_unless_present = "r")]
        n: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        /// Tilt angle; defaults to arcsin(w/d)/80.
        #[arg(long)]
        theta: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Aggregates search manifests into one CSV row per (domain, n, q).
    Table {
        #[arg(required = false)]
        manifests: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Repeats the run recorded in a manifest.
    Rerun {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("OSC_LAB_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Failure::input(format!("OSC_LAB_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    let result = configure_threads().and_then(|_| commands::run(cli, &argv[1..]));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
