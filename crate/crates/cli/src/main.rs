//! `smoothpoly`: smooth polynomial values, bounds, root counts and the acceptance suite.

mod commands;
mod output;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "smoothpoly", version, about = "Smooth values of integer polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "SMOOTHPOLY_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled inputs (`omega --random`).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Describe the output columns of the subcommand and exit.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub schema: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Zero,
    One,
}

/// The polynomial, either as one factor or as a JSON list of factors.
#[derive(Args, Debug, Clone, Serialize)]
pub struct PolyArgs {
    /// A single irreducible factor, e.g. "t^2+1" or "[1,0,1]".
    #[arg(long, conflicts_with = "factors")]
    pub poly: Option<String>,
    /// JSON list of irreducible factors, e.g. '["t","t^2+1"]'.
    #[arg(long)]
    pub factors: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Count n <= x with f(n) y-smooth.
    Psi {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        /// One or more x values.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        /// Smoothness bounds y.
        #[arg(long, value_delimiter = ',', conflicts_with = "u")]
        y: Vec<f64>,
        /// Exponents u, with y = x^(1/u).
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
        /// Also emit the per-n table (single x and y only).
        #[arg(long)]
        dump: bool,
    },
    /// Closed-form bound coefficients.
    Bound {
        #[arg(long, required_unless_present_any = ["poly", "factors"])]
        d: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Evaluate the admissible-range flags at this x.
        #[arg(long)]
        x: Option<f64>,
    },
    /// The Dickman function, with the product prediction when a polynomial is given.
    Dickman {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        u: Vec<f64>,
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
    },
    /// Root counts of f modulo k.
    Omega {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
        /// List the roots modulo p^v.
        #[arg(long, requires = "v")]
        p: Option<u64>,
        #[arg(long)]
        v: Option<u32>,
        /// Add this many moduli drawn uniformly from [1, kmax] with --seed.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 1_000_000)]
        kmax: u64,
    },
    /// Exact V/W sums and their inequality verdicts.
    VwVerify {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        z: Option<u64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// JSON file: a list of {x, z, y, depth} instances, or {"poly"|"factors", "instances"}.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Primitive prime ideal counts in Q(sqrt m).
    Calpha {
        #[arg(long)]
        m: u64,
        #[arg(long, required_unless_present = "window", conflicts_with = "window")]
        x: Option<u64>,
        /// N,M: count over the window (N, N+M].
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<u64>>,
        /// First k excluded against in window mode.
        #[arg(long, value_enum, default_value_t = Start::Zero)]
        exclusion: Start,
        /// Emit one witness per counted n.
        #[arg(long)]
        dump: bool,
    },
    /// R_b(x), the n <= x for which n^2 + b has a primitive divisor.
    Rb {
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        x: u64,
        /// Emit one record per n.
        #[arg(long)]
        dump: bool,
        /// First index of the sequence n^2 + b.
        #[arg(long, value_enum, default_value_t = Start::One)]
        start: Start,
    },
    /// N(x), the n <= x with arctan n irreducible.
    Arctan {
        #[arg(long)]
        x: u64,
    },
    /// Run the acceptance suite and print the pass/fail table.
    Verify {
        /// Restrict to these criteria.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
    },
}

/// Errors mapped to exit codes: usage 2, everything else 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(anyhow::Error),
}

impl From<smoothpoly::Error> for CliError {
    fn from(e: smoothpoly::Error) -> Self {
        CliError::Run(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.into())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Run(e)
    }
}

fn main() -> ExitCode {
    // The schema needs only the subcommand name, not its required arguments.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--schema") {
        if let Some(name) = args.iter().find_map(|a| schema::COMMANDS.iter().find(|c| **c == a.as_str())) {
            print!("{}", schema::describe(name));
            return ExitCode::SUCCESS;
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
