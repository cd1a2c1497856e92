//! Command-line front end: reproduce the reference tables, compute densities
//! and exponents for user polynomials, and launch surveys.

mod poly;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use powerfree_core::sequences::SequenceKind;

#[derive(Parser)]
#[command(
    name = "powerfree",
    version,
    about = "Power-free values of polynomials: entropies, exponents, local densities, surveys"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (stdout when omitted). Surveys also write `<out>.checkpoint`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sequence {
    Integers,
    Primes,
    TwoSquares,
}

impl Sequence {
    fn kind(self) -> SequenceKind {
        match self {
            Sequence::Integers => SequenceKind::Integers,
            Sequence::Primes => SequenceKind::Primes,
            Sequence::TwoSquares => SequenceKind::TwoSquares,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropy table for all transitive groups of degree 3-6, with the
    /// expected values side by side.
    Table1,
    /// γ table at θ=1 (groups with entropy > 1).
    Table2,
    /// γ table at θ=1/2 (all groups of degree 3-6).
    Table3,
    /// Solve the minimax exponent for one group.
    Gamma {
        /// Group name as listed by table1 (e.g. "A_3", "F_18(6):2").
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
    },
    /// Predicted k-free density of f over a sequence (local product, and the
    /// Möbius-series route when --z is given).
    Density {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Sequence::Integers)]
        sequence: Sequence,
        /// Euler-product truncation point.
        #[arg(long, default_value_t = 1000)]
        cutoff: u64,
        /// Smoothness bound for the Möbius-series cross-check.
        #[arg(long)]
        z: Option<u64>,
    },
    /// Empirical k-free survey of f(n) over sequence members n ≤ N.
    Survey {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Sequence::Integers)]
        sequence: Sequence,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cutoff: u64,
    },
    /// Independent-indicator simulation of ω classes versus the exact oracle.
    LdpSim {
        #[arg(long)]
        poly: String,
        /// Number of model primes (at most 20 for the exact oracle).
        #[arg(long, default_value_t = 10)]
        cutoff: usize,
        /// Trials.
        #[arg(long = "N", default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Local obstruction check for k-free values of f.
    Check {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
}

/// Worker-count environment variable honoured by survey and ldp-sim.
pub const WORKERS_ENV: &str = "POWERFREE_WORKERS";

fn workers() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let n: usize = v
                .parse()
                .with_context(|| format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))?;
            if n == 0 {
                bail!("{WORKERS_ENV} must be positive");
            }
            Ok(n.min(64))
        }
        Err(_) => Ok(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let workers = workers()?;
    let outcome = match cli.command {
        Command::Table1 => runner::table1()?,
        Command::Table2 => runner::gamma_table(1.0)?,
        Command::Table3 => runner::gamma_table(0.5)?,
        Command::Gamma { group, theta } => runner::gamma_one(&group, theta)?,
        Command::Density { poly, k, sequence, cutoff, z } => {
            let f = poly::parse_polynomial(&poly)?;
            runner::density(&f, k, sequence.kind(), cutoff, z)?
        }
        Command::Survey { poly, k, sequence, n, seed, cutoff } => {
            let f = poly::parse_polynomial(&poly)?;
            runner::survey(&f, k, sequence.kind(), n, seed, cutoff, workers, cli.out.as_deref())?
        }
        Command::LdpSim { poly, cutoff, n, seed } => {
            let f = poly::parse_polynomial(&poly)?;
            runner::ldp_sim(&f, cutoff, n, seed, workers)?
        }
        Command::Check { poly, k } => {
            let f = poly::parse_polynomial(&poly)?;
            runner::check(&f, k)?
        }
    };
    let rendered = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json)?;
            s.push('\n');
            s
        }
        Format::Csv => outcome.csv,
    };
    match cli.out {
        Some(path) => std::fs::write(&path, rendered)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(outcome.pass)
}
