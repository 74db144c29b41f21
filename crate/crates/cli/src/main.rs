//! `pdc`: exact analysis of polyhedral DC functions from the command line.
//!
//! Exit codes are a stable contract: 0 when the checked condition holds,
//! 1 when it fails (with a witness printed), 2 on usage or parse errors,
//! 3 when an internal invariant is violated.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "pdc",
    version,
    about = "Exact analysis of polyhedral DC functions: codifferentials, \
             coexhausters, boundedness and stationarity conditions with \
             machine-checkable certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the function at a point
    Eval {
        /// Instance file (JSON)
        #[arg(long)]
        file: PathBuf,
        /// Evaluation point, comma-separated rationals (e.g. "3" or "1/2,-2")
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        /// Also print the 1-based active piece indices at the point
        #[arg(long)]
        active: bool,
        /// Also print the directional derivative at the point in this direction
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// Print a representation's vertex sets
    Show {
        #[arg(long)]
        file: PathBuf,
        /// Which representation to print
        #[arg(long, value_enum)]
        which: Representation,
    },
    /// Decide a condition via both routes, with certificates and witnesses
    Check {
        #[arg(long)]
        file: PathBuf,
        /// Which condition to check
        #[arg(long, value_enum)]
        which: WhichCheck,
        /// Cross-check the verdicts against the lattice and recession oracle
        #[arg(long)]
        oracle: bool,
        /// Write the machine-readable report to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate exact function values over a lattice (dimension 1 or 2)
    Plot {
        #[arg(long)]
        file: PathBuf,
        /// Per-axis range "lo,hi" (e.g. "-5,5")
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Lattice step, a positive rational (e.g. "1/4")
        #[arg(long, allow_hyphen_values = true)]
        step: String,
        /// Write rows to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized route-equivalence and oracle audit
    Audit {
        /// Number of random instances
        #[arg(long)]
        count: usize,
        /// Seed label for the deterministic instance stream
        #[arg(long, default_value = "pdc-audit")]
        seed: String,
        /// Write the table to this file as well
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Representation {
    Codifferential,
    UpperCoexhauster,
    LowerCoexhauster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichCheck {
    BoundedBelow,
    BoundedAbove,
    Min,
    Max,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval { file, delta, active, direction } => {
            commands::eval(&file, &delta, active, direction.as_deref())
        }
        Command::Show { file, which } => commands::show(&file, which),
        Command::Check { file, which, oracle, out } => {
            commands::check(&file, which, oracle, out.as_deref())
        }
        Command::Plot { file, range, step, out } => {
            commands::plot(&file, &range, &step, out.as_deref())
        }
        Command::Audit { count, seed, out } => commands::audit(count, &seed, out.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
