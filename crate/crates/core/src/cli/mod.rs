//! Command-line front end.

pub mod commands;
pub mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::family::Mode;
use crate::verify::Level;

use commands::{BoundsOptions, GenOptions, SelectOptions, EXIT_ERROR};

#[derive(Debug, Parser)]
#[command(
    name = "interlace",
    version,
    about = "Column selection with a certified least singular value"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedily pick k columns and report the achieved sigma_min^2 against every bound.
    Select(SelectArgs),
    /// Tabulate the closed-form bounds for a shape or a matrix.
    Bounds(BoundsArgs),
    /// Run the built-in identity and inequality suites.
    Verify(VerifyArgs),
    /// Write a seeded isotropic instance.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Matrix file (.csv or .json).
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "with")]
    pub mode: Mode,
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
    /// Read every entry as an exact rational.
    #[arg(long)]
    pub exact: bool,
    /// JSON report path; without it the report follows the table on stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: usize,
    /// Matrix file; adds the stable-rank bounds.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub exact: bool,
    /// Only mark the bounds of this family as applicable.
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// quick or full.
    #[arg(default_value = "quick")]
    pub level: Level,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exactly isotropic rational instance instead of a normalized Gaussian one.
    #[arg(long)]
    pub exact: bool,
    /// Output path (.csv or .json); stdout as CSV when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Select(a) => commands::cmd_select(&SelectOptions {
            input: a.input,
            k: a.k,
            mode: a.mode,
            epsilon: a.epsilon,
            exact: a.exact,
            output: a.output,
        }),
        Command::Bounds(a) => commands::cmd_bounds(&BoundsOptions {
            d: a.d,
            m: a.m,
            k: a.k,
            input: a.input,
            exact: a.exact,
            mode: a.mode,
            output: a.output,
        }),
        Command::Verify(a) => commands::cmd_verify(a.level),
        Command::Gen(a) => commands::cmd_gen(&GenOptions {
            d: a.d,
            m: a.m,
            seed: a.seed,
            exact: a.exact,
            output: a.output,
        }),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    })
}
