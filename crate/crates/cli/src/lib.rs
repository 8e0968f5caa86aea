//! Command-line front end for doldkit.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod bfile;
mod commands;
pub mod report;

pub use bfile::{parse_bfile, BFile};
pub use commands::run;
pub use report::{Output, Report, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed b-file line {0}")]
    MalformedLine(usize),
    #[error("b-file index not increasing at line {0}")]
    NonMonotoneIndex(usize),
    #[error("b-file has no window starting at index 1 (first usable index {0})")]
    NoWindow(i64),
    #[error("cannot parse {0:?} as a number")]
    BadNumber(String),
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] doldkit::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "doldkit",
    version,
    about = "Exact tests for Dold sequences, realizability and dynamical zeta functions"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Window length (truncates inputs; sets the length for generators).
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where a sequence comes from. With none of these flags, stdin is read.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Inline terms separated by commas or spaces.
    #[arg(long, group = "input")]
    pub seq: Option<String>,
    /// File of terms separated by commas or whitespace.
    #[arg(long, group = "input")]
    pub file: Option<PathBuf>,
    /// OEIS b-file.
    #[arg(long, group = "input")]
    pub bfile: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Dold,
    Phi,
    PrimePower,
    Psi,
    Realizable,
    Qdold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
    #[value(name = "invB")]
    InvB,
    #[value(name = "invC")]
    InvC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaFrom {
    Fix,
    Orbits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyName {
    Duality,
    Criteria,
    Hankel,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a congruence or realizability criterion.
    Check {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        /// ψ for `--criterion psi` (defaults to the Möbius function).
        #[arg(long)]
        psi: Option<String>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Apply an orbit-count or generating-sequence transform.
    Transform {
        #[arg(long, value_enum)]
        op: TransformOp,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Build a finite map whose fixed-point counts are the input.
    Realize {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Zeta function coefficients, optionally fitted by a rational function.
    Zeta {
        #[arg(long, value_enum)]
        from: ZetaFrom,
        /// Largest numerator/denominator degree to try.
        #[arg(long)]
        fit: Option<usize>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Kronecker-Hankel determinants Δ_bound..Δ_{bound+width}.
    Hankel {
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        width: usize,
        /// Use the input as the Hankel window itself instead of taking its
        /// generating sequence.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Windowed failure (repair factor) of a named generator.
    Failure {
        #[arg(long)]
        gen: String,
    },
    /// Trace sequence of a matrix read from a file.
    Trace {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Reindex a generator or an input window by a time change.
    Timechange {
        /// `mono:k:l`, `gp:p`, or a comma-separated composition.
        #[arg(long)]
        h: String,
        #[arg(long, conflicts_with = "input")]
        gen: Option<String>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run every analysis on a b-file.
    Classify {
        bfile: PathBuf,
        /// Largest period considered by the periodic expansion.
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Randomized property check.
    Property {
        #[arg(long, value_enum)]
        name: PropertyName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// Parses, runs and renders one invocation. Returns the rendered output,
/// notices for stderr, and the exit code.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<(String, Vec<String>, u8), CliError> {
    let (report, notices) = run(cli, stdin)?;
    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_string(),
    };
    Ok((rendered, notices, report.exit_code()))
}
