mod bench;
mod generate;
mod mine;
mod stats;

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use ubifim::apriori::MineError;
use ubifim::fimi::FimiError;
use ubifim::fraction::{Fraction, ParseFractionError};
use ubifim::TransactionDatabase;

#[derive(Parser)]
#[command(
    name = "ubifim",
    version,
    about = "Frequent item-set mining with a ubiquitousness filter",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent itemsets and association rules from a FIMI file
    Mine(mine::MineArgs),
    /// Create a synthetic dataset with exact per-item supports
    Generate(generate::GenerateArgs),
    /// Show per-item supports and a support histogram (helps pick u)
    Stats(stats::StatsArgs),
    /// Sweep a (u, s, c) grid and record one CSV row per cell
    Bench(bench::BenchArgs),
}

/// Error carrying its exit code: 1 for bad flags or parameters, 2 for
/// I/O and input-format failures.
pub(crate) enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    pub(crate) fn usage(message: impl Into<String>) -> CliError {
        CliError::Usage(message.into())
    }

    pub(crate) fn runtime(message: impl Into<String>) -> CliError {
        CliError::Runtime(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<MineError> for CliError {
    fn from(e: MineError) -> CliError {
        match e {
            MineError::InvalidParams(p) => CliError::usage(p.to_string()),
            MineError::DeadlineExceeded => CliError::runtime(e.to_string()),
        }
    }
}

/// Opens and parses a FIMI transaction file; failures exit with code 2
/// and name the file (and line, for format errors).
pub(crate) fn read_db(path: &Path) -> Result<TransactionDatabase, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::runtime(format!("cannot open {}: {e}", path.display())))?;
    ubifim::fimi::parse_fimi(BufReader::new(file)).map_err(|e| match e {
        FimiError::Io(io) => CliError::runtime(format!("cannot read {}: {io}", path.display())),
        other => CliError::runtime(format!("{}: {other}", path.display())),
    })
}

/// clap value parser for support/confidence thresholds in [0, 1].
pub(crate) fn parse_threshold(s: &str) -> Result<Fraction, String> {
    let f = parse_fraction(s)?;
    if !f.in_unit_interval() {
        return Err(format!("{s} is outside [0, 1]"));
    }
    Ok(f)
}

/// clap value parser for the ubiquitousness cutoff in (0, 1].
pub(crate) fn parse_ubiquity(s: &str) -> Result<Fraction, String> {
    let f = parse_fraction(s)?;
    if f.is_zero() || !f.in_unit_interval() {
        return Err(format!("{s} is outside (0, 1]"));
    }
    Ok(f)
}

fn parse_fraction(s: &str) -> Result<Fraction, String> {
    s.parse().map_err(|e: ParseFractionError| e.to_string())
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipe goes away (`ubifim stats | head`)
    // instead of panicking on EPIPE, like any conventional filter.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Mine(args) => mine::run(args),
        Command::Generate(args) => generate::run(args),
        Command::Stats(args) => stats::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
