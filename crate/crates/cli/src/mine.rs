use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use ubifim::fimi::{write_report, write_rules_csv, MiningReport};
use ubifim::rules::generate_rules;
use ubifim::{mine_frequent, Fraction, MiningParams};

use crate::{parse_threshold, parse_ubiquity, read_db, CliError};

#[derive(Args)]
pub struct MineArgs {
    /// FIMI transaction file to mine
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Minimum support in [0, 1]; decimals and a/b fractions accepted
    #[arg(long, value_name = "S", value_parser = parse_threshold)]
    support: Fraction,
    /// Minimum rule confidence in [0, 1]
    #[arg(long, value_name = "C", value_parser = parse_threshold)]
    confidence: Fraction,
    /// Drop items with support strictly above this cutoff in (0, 1]
    #[arg(long, value_name = "U", value_parser = parse_ubiquity)]
    ubiquitousness: Option<Fraction>,
    /// Stop the level-wise search at this itemset size
    #[arg(long = "max-len", value_name = "N")]
    max_len: Option<usize>,
    /// Where to write the rules CSV
    #[arg(long = "rules-out", value_name = "PATH")]
    rules_out: PathBuf,
    /// Where to write the key=value run report
    #[arg(long = "report-out", value_name = "PATH")]
    report_out: PathBuf,
}

pub fn run(args: MineArgs) -> Result<(), CliError> {
    let db = read_db(&args.input)?;
    let mut params = MiningParams::new(args.support, args.confidence);
    if let Some(u) = args.ubiquitousness {
        params = params.with_ubiquitousness(u);
    }
    if let Some(len) = args.max_len {
        params = params.with_max_itemset_len(len);
    }
    params
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;

    let n = db.n() as u64;
    let started = Instant::now();
    let outcome = mine_frequent(&db, &params)?;
    let deepest = outcome.levels.last().map_or(0, |l| l.level);
    if deepest >= 20 {
        eprintln!(
            "warning: frequent itemsets reach size {deepest}; \
             rule generation examines 2^k - 2 splits per itemset"
        );
    }
    let rules = generate_rules(&outcome.frequent, n, params.confidence)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;

    let rules_file = create(&args.rules_out)?;
    write_rules_csv(&rules, n, BufWriter::new(rules_file)).map_err(|e| {
        CliError::runtime(format!("cannot write {}: {e}", args.rules_out.display()))
    })?;

    let report = MiningReport::from_run(params, n, &outcome, rules.len() as u64, wall_time_ms);
    let report_file = create(&args.report_out)?;
    write_report(&report, BufWriter::new(report_file)).map_err(|e| {
        CliError::runtime(format!("cannot write {}: {e}", args.report_out.display()))
    })?;
    Ok(())
}

fn create(path: &PathBuf) -> Result<File, CliError> {
    File::create(path)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", path.display())))
}
