use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{ArgGroup, Args};
use ubifim::apriori::{mine_frequent_deadline, MineError, MiningOutcome};
use ubifim::datagen::{self, ExperimentPreset};
use ubifim::rules::{generate_rules_deadline, RuleError};
use ubifim::{Deadline, MiningParams, TransactionDatabase};

use crate::{parse_threshold, parse_ubiquity, read_db, CliError};

#[derive(Args)]
#[command(group(ArgGroup::new("dataset").required(true).args(["input", "preset"])))]
pub struct BenchArgs {
    /// FIMI transaction file to sweep
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Sweep a stock dataset (FIM1..FIM5) instead of a file
    #[arg(long, value_name = "NAME", value_parser = ExperimentPreset::from_str)]
    preset: Option<ExperimentPreset>,
    /// Comma-separated minimum supports, e.g. 0.6,0.5,0.4
    #[arg(long, value_name = "LIST")]
    supports: String,
    /// Comma-separated ubiquitousness cutoffs; "none" runs unfiltered
    #[arg(long, value_name = "LIST", default_value = "none")]
    ubiquitousness: String,
    /// Comma-separated minimum confidences
    #[arg(long, value_name = "LIST")]
    confidence: String,
    /// Where to write the grid CSV
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Timing repeats per cell; the median wall time is reported
    #[arg(long, value_name = "R", default_value_t = 1)]
    repeat: usize,
    /// Per-cell time budget in seconds; 0 disables it
    #[arg(long = "time-budget", value_name = "SECONDS", default_value_t = 60)]
    time_budget: u64,
}

/// One grid cell, keeping the flag tokens verbatim so the CSV echoes
/// exactly what was asked for.
struct Cell {
    u_token: String,
    s_token: String,
    c_token: String,
    params: MiningParams,
}

struct CellRow {
    ignored_items: usize,
    frequent_count: String,
    rule_count: String,
    wall_time_ms: f64,
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    if args.repeat == 0 {
        return Err(CliError::usage("--repeat must be at least 1"));
    }
    // Every cell is validated before any mining starts: a bad corner of
    // the grid should fail the run up front, not after an hour.
    let cells = build_grid(&args)?;

    let db = match (&args.input, args.preset) {
        (Some(path), None) => read_db(path)?,
        (None, Some(preset)) => datagen::generate(&datagen::experiment_spec(preset))
            .map_err(|e| CliError::usage(e.to_string()))?,
        _ => unreachable!("clap enforces exactly one of --input/--preset"),
    };
    let budget = (args.time_budget > 0).then(|| Duration::from_secs(args.time_budget));

    let file = File::create(&args.out)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", args.out.display())))?;
    let mut out = BufWriter::new(file);
    let mut emit = |line: String| -> Result<(), CliError> {
        writeln!(out, "{line}")
            .and_then(|()| out.flush())
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", args.out.display())))
    };
    emit(
        "ubiquitousness,support,confidence,ignored_items,frequent_count,rule_count,wall_time_ms"
            .to_string(),
    )?;
    for cell in &cells {
        let row = run_cell(&db, &cell.params, args.repeat, budget)?;
        emit(format!(
            "{},{},{},{},{},{},{}",
            cell.u_token,
            cell.s_token,
            cell.c_token,
            row.ignored_items,
            row.frequent_count,
            row.rule_count,
            row.wall_time_ms,
        ))?;
    }
    println!("rows={}", cells.len());
    Ok(())
}

/// Cartesian product in u-outer, s-middle, c-inner order, so rows sharing
/// a cutoff stay adjacent in the CSV.
fn build_grid(args: &BenchArgs) -> Result<Vec<Cell>, CliError> {
    let u_list = split_tokens(&args.ubiquitousness);
    let s_list = split_tokens(&args.supports);
    let c_list = split_tokens(&args.confidence);
    let mut cells = Vec::with_capacity(u_list.len() * s_list.len() * c_list.len());
    for u_token in &u_list {
        let u = if u_token == "none" {
            None
        } else {
            Some(
                parse_ubiquity(u_token)
                    .map_err(|e| CliError::usage(format!("--ubiquitousness: {e}")))?,
            )
        };
        for s_token in &s_list {
            let s = parse_threshold(s_token)
                .map_err(|e| CliError::usage(format!("--supports: {e}")))?;
            for c_token in &c_list {
                let c = parse_threshold(c_token)
                    .map_err(|e| CliError::usage(format!("--confidence: {e}")))?;
                let mut params = MiningParams::new(s, c);
                if let Some(u) = u {
                    params = params.with_ubiquitousness(u);
                }
                params
                    .validate()
                    .map_err(|e| CliError::usage(e.to_string()))?;
                cells.push(Cell {
                    u_token: u_token.clone(),
                    s_token: s_token.clone(),
                    c_token: c_token.clone(),
                    params,
                });
            }
        }
    }
    Ok(cells)
}

fn split_tokens(list: &str) -> Vec<String> {
    list.split(',').map(|t| t.trim().to_string()).collect()
}

/// Times mine+rules `repeat` times and reports the median. The budget is
/// per attempt; the first attempt to blow it marks the whole cell TIMEOUT
/// (further repeats would only blow it again).
fn run_cell(
    db: &TransactionDatabase,
    params: &MiningParams,
    repeat: usize,
    budget: Option<Duration>,
) -> Result<CellRow, CliError> {
    let n = db.n() as u64;
    let mut times: Vec<f64> = Vec::with_capacity(repeat);
    let mut counts: Option<(usize, usize, usize)> = None;
    for _ in 0..repeat {
        let deadline = budget.map_or_else(Deadline::none, Deadline::after);
        let started = Instant::now();
        let outcome = match mine_frequent_deadline(db, params, deadline) {
            Ok(outcome) => outcome,
            Err(MineError::DeadlineExceeded) => {
                return Ok(timeout_row(db, params, None, started.elapsed()));
            }
            Err(MineError::InvalidParams(e)) => return Err(CliError::usage(e.to_string())),
        };
        let rules = match generate_rules_deadline(&outcome.frequent, n, params.confidence, deadline)
        {
            Ok(rules) => rules,
            Err(RuleError::DeadlineExceeded) => {
                return Ok(timeout_row(db, params, Some(&outcome), started.elapsed()));
            }
            Err(e) => return Err(CliError::runtime(e.to_string())),
        };
        times.push(started.elapsed().as_secs_f64() * 1e3);
        counts.get_or_insert((outcome.ignored.len(), outcome.frequent.len(), rules.len()));
    }
    let (ignored, frequent, rules) = counts.expect("repeat >= 1");
    Ok(CellRow {
        ignored_items: ignored,
        frequent_count: frequent.to_string(),
        rule_count: rules.to_string(),
        wall_time_ms: median_ms(&mut times),
    })
}

/// A cell cut off by the budget. The ignored-item count is still real
/// (the filter pass is cheap); the wall time is the elapsed time at the
/// moment mining gave up.
fn timeout_row(
    db: &TransactionDatabase,
    params: &MiningParams,
    mined: Option<&MiningOutcome>,
    elapsed: Duration,
) -> CellRow {
    let ignored_items = match (mined, params.ubiquitousness) {
        (Some(outcome), _) => outcome.ignored.len(),
        (None, Some(u)) => db.filter_ubiquitous(u).1.len(),
        (None, None) => 0,
    };
    CellRow {
        ignored_items,
        frequent_count: mined
            .map_or_else(|| "TIMEOUT".to_string(), |o| o.frequent.len().to_string()),
        rule_count: "TIMEOUT".to_string(),
        wall_time_ms: elapsed.as_secs_f64() * 1e3,
    }
}

fn median_ms(times: &mut [f64]) -> f64 {
    times.sort_by(|a, b| a.partial_cmp(b).expect("wall times are finite"));
    let mid = times.len() / 2;
    if times.len() % 2 == 1 {
        times[mid]
    } else {
        (times[mid - 1] + times[mid]) / 2.0
    }
}
