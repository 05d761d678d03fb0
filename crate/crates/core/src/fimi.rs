//! Text formats: FIMI transaction files, the rules CSV, and the flat
//! key=value mining report. All output is LF-terminated and locale-free
//! so identical runs produce identical bytes.

use std::io::{self, BufRead, Write};

use crate::apriori::{LevelSummary, MiningOutcome};
use crate::db::{ItemSet, TransactionDatabase};
use crate::params::MiningParams;
use crate::rules::AssociationRule;

#[derive(Debug, thiserror::Error)]
pub enum FimiError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: '{token}' is not an integer")]
    NotAnInteger { line: usize, token: String },
    #[error("line {line}: item id '{token}' is negative")]
    Negative { line: usize, token: String },
    #[error("line {line}: item id '{token}' exceeds the 32-bit limit")]
    OutOfRange { line: usize, token: String },
}

/// Reads the FIMI text format: one transaction per line, item ids
/// separated by whitespace. Blank lines are skipped; duplicate ids within
/// a line are collapsed.
pub fn parse_fimi<R: BufRead>(reader: R) -> Result<TransactionDatabase, FimiError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (at, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let number = at + 1;
        let mut row = Vec::new();
        for token in line.split_whitespace() {
            row.push(parse_item_id(token, number)?);
        }
        rows.push(row);
    }
    Ok(TransactionDatabase::build(rows))
}

fn parse_item_id(token: &str, line: usize) -> Result<u32, FimiError> {
    if let Ok(id) = token.parse::<u32>() {
        return Ok(id);
    }
    let owned = || token.to_string();
    if let Some(rest) = token.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(FimiError::Negative {
                line,
                token: owned(),
            });
        }
    }
    if !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FimiError::OutOfRange {
            line,
            token: owned(),
        });
    }
    Err(FimiError::NotAnInteger {
        line,
        token: owned(),
    })
}

/// Writes the FIMI text format. Empty transactions have no representation
/// in it (a blank line reads back as no transaction at all) and are
/// skipped, so a database that went through the ubiquitousness filter may
/// reload with a smaller transaction count.
pub fn write_fimi<W: Write>(db: &TransactionDatabase, mut writer: W) -> io::Result<()> {
    for t in db.transactions() {
        if t.items.is_empty() {
            continue;
        }
        writeln!(writer, "{}", t.items)?;
    }
    Ok(())
}

fn pipe_join(set: &ItemSet) -> String {
    let ids: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    ids.join("|")
}

/// Writes the rules CSV: header
/// `lhs,rhs,support_count,support,confidence,lift`, itemsets pipe-joined,
/// ratios with six decimals, LF line endings.
pub fn write_rules_csv<W: Write>(
    rules: &[AssociationRule],
    n_transactions: u64,
    mut writer: W,
) -> io::Result<()> {
    writeln!(writer, "lhs,rhs,support_count,support,confidence,lift")?;
    for rule in rules {
        let support = rule.support_count as f64 / n_transactions as f64;
        writeln!(
            writer,
            "{},{},{},{:.6},{:.6},{:.6}",
            pipe_join(&rule.lhs),
            pipe_join(&rule.rhs),
            rule.support_count,
            support,
            rule.confidence.to_f64(),
            rule.lift,
        )?;
    }
    Ok(())
}

/// Everything a mining run reports, in a flat key=value text form.
/// Fractions serialize as num/den so thresholds round-trip exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningReport {
    pub params: MiningParams,
    pub n_transactions: u64,
    pub ignored_items: ItemSet,
    pub levels: Vec<LevelSummary>,
    pub frequent_count: u64,
    pub rule_count: u64,
    pub wall_time_ms: f64,
}

impl MiningReport {
    pub fn from_run(
        params: MiningParams,
        n_transactions: u64,
        outcome: &MiningOutcome,
        rule_count: u64,
        wall_time_ms: f64,
    ) -> MiningReport {
        MiningReport {
            params,
            n_transactions,
            ignored_items: outcome.ignored.clone(),
            levels: outcome.levels.clone(),
            frequent_count: outcome.frequent.len() as u64,
            rule_count,
            wall_time_ms,
        }
    }
}

pub fn write_report<W: Write>(report: &MiningReport, mut w: W) -> io::Result<()> {
    writeln!(w, "support={}", report.params.support)?;
    writeln!(w, "confidence={}", report.params.confidence)?;
    if let Some(u) = report.params.ubiquitousness {
        writeln!(w, "ubiquitousness={u}")?;
    }
    if let Some(len) = report.params.max_itemset_len {
        writeln!(w, "max_itemset_len={len}")?;
    }
    writeln!(w, "n_transactions={}", report.n_transactions)?;
    writeln!(w, "ignored_items={}", pipe_join(&report.ignored_items))?;
    writeln!(w, "ignored_items_count={}", report.ignored_items.len())?;
    writeln!(w, "frequent_count={}", report.frequent_count)?;
    writeln!(w, "rule_count={}", report.rule_count)?;
    writeln!(w, "wall_time_ms={}", report.wall_time_ms)?;
    for level in &report.levels {
        writeln!(
            w,
            "level.{}.candidates={}",
            level.level, level.candidate_count
        )?;
        writeln!(w, "level.{}.frequent={}", level.level, level.frequent_count)?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: expected key=value")]
    BadLine { line: usize },
    #[error("missing key '{0}'")]
    MissingKey(String),
    #[error("key '{key}': cannot parse '{value}'")]
    BadValue { key: String, value: String },
}

pub fn parse_report<R: BufRead>(reader: R) -> Result<MiningReport, ReportError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (at, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ReportError::BadLine { line: at + 1 })?;
        pairs.push((key.to_string(), value.to_string()));
    }
    let get = |key: &str| -> Option<&str> {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    let require = |key: &str| get(key).ok_or_else(|| ReportError::MissingKey(key.to_string()));
    fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ReportError> {
        value.parse().map_err(|_| ReportError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        })
    }

    let mut params = MiningParams::new(
        parsed("support", require("support")?)?,
        parsed("confidence", require("confidence")?)?,
    );
    if let Some(u) = get("ubiquitousness") {
        params = params.with_ubiquitousness(parsed("ubiquitousness", u)?);
    }
    if let Some(len) = get("max_itemset_len") {
        params = params.with_max_itemset_len(parsed("max_itemset_len", len)?);
    }
    let ignored_value = require("ignored_items")?;
    let ignored_items = if ignored_value.is_empty() {
        ItemSet::empty()
    } else {
        let ids: Result<Vec<u32>, ReportError> = ignored_value
            .split('|')
            .map(|tok| parsed("ignored_items", tok))
            .collect();
        ItemSet::from_ids(ids?)
    };
    let declared: usize = parsed("ignored_items_count", require("ignored_items_count")?)?;
    if declared != ignored_items.len() {
        return Err(ReportError::BadValue {
            key: "ignored_items_count".to_string(),
            value: declared.to_string(),
        });
    }

    let mut levels = Vec::new();
    for k in 1.. {
        let candidates_key = format!("level.{k}.candidates");
        let Some(candidates) = get(&candidates_key) else {
            break;
        };
        let frequent_key = format!("level.{k}.frequent");
        levels.push(LevelSummary {
            level: k,
            candidate_count: parsed(&candidates_key, candidates)?,
            frequent_count: parsed(&frequent_key, require(&frequent_key)?)?,
        });
    }

    Ok(MiningReport {
        params,
        n_transactions: parsed("n_transactions", require("n_transactions")?)?,
        ignored_items,
        levels,
        frequent_count: parsed("frequent_count", require("frequent_count")?)?,
        rule_count: parsed("rule_count", require("rule_count")?)?,
        wall_time_ms: parsed("wall_time_ms", require("wall_time_ms")?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apriori::mine_frequent;
    use crate::fraction::Fraction;
    use crate::rules::generate_rules;

    fn grocery_db() -> TransactionDatabase {
        TransactionDatabase::build(vec![vec![1, 5, 7], vec![2, 3, 5, 7], vec![4, 6]])
    }

    #[test]
    fn parse_skips_blanks_and_collapses_duplicates() {
        let text = "1 2 2 3\n\n   \n7 5\n";
        let db = parse_fimi(text.as_bytes()).unwrap();
        assert_eq!(db.n(), 2);
        assert_eq!(db.transactions()[0].items, ItemSet::from_ids([1, 2, 3]));
        assert_eq!(db.transactions()[1].items, ItemSet::from_ids([5, 7]));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_fimi("1 2\n\n3 x".as_bytes()).unwrap_err();
        assert!(
            matches!(&err, FimiError::NotAnInteger { line: 3, token } if token == "x"),
            "{err:?}"
        );
        let err = parse_fimi("-4".as_bytes()).unwrap_err();
        assert!(matches!(&err, FimiError::Negative { line: 1, token } if token == "-4"));
        let err = parse_fimi("99999999999".as_bytes()).unwrap_err();
        assert!(matches!(&err, FimiError::OutOfRange { line: 1, .. }));
        let err = parse_fimi("1.5".as_bytes()).unwrap_err();
        assert!(matches!(&err, FimiError::NotAnInteger { line: 1, .. }));
    }

    #[test]
    fn fimi_round_trip() {
        let db = grocery_db();
        let mut text = Vec::new();
        write_fimi(&db, &mut text).unwrap();
        assert_eq!(text, b"1 5 7\n2 3 5 7\n4 6\n");
        let back = parse_fimi(&text[..]).unwrap();
        assert_eq!(back.n(), db.n());
        assert_eq!(back.transactions(), db.transactions());
    }

    #[test]
    fn write_fimi_cannot_keep_empty_transactions() {
        let db = TransactionDatabase::build(vec![vec![], vec![3]]);
        let mut text = Vec::new();
        write_fimi(&db, &mut text).unwrap();
        assert_eq!(text, b"3\n");
    }

    #[test]
    fn rules_csv_bytes_are_pinned() {
        let db = grocery_db();
        let params = MiningParams::new(Fraction::new(2, 3), Fraction::new(1, 2));
        let outcome = mine_frequent(&db, &params).unwrap();
        let rules = generate_rules(&outcome.frequent, 3, params.confidence).unwrap();
        let mut csv = Vec::new();
        write_rules_csv(&rules, 3, &mut csv).unwrap();
        let expected = "lhs,rhs,support_count,support,confidence,lift\n\
                        5,7,2,0.666667,1.000000,1.500000\n\
                        7,5,2,0.666667,1.000000,1.500000\n";
        assert_eq!(String::from_utf8(csv).unwrap(), expected);
    }

    #[test]
    fn report_round_trips() {
        let db = grocery_db();
        let params = MiningParams::new(Fraction::new(2, 3), Fraction::new(1, 2))
            .with_ubiquitousness(Fraction::new(9, 10));
        let outcome = mine_frequent(&db, &params).unwrap();
        let report = MiningReport::from_run(params, 3, &outcome, 2, 1.25);
        let mut text = Vec::new();
        write_report(&report, &mut text).unwrap();
        let back = parse_report(&text[..]).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn report_layout_is_pinned() {
        let report = MiningReport {
            params: MiningParams::new(Fraction::new(3, 10), Fraction::new(1, 2))
                .with_ubiquitousness(Fraction::new(7, 10)),
            n_transactions: 100,
            ignored_items: ItemSet::from_ids([9, 4]),
            levels: vec![
                LevelSummary {
                    level: 1,
                    candidate_count: 12,
                    frequent_count: 5,
                },
                LevelSummary {
                    level: 2,
                    candidate_count: 10,
                    frequent_count: 3,
                },
            ],
            frequent_count: 8,
            rule_count: 4,
            wall_time_ms: 12.5,
        };
        let mut text = Vec::new();
        write_report(&report, &mut text).unwrap();
        let expected = "support=3/10\n\
                        confidence=1/2\n\
                        ubiquitousness=7/10\n\
                        n_transactions=100\n\
                        ignored_items=4|9\n\
                        ignored_items_count=2\n\
                        frequent_count=8\n\
                        rule_count=4\n\
                        wall_time_ms=12.5\n\
                        level.1.candidates=12\n\
                        level.1.frequent=5\n\
                        level.2.candidates=10\n\
                        level.2.frequent=3\n";
        assert_eq!(String::from_utf8(text).unwrap(), expected);
    }

    #[test]
    fn report_missing_key_is_an_error() {
        let err = parse_report("support=1/2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ReportError::MissingKey(k) if k == "confidence"));
    }
}
