use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::db::TransactionDatabase;
use crate::fraction::Fraction;

/// Placement scheme stamped into generator output so runs can be
/// reproduced: each item draws from its own ChaCha8 stream (stream id =
/// zero-based item index, seed = the spec's seed) and lands in exactly
/// round(support * n) distinct transactions chosen by partial
/// Fisher-Yates. Adding groups to a spec therefore never disturbs the
/// placement of earlier items.
pub const RNG_ALGORITHM: &str = "chacha8, one stream per item, partial fisher-yates placement";

/// A block of `item_count` items sharing one target support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ItemGroup {
    pub item_count: u32,
    pub target_support: Fraction,
}

/// Synthetic database layout: consecutive ids starting at 1, assigned
/// group by group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub groups: Vec<ItemGroup>,
    pub n_transactions: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn total_items(&self) -> u32 {
        self.groups.iter().map(|g| g.item_count).sum()
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.n_transactions == 0 {
            return Err(DatagenError::ZeroTransactions);
        }
        for (index, group) in self.groups.iter().enumerate() {
            if group.item_count == 0 {
                return Err(DatagenError::EmptyGroup { index });
            }
            let s = group.target_support;
            if s.is_zero() || !s.in_unit_interval() {
                return Err(DatagenError::SupportRange { index, support: s });
            }
            if rounded_occurrences(s, self.n_transactions as u64) == 0 {
                return Err(DatagenError::RoundsToZero {
                    index,
                    support: s,
                    n_transactions: self.n_transactions,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatagenError {
    #[error("transaction count must be at least 1")]
    ZeroTransactions,
    #[error("group {index}: item count must be at least 1")]
    EmptyGroup { index: usize },
    #[error("group {index}: target support {support} outside (0, 1]")]
    SupportRange { index: usize, support: Fraction },
    #[error(
        "group {index}: support {support} of {n_transactions} transactions rounds to zero occurrences"
    )]
    RoundsToZero {
        index: usize,
        support: Fraction,
        n_transactions: usize,
    },
    #[error("spec token '{token}' is not of the form item_count:support")]
    BadSpecToken { token: String },
}

/// round(support * n), half away from zero, computed exactly.
fn rounded_occurrences(support: Fraction, n: u64) -> u64 {
    let num = 2 * support.numerator() as u128 * n as u128 + support.denominator() as u128;
    let den = 2 * support.denominator() as u128;
    u64::try_from(num / den).expect("occurrence count exceeds u64")
}

/// Builds the synthetic database. Each item independently lands in exactly
/// round(support * n) transactions, so single-item supports are exact by
/// construction; co-occurrence is left to chance. Transactions that end up
/// empty are kept.
pub fn generate(spec: &GeneratorSpec) -> Result<TransactionDatabase, DatagenError> {
    spec.validate()?;
    let n = spec.n_transactions;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut item_id: u32 = 1;
    for group in &spec.groups {
        let occurrences = rounded_occurrences(group.target_support, n as u64) as usize;
        for _ in 0..group.item_count {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(u64::from(item_id - 1));
            let mut slots: Vec<u32> = (0..n as u32).collect();
            for i in 0..occurrences {
                let j = rng.random_range(i..n);
                slots.swap(i, j);
            }
            for &t in &slots[..occurrences] {
                rows[t as usize].push(item_id);
            }
            item_id += 1;
        }
    }
    Ok(TransactionDatabase::build(rows))
}

/// Parses the CLI group syntax `count:support[,count:support...]`,
/// e.g. `10:0.3,5:0.5`.
pub fn parse_groups(s: &str) -> Result<Vec<ItemGroup>, DatagenError> {
    s.split(',')
        .map(|token| {
            let bad = || DatagenError::BadSpecToken {
                token: token.to_string(),
            };
            let (count, support) = token.split_once(':').ok_or_else(bad)?;
            Ok(ItemGroup {
                item_count: count.trim().parse().map_err(|_| bad())?,
                target_support: support.trim().parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// The five stock layouts used by the scaling experiments. The first four
/// share a 15-item base (ten at 0.3, five at 0.5) and differ only in how
/// many always-present items are appended: 0, 2, 4, or 6. The fifth mixes
/// near-ubiquitous supports for exercising the filter cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentPreset {
    Fim1,
    Fim2,
    Fim3,
    Fim4,
    Fim5,
}

impl ExperimentPreset {
    pub const ALL: [ExperimentPreset; 5] = [
        ExperimentPreset::Fim1,
        ExperimentPreset::Fim2,
        ExperimentPreset::Fim3,
        ExperimentPreset::Fim4,
        ExperimentPreset::Fim5,
    ];
}

impl fmt::Display for ExperimentPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ExperimentPreset::Fim1 => "FIM1",
            ExperimentPreset::Fim2 => "FIM2",
            ExperimentPreset::Fim3 => "FIM3",
            ExperimentPreset::Fim4 => "FIM4",
            ExperimentPreset::Fim5 => "FIM5",
        };
        f.write_str(name)
    }
}

impl FromStr for ExperimentPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<ExperimentPreset, String> {
        match s.to_ascii_uppercase().as_str() {
            "FIM1" => Ok(ExperimentPreset::Fim1),
            "FIM2" => Ok(ExperimentPreset::Fim2),
            "FIM3" => Ok(ExperimentPreset::Fim3),
            "FIM4" => Ok(ExperimentPreset::Fim4),
            "FIM5" => Ok(ExperimentPreset::Fim5),
            _ => Err(format!("unknown preset '{s}' (expected FIM1..FIM5)")),
        }
    }
}

/// Spec for a stock preset at the default size: 10,000 transactions,
/// seed 0.
pub fn experiment_spec(preset: ExperimentPreset) -> GeneratorSpec {
    let base = vec![
        ItemGroup {
            item_count: 10,
            target_support: Fraction::new(3, 10),
        },
        ItemGroup {
            item_count: 5,
            target_support: Fraction::new(5, 10),
        },
    ];
    let mut groups = base;
    match preset {
        ExperimentPreset::Fim1 => {}
        ExperimentPreset::Fim2 => groups.push(full_group(2)),
        ExperimentPreset::Fim3 => groups.push(full_group(4)),
        ExperimentPreset::Fim4 => groups.push(full_group(6)),
        ExperimentPreset::Fim5 => groups.extend([
            ItemGroup {
                item_count: 2,
                target_support: Fraction::new(8, 10),
            },
            ItemGroup {
                item_count: 2,
                target_support: Fraction::new(9, 10),
            },
            full_group(2),
        ]),
    }
    GeneratorSpec {
        groups,
        n_transactions: 10_000,
        seed: 0,
    }
}

fn full_group(item_count: u32) -> ItemGroup {
    ItemGroup {
        item_count,
        target_support: Fraction::ONE,
    }
}
