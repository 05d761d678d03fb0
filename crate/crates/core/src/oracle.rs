//! Brute-force reference implementations and closed-form counting
//! formulae. Everything here trades speed for obviousness: exhaustive
//! subset enumeration over bitmask transactions, no candidate generation,
//! no pruning, no shared code with the level-wise engine. Differential
//! tests lean on this module, so keep it naive.

use crate::apriori::FrequentItemset;
use crate::db::{ItemSet, TransactionDatabase};
use crate::fraction::{min_support_count, Fraction};
use crate::params::{MiningParams, ParamsError};
use crate::rules::AssociationRule;

/// Largest universe the exhaustive search accepts; 2^20 subsets is the
/// point where "obviously correct" stops being "usably slow".
pub const BRUTE_FORCE_ITEM_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{items} distinct items exceed the brute-force cap of {cap}")]
    UniverseTooLarge { items: usize, cap: usize },
    #[error("count does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    InvalidParams(#[from] ParamsError),
}

/// Exhaustive frequent-itemset search: applies the same ubiquitousness
/// filter, then enumerates every non-empty subset of the remaining items
/// and counts its support directly against the transaction bitmasks.
pub fn brute_force_frequent(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<Vec<FrequentItemset>, OracleError> {
    params.validate()?;
    let filtered_storage;
    let source = match params.ubiquitousness {
        Some(u) => {
            filtered_storage = db.filter_ubiquitous(u).0;
            &filtered_storage
        }
        None => db,
    };
    let table = SupportTable::build(source)?;
    let min_count = min_support_count(source.n() as u64, params.support);
    let max_len = params.max_itemset_len.unwrap_or(usize::MAX);

    let mut found = Vec::new();
    for mask in 1..table.subset_count() {
        let level = mask.count_ones() as usize;
        if level > max_len {
            continue;
        }
        let count = table.count(mask);
        if count >= min_count {
            found.push(FrequentItemset {
                itemset: table.itemset(mask),
                count,
                level,
            });
        }
    }
    found.sort_unstable_by(|a, b| a.itemset.cmp(&b.itemset));
    Ok(found)
}

/// Exhaustive rule search: for every frequent itemset of two or more
/// items, walks all proper non-empty submasks as the lhs and recounts
/// every marginal straight from the support table.
pub fn brute_force_rules(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<Vec<AssociationRule>, OracleError> {
    params.validate()?;
    let filtered_storage;
    let source = match params.ubiquitousness {
        Some(u) => {
            filtered_storage = db.filter_ubiquitous(u).0;
            &filtered_storage
        }
        None => db,
    };
    let table = SupportTable::build(source)?;
    let n = source.n() as u64;
    let min_count = min_support_count(n, params.support);
    let max_len = params.max_itemset_len.unwrap_or(usize::MAX);

    let mut rules = Vec::new();
    for mask in 1..table.subset_count() {
        let size = mask.count_ones() as usize;
        if size < 2 || size > max_len {
            continue;
        }
        let joint = table.count(mask);
        // joint == 0 passes a zero support threshold but can produce no
        // rule: confidence must stay strictly positive.
        if joint < min_count || joint == 0 {
            continue;
        }
        // Standard submask walk: every proper non-empty subset of `mask`.
        let mut lhs_mask = (mask - 1) & mask;
        while lhs_mask != 0 {
            let lhs_count = table.count(lhs_mask);
            if params.confidence.is_met_by(joint, lhs_count) {
                let rhs_mask = mask & !lhs_mask;
                let rhs_count = table.count(rhs_mask);
                let n_f = n as f64;
                let lift =
                    (joint as f64 / n_f) / ((lhs_count as f64 / n_f) * (rhs_count as f64 / n_f));
                rules.push(AssociationRule {
                    lhs: table.itemset(lhs_mask),
                    rhs: table.itemset(rhs_mask),
                    support_count: joint,
                    confidence: Fraction::new(joint, lhs_count),
                    lift,
                });
            }
            lhs_mask = (lhs_mask - 1) & mask;
        }
    }
    rules.sort_unstable_by(|a, b| (&a.lhs, &a.rhs).cmp(&(&b.lhs, &b.rhs)));
    Ok(rules)
}

/// Support count of every subset of a small universe, indexed by bitmask
/// over the database's dense item order.
struct SupportTable<'a> {
    db: &'a TransactionDatabase,
    counts: Vec<u64>,
}

impl<'a> SupportTable<'a> {
    fn build(db: &'a TransactionDatabase) -> Result<SupportTable<'a>, OracleError> {
        let items = db.items().len();
        if items > BRUTE_FORCE_ITEM_CAP {
            return Err(OracleError::UniverseTooLarge {
                items,
                cap: BRUTE_FORCE_ITEM_CAP,
            });
        }
        let masks: Vec<u32> = db
            .transactions()
            .iter()
            .map(|t| {
                t.items
                    .iter()
                    .map(|item| 1u32 << db.dense_index_of(item).expect("item in dictionary"))
                    .sum()
            })
            .collect();
        let mut counts = vec![0u64; 1 << items];
        for (mask, slot) in counts.iter_mut().enumerate() {
            let mask = mask as u32;
            *slot = masks.iter().filter(|&&t| t & mask == mask).count() as u64;
        }
        Ok(SupportTable { db, counts })
    }

    fn subset_count(&self) -> u32 {
        self.counts.len() as u32
    }

    fn count(&self, mask: u32) -> u64 {
        self.counts[mask as usize]
    }

    fn itemset(&self, mask: u32) -> ItemSet {
        ItemSet::from_items(
            (0..self.db.items().len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| self.db.items()[i])
                .collect(),
        )
    }
}

/// Inputs to the closed-form count of baskets lost to the ubiquitousness
/// filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UbiquityCountInputs {
    /// Frequent baskets of two or more non-ubiquitous items.
    pub frequent_baskets: u64,
    /// Frequent single non-ubiquitous items.
    pub frequent_singles: u64,
    /// Ubiquitous items (present in every transaction).
    pub full_support_items: u32,
}

/// Number of distinct baskets (two or more items) over `item_count` items:
/// 2^I minus the I singletons and the empty set.
pub fn possible_basket_count(item_count: u32) -> Result<u64, OracleError> {
    if item_count < 2 {
        return Ok(0);
    }
    if item_count >= 64 {
        return Err(OracleError::Overflow);
    }
    Ok((1u64 << item_count) - u64::from(item_count) - 1)
}

/// Expected number of frequent k-item sets among `item_count` independent
/// items of identical support: C(item_count, k) * support^k.
pub fn expected_level_count(item_count: u32, level: u32, support: f64) -> f64 {
    assert!(level <= item_count, "level larger than the universe");
    assert!((0.0..=1.0).contains(&support), "support must lie in [0, 1]");
    let mut binomial = 1.0f64;
    for i in 0..level {
        binomial *= f64::from(item_count - i) / f64::from(i + 1);
    }
    binomial * support.powi(level as i32)
}

/// How many frequent baskets exist once items of full support are added
/// back: every one of the 2^l subsets of the always-present items extends
/// every frequent basket or single, minus the singletons and the empty
/// set that the basket count excludes.
pub fn ubiquitous_basket_count(inputs: UbiquityCountInputs) -> Result<u64, OracleError> {
    let UbiquityCountInputs {
        frequent_baskets: x,
        frequent_singles: m,
        full_support_items: l,
    } = inputs;
    if l >= 64 {
        return Err(OracleError::Overflow);
    }
    let scale = 1u64 << l;
    x.checked_add(m)
        .and_then(|base| base.checked_add(1))
        .and_then(|base| base.checked_mul(scale))
        .and_then(|grown| grown.checked_sub(m))
        .and_then(|grown| grown.checked_sub(u64::from(l)))
        .and_then(|grown| grown.checked_sub(1))
        .ok_or(OracleError::Overflow)
}
