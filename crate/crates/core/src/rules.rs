use std::collections::HashMap;

use rayon::prelude::*;

use crate::apriori::FrequentItemset;
use crate::db::{DbError, ItemId, ItemSet, TransactionDatabase};
use crate::deadline::Deadline;
use crate::fraction::Fraction;

/// Association rule lhs -> rhs with the joint itemset's count, the exact
/// confidence count(lhs u rhs)/count(lhs), and the lift of the rule.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub lhs: ItemSet,
    pub rhs: ItemSet,
    pub support_count: u64,
    pub confidence: Fraction,
    pub lift: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RuleError {
    #[error("itemset {0} has no recorded support; rules need every subset's count")]
    MissingSupport(ItemSet),
    #[error("lift is undefined when a marginal count or the database is empty")]
    ZeroDenominator,
    #[error("itemset of {0} items cannot be split with 64-bit masks")]
    ItemsetTooWide(usize),
    #[error("rule generation stopped: time budget exhausted")]
    DeadlineExceeded,
    #[error("the reference item is part of the basket")]
    UbiquitousItemInBasket,
    #[error("lift ratio is undefined: the joint itemset never occurs")]
    JointNeverOccurs,
    #[error(transparent)]
    Db(#[from] DbError),
}

/// Derives all confident rules from the frequent itemsets. Every ordered
/// split of each itemset of size >= 2 is examined (2^k - 2 of them), and a
/// split survives when count(whole)/count(lhs) >= min_confidence, checked
/// by exact cross-multiplication. Itemsets with count zero (possible only
/// at zero support) yield no rules: confidence must stay in (0, 1].
pub fn generate_rules(
    frequent: &[FrequentItemset],
    n_transactions: u64,
    min_confidence: Fraction,
) -> Result<Vec<AssociationRule>, RuleError> {
    generate_rules_deadline(frequent, n_transactions, min_confidence, Deadline::none())
}

pub fn generate_rules_deadline(
    frequent: &[FrequentItemset],
    n_transactions: u64,
    min_confidence: Fraction,
    deadline: Deadline,
) -> Result<Vec<AssociationRule>, RuleError> {
    let supports: HashMap<&[ItemId], u64> = frequent
        .iter()
        .map(|f| (f.itemset.items(), f.count))
        .collect();
    let per_itemset: Vec<Vec<AssociationRule>> = frequent
        .par_iter()
        .filter(|f| f.itemset.len() >= 2 && f.count > 0)
        .map(|f| split_itemset(f, &supports, n_transactions, min_confidence, deadline))
        .collect::<Result<_, _>>()?;
    let mut rules: Vec<AssociationRule> = per_itemset.into_iter().flatten().collect();
    rules.sort_unstable_by(|a, b| (&a.lhs, &a.rhs).cmp(&(&b.lhs, &b.rhs)));
    Ok(rules)
}

fn split_itemset(
    f: &FrequentItemset,
    supports: &HashMap<&[ItemId], u64>,
    n: u64,
    min_confidence: Fraction,
    deadline: Deadline,
) -> Result<Vec<AssociationRule>, RuleError> {
    let items = f.itemset.items();
    let size = items.len();
    if size >= 64 {
        return Err(RuleError::ItemsetTooWide(size));
    }
    let joint = f.count;
    let mut out = Vec::new();
    let mut lhs = Vec::with_capacity(size - 1);
    let mut rhs = Vec::with_capacity(size - 1);
    let full: u64 = (1 << size) - 1;
    for mask in 1..full {
        if mask % 8192 == 0 && deadline.expired() {
            return Err(RuleError::DeadlineExceeded);
        }
        lhs.clear();
        rhs.clear();
        for (bit, &item) in items.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                lhs.push(item);
            } else {
                rhs.push(item);
            }
        }
        let &lhs_count = supports
            .get(lhs.as_slice())
            .ok_or_else(|| RuleError::MissingSupport(ItemSet::from_sorted(lhs.clone())))?;
        // Downward closure puts lhs_count >= joint >= 1 for consistent
        // input; a zero here would make the confidence denominator zero.
        if lhs_count == 0 {
            continue;
        }
        if !min_confidence.is_met_by(joint, lhs_count) {
            continue;
        }
        let &rhs_count = supports
            .get(rhs.as_slice())
            .ok_or_else(|| RuleError::MissingSupport(ItemSet::from_sorted(rhs.clone())))?;
        out.push(AssociationRule {
            lhs: ItemSet::from_sorted(lhs.clone()),
            rhs: ItemSet::from_sorted(rhs.clone()),
            support_count: joint,
            confidence: Fraction::new(joint, lhs_count),
            lift: rule_lift(joint, n, lhs_count, rhs_count)?,
        });
    }
    Ok(out)
}

/// Lift of a rule: support(lhs u rhs) / (support(lhs) * support(rhs)),
/// evaluated over fractions of the transaction count.
pub fn rule_lift(
    joint_count: u64,
    n_transactions: u64,
    lhs_count: u64,
    rhs_count: u64,
) -> Result<f64, RuleError> {
    if n_transactions == 0 || lhs_count == 0 || rhs_count == 0 {
        return Err(RuleError::ZeroDenominator);
    }
    let n = n_transactions as f64;
    let joint = joint_count as f64 / n;
    let lhs = lhs_count as f64 / n;
    let rhs = rhs_count as f64 / n;
    Ok(joint / (lhs * rhs))
}

/// Diagnostic for the ubiquitousness filter: how far a dropped item
/// `ubiquitous` is from independent of `basket`, as
/// (support(ubiquitous) * support(basket)) / support(basket u {ubiquitous}).
/// An item present in every transaction gives exactly 1.0: discarding it
/// loses no information.
pub fn lift_ratio_without_ubiquitous(
    db: &TransactionDatabase,
    ubiquitous: ItemId,
    basket: &ItemSet,
) -> Result<f64, RuleError> {
    if basket.contains(ubiquitous) {
        return Err(RuleError::UbiquitousItemInBasket);
    }
    let joint_count = db.support_count(&basket.union(&ItemSet::from_items(vec![ubiquitous])))?;
    if joint_count == 0 {
        return Err(RuleError::JointNeverOccurs);
    }
    let n = db.n() as f64;
    let u_support = db.census_of(ubiquitous) as f64 / n;
    let basket_support = db.support_count(basket)? as f64 / n;
    let joint_support = joint_count as f64 / n;
    Ok(u_support * basket_support / joint_support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apriori::mine_frequent;
    use crate::params::MiningParams;

    fn grocery_db() -> TransactionDatabase {
        TransactionDatabase::build(vec![vec![1, 5, 7], vec![2, 3, 5, 7], vec![4, 6]])
    }

    fn mined(db: &TransactionDatabase, s: Fraction) -> Vec<FrequentItemset> {
        mine_frequent(db, &MiningParams::new(s, Fraction::ZERO))
            .unwrap()
            .frequent
    }

    #[test]
    fn grocery_pair_yields_both_directions() {
        let db = grocery_db();
        let frequent = mined(&db, Fraction::new(2, 3));
        let rules = generate_rules(&frequent, db.n() as u64, Fraction::new(1, 2)).unwrap();
        // {5,7} has count 2; both 5 -> 7 and 7 -> 5 hold at confidence 2/2.
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].lhs, ItemSet::from_ids([5]));
        assert_eq!(rules[0].rhs, ItemSet::from_ids([7]));
        assert_eq!(rules[0].confidence, Fraction::ONE);
        assert_eq!(rules[0].support_count, 2);
        // support 2/3 over marginals (2/3)^2: lift = 3/2.
        assert!((rules[0].lift - 1.5).abs() < 1e-12);
        assert_eq!(rules[1].lhs, ItemSet::from_ids([7]));
    }

    #[test]
    fn confidence_threshold_is_exact() {
        // {1,2} in 2 of 3 item-1 transactions: confidence exactly 2/3.
        let db = TransactionDatabase::build(vec![vec![1, 2], vec![1, 2], vec![1], vec![3]]);
        let frequent = mined(&db, Fraction::ZERO);
        let at = |c: Fraction| generate_rules(&frequent, 4, c).unwrap();
        let rule_names = |rules: &[AssociationRule]| {
            rules
                .iter()
                .map(|r| (r.lhs.clone(), r.rhs.clone()))
                .collect::<Vec<_>>()
        };
        let exactly = at(Fraction::new(2, 3));
        assert!(rule_names(&exactly).contains(&(ItemSet::from_ids([1]), ItemSet::from_ids([2]))));
        let above = at(Fraction::new(667, 1000));
        assert!(!rule_names(&above).contains(&(ItemSet::from_ids([1]), ItemSet::from_ids([2]))));
    }

    #[test]
    fn split_count_is_two_to_the_k_minus_two() {
        // One transaction, three items, zero thresholds: every split of
        // {1,2,3} qualifies, plus both splits of each of the three pairs.
        let db = TransactionDatabase::build(vec![vec![1, 2, 3]]);
        let frequent = mined(&db, Fraction::ZERO);
        let rules = generate_rules(&frequent, 1, Fraction::ZERO).unwrap();
        assert_eq!(rules.len(), 6 + 3 * 2);
    }

    #[test]
    fn zero_count_itemsets_yield_no_rules() {
        // Zero support keeps itemsets that never occur; their splits
        // would carry confidence 0, which rules must not (confidence is
        // always in (0, 1]).
        let db = TransactionDatabase::build(vec![vec![1, 2], vec![3]]);
        let frequent = mined(&db, Fraction::ZERO);
        assert!(frequent.iter().any(|f| f.count == 0));
        let rules = generate_rules(&frequent, 2, Fraction::ZERO).unwrap();
        let keys: Vec<(&ItemSet, &ItemSet)> = rules.iter().map(|r| (&r.lhs, &r.rhs)).collect();
        let one = ItemSet::from_ids([1]);
        let two = ItemSet::from_ids([2]);
        assert_eq!(keys, vec![(&one, &two), (&two, &one)]);
        assert!(rules.iter().all(|r| !r.confidence.is_zero()));
    }

    #[test]
    fn missing_subset_support_is_an_error() {
        let orphan = [FrequentItemset {
            itemset: ItemSet::from_ids([1, 2]),
            count: 1,
            level: 2,
        }];
        assert!(matches!(
            generate_rules(&orphan, 2, Fraction::ZERO),
            Err(RuleError::MissingSupport(_))
        ));
    }

    #[test]
    fn rules_are_sorted_by_lhs_then_rhs() {
        let db = TransactionDatabase::build(vec![vec![1, 2, 3]; 2]);
        let frequent = mined(&db, Fraction::ONE);
        let rules = generate_rules(&frequent, 2, Fraction::ZERO).unwrap();
        let keys: Vec<(&ItemSet, &ItemSet)> = rules.iter().map(|r| (&r.lhs, &r.rhs)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn lift_matches_hand_computation() {
        // joint 1/4, lhs 2/4, rhs 2/4 -> lift = 1.
        assert_eq!(rule_lift(1, 4, 2, 2), Ok(1.0));
        // joint 2/4, marginals 2/4 each -> lift = 2.
        assert_eq!(rule_lift(2, 4, 2, 2), Ok(2.0));
        assert_eq!(rule_lift(1, 0, 1, 1), Err(RuleError::ZeroDenominator));
        assert_eq!(rule_lift(1, 4, 0, 2), Err(RuleError::ZeroDenominator));
    }

    #[test]
    fn fully_ubiquitous_item_has_unit_lift_ratio() {
        let db = TransactionDatabase::build(vec![vec![1, 9], vec![1, 9], vec![2, 9]]);
        let r = lift_ratio_without_ubiquitous(&db, ItemId(9), &ItemSet::from_ids([1])).unwrap();
        assert_eq!(r, 1.0, "an always-present item is exactly independent");
    }

    #[test]
    fn lift_ratio_rejects_degenerate_inputs() {
        let db = TransactionDatabase::build(vec![vec![1, 9], vec![2]]);
        assert_eq!(
            lift_ratio_without_ubiquitous(&db, ItemId(9), &ItemSet::from_ids([9])),
            Err(RuleError::UbiquitousItemInBasket)
        );
        assert_eq!(
            lift_ratio_without_ubiquitous(&db, ItemId(9), &ItemSet::from_ids([2])),
            Err(RuleError::JointNeverOccurs)
        );
        assert_eq!(
            lift_ratio_without_ubiquitous(&db, ItemId(9), &ItemSet::empty()),
            Err(RuleError::Db(DbError::EmptyBasket))
        );
    }
}
