use std::collections::HashMap;
use std::fmt;

use crate::fraction::Fraction;

/// Item identifier as it appears in the input data (FIMI convention:
/// non-negative integers, not necessarily contiguous).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical itemset: sorted, duplicate-free. The derived `Ord` is the
/// lexicographic order used everywhere results are reported.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSet(Vec<ItemId>);

impl ItemSet {
    pub fn empty() -> ItemSet {
        ItemSet(Vec::new())
    }

    pub fn singleton(id: u32) -> ItemSet {
        ItemSet(vec![ItemId(id)])
    }

    /// Canonicalizes arbitrary raw ids: sorts and drops duplicates.
    pub fn from_ids(ids: impl IntoIterator<Item = u32>) -> ItemSet {
        ItemSet::from_items(ids.into_iter().map(ItemId).collect())
    }

    pub fn from_items(mut items: Vec<ItemId>) -> ItemSet {
        items.sort_unstable();
        items.dedup();
        ItemSet(items)
    }

    /// Wraps a vector already known to be sorted and duplicate-free.
    pub(crate) fn from_sorted(items: Vec<ItemId>) -> ItemSet {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        ItemSet(items)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// Merge walk over the two sorted representations.
    pub fn is_subset_of(&self, other: &ItemSet) -> bool {
        let mut candidates = other.items().iter();
        'outer: for item in &self.0 {
            for x in candidates.by_ref() {
                if x == item {
                    continue 'outer;
                }
                if x > item {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        let mut merged = Vec::with_capacity(self.len() + other.len());
        merged.extend_from_slice(&self.0);
        merged.extend_from_slice(&other.0);
        ItemSet::from_items(merged)
    }

    /// Items of `self` not present in `other`.
    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        ItemSet::from_sorted(self.iter().filter(|&i| !other.contains(i)).collect())
    }
}

impl fmt::Display for ItemSet {
    /// Space-joined ids, matching one line of the FIMI text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

/// One transaction. Empty baskets are legal: the ubiquitousness filter can
/// empty a transaction out without removing it from the database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub items: ItemSet,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DbError {
    #[error("support count of the empty basket is undefined")]
    EmptyBasket,
}

/// Immutable transaction database with a per-item occurrence census.
#[derive(Debug, Clone)]
pub struct TransactionDatabase {
    transactions: Vec<Transaction>,
    /// Sorted distinct items; index into this vector is the dense id.
    items: Vec<ItemId>,
    /// Occurrence counts, indexed densely in step with `items`.
    census: Vec<u64>,
}

impl TransactionDatabase {
    /// Builds a database from raw rows. Each row is deduplicated and
    /// sorted; empty rows are kept as empty transactions and count toward
    /// the database size.
    pub fn build<R, I>(rows: R) -> TransactionDatabase
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = u32>,
    {
        TransactionDatabase::from_itemsets(rows.into_iter().map(ItemSet::from_ids).collect())
    }

    pub fn from_itemsets(itemsets: Vec<ItemSet>) -> TransactionDatabase {
        let mut counts: HashMap<ItemId, u64> = HashMap::new();
        for set in &itemsets {
            for item in set.iter() {
                *counts.entry(item).or_insert(0) += 1;
            }
        }
        let mut pairs: Vec<(ItemId, u64)> = counts.into_iter().collect();
        pairs.sort_unstable_by_key(|&(item, _)| item);
        let (items, census) = pairs.into_iter().unzip();
        TransactionDatabase {
            transactions: itemsets
                .into_iter()
                .map(|items| Transaction { items })
                .collect(),
            items,
            census,
        }
    }

    /// Number of transactions, the denominator of every support value.
    pub fn n(&self) -> usize {
        self.transactions.len()
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    /// Sorted distinct items present in the database.
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    /// Dense index of an item in `items()`, if present.
    pub fn dense_index_of(&self, item: ItemId) -> Option<usize> {
        self.items.binary_search(&item).ok()
    }

    /// Occurrence count of a single item (zero if absent).
    pub fn census_of(&self, item: ItemId) -> u64 {
        self.dense_index_of(item).map_or(0, |i| self.census[i])
    }

    pub(crate) fn census_counts(&self) -> &[u64] {
        &self.census
    }

    /// Number of transactions containing every item of `basket`.
    pub fn support_count(&self, basket: &ItemSet) -> Result<u64, DbError> {
        if basket.is_empty() {
            return Err(DbError::EmptyBasket);
        }
        Ok(self
            .transactions
            .iter()
            .filter(|t| basket.is_subset_of(&t.items))
            .count() as u64)
    }

    /// Splits off items whose support strictly exceeds `ubiquitousness`.
    /// Returns the filtered database and the ignored items. Transactions
    /// emptied by the filter stay in place, so the transaction count (and
    /// with it every support denominator) is unchanged.
    pub fn filter_ubiquitous(&self, ubiquitousness: Fraction) -> (TransactionDatabase, ItemSet) {
        let n = self.n() as u64;
        let ignored = ItemSet::from_sorted(
            self.items
                .iter()
                .zip(&self.census)
                .filter(|&(_, &count)| ubiquitousness.is_exceeded_by(count, n))
                .map(|(&item, _)| item)
                .collect(),
        );
        let kept = self
            .transactions
            .iter()
            .map(|t| t.items.difference(&ignored))
            .collect();
        (TransactionDatabase::from_itemsets(kept), ignored)
    }
}
