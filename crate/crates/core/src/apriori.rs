use std::collections::HashSet;

use rayon::prelude::*;

use crate::db::{ItemId, ItemSet, TransactionDatabase};
use crate::deadline::Deadline;
use crate::fraction::min_support_count;
use crate::params::{MiningParams, ParamsError};

/// An itemset that met the support threshold, with its occurrence count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemset {
    pub itemset: ItemSet,
    pub count: u64,
    /// Itemset size; level k of the search found the k-item sets.
    pub level: usize,
}

/// Candidate and survivor counts for one level of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSummary {
    pub level: usize,
    pub candidate_count: usize,
    pub frequent_count: usize,
}

#[derive(Debug, Clone)]
pub struct MiningOutcome {
    /// Every frequent itemset (singletons included), in lexicographic
    /// order of their original item ids.
    pub frequent: Vec<FrequentItemset>,
    pub levels: Vec<LevelSummary>,
    /// Items removed by the ubiquitousness filter before the search.
    pub ignored: ItemSet,
}

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error(transparent)]
    InvalidParams(#[from] ParamsError),
    #[error("mining stopped: time budget exhausted")]
    DeadlineExceeded,
}

/// Level-wise frequent itemset search. Ubiquitous items (support strictly
/// above the cutoff) are removed up front; support denominators still use
/// the original transaction count because filtering never drops a
/// transaction.
pub fn mine_frequent(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<MiningOutcome, MineError> {
    mine_frequent_deadline(db, params, Deadline::none())
}

pub fn mine_frequent_deadline(
    db: &TransactionDatabase,
    params: &MiningParams,
    deadline: Deadline,
) -> Result<MiningOutcome, MineError> {
    params.validate()?;

    let filtered_storage;
    let (source, ignored) = match params.ubiquitousness {
        Some(u) => {
            let (filtered, ignored) = db.filter_ubiquitous(u);
            filtered_storage = filtered;
            (&filtered_storage, ignored)
        }
        None => (db, ItemSet::empty()),
    };

    let n = source.n() as u64;
    let min_count = min_support_count(n, params.support);
    let distinct = source.items().len();

    // Level 1 straight from the census; dense ids keep the rest of the
    // search branch-light. Census order is ascending, hence sorted.
    let level1: Vec<(Vec<u32>, u64)> = source
        .census_counts()
        .iter()
        .enumerate()
        .filter(|&(_, &count)| count >= min_count)
        .map(|(dense, &count)| (vec![dense as u32], count))
        .collect();

    let mut levels = vec![LevelSummary {
        level: 1,
        candidate_count: distinct,
        frequent_count: level1.len(),
    }];

    // Project transactions onto the frequent singletons: an item outside
    // level 1 can never appear in a larger frequent set.
    let mut alive = vec![false; distinct];
    for (single, _) in &level1 {
        alive[single[0] as usize] = true;
    }
    let transactions: Vec<Vec<u32>> = source
        .transactions()
        .iter()
        .map(|t| {
            t.items
                .iter()
                .map(|item| source.dense_index_of(item).expect("item in dictionary") as u32)
                .filter(|&dense| alive[dense as usize])
                .collect()
        })
        .collect();

    let mut by_level = vec![level1];
    let mut level = 1;
    while params.max_itemset_len.is_none_or(|cap| level < cap) {
        if deadline.expired() {
            return Err(MineError::DeadlineExceeded);
        }
        let prev = by_level.last().unwrap();
        if prev.len() < 2 {
            break;
        }
        level += 1;

        let prev_sets: Vec<&[u32]> = prev.iter().map(|(set, _)| set.as_slice()).collect();
        let prev_lookup: HashSet<&[u32]> = prev_sets.iter().copied().collect();
        let mut candidates = join_sorted(&prev_sets);
        candidates.retain(|c| subsets_all_present(c, |s| prev_lookup.contains(s)));
        if candidates.is_empty() {
            break;
        }

        let candidate_count = candidates.len();
        let counts = count_pass(&transactions, &candidates, deadline)?;
        let survivors: Vec<(Vec<u32>, u64)> = candidates
            .into_iter()
            .zip(counts)
            .filter(|&(_, count)| count >= min_count)
            .collect();
        levels.push(LevelSummary {
            level,
            candidate_count,
            frequent_count: survivors.len(),
        });
        if survivors.is_empty() {
            break;
        }
        by_level.push(survivors);
    }

    let mut frequent: Vec<FrequentItemset> = by_level
        .into_iter()
        .flatten()
        .map(|(dense_set, count)| {
            // Dense ids are assigned in ascending item order, so the
            // mapped-back set is already sorted.
            let items = dense_set
                .iter()
                .map(|&d| source.items()[d as usize])
                .collect();
            FrequentItemset {
                level: dense_set.len(),
                itemset: ItemSet::from_sorted(items),
                count,
            }
        })
        .collect();
    frequent.sort_unstable_by(|a, b| a.itemset.cmp(&b.itemset));

    Ok(MiningOutcome {
        frequent,
        levels,
        ignored,
    })
}

/// Joins a lexicographically sorted level of k-item sets into the (k+1)
/// candidates whose two generators share their first k-1 items. The output
/// is again sorted and duplicate-free.
pub fn candidate_join(prev_level: &[ItemSet]) -> Vec<ItemSet> {
    let views: Vec<&[ItemId]> = prev_level.iter().map(|s| s.items()).collect();
    join_sorted(&views)
        .into_iter()
        .map(ItemSet::from_items)
        .collect()
}

/// Drops candidates with any (k-1)-subset missing from the previous
/// frequent level (downward closure: subsets of a frequent set are
/// frequent, so such candidates cannot qualify).
pub fn candidate_prune(candidates: Vec<ItemSet>, prev_frequent: &HashSet<ItemSet>) -> Vec<ItemSet> {
    candidates
        .into_iter()
        .filter(|c| {
            subsets_all_present(c.items(), |s| {
                prev_frequent.contains(&ItemSet::from_sorted(s.to_vec()))
            })
        })
        .collect()
}

/// Counts, in one pass over the database, how many transactions contain
/// each candidate. Results line up with the input order.
pub fn count_candidates(db: &TransactionDatabase, candidates: &[ItemSet]) -> Vec<u64> {
    let n = db.n() as u64;
    let mut dense: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut counts = vec![0u64; candidates.len()];
    for (at, candidate) in candidates.iter().enumerate() {
        if candidate.is_empty() {
            // Vacuous basket: every transaction contains it.
            counts[at] = n;
            continue;
        }
        let mapped: Option<Vec<u32>> = candidate
            .iter()
            .map(|item| db.dense_index_of(item).map(|d| d as u32))
            .collect();
        match mapped {
            Some(set) => dense.push((at, set)),
            None => counts[at] = 0, // contains an item absent from the db
        }
    }
    dense.sort_unstable_by(|(_, a), (_, b)| a.cmp(b));

    let transactions: Vec<Vec<u32>> = db
        .transactions()
        .iter()
        .map(|t| {
            t.items
                .iter()
                .map(|item| db.dense_index_of(item).expect("item in dictionary") as u32)
                .collect()
        })
        .collect();
    let sets: Vec<Vec<u32>> = dense.iter().map(|(_, set)| set.clone()).collect();
    let dense_counts = count_pass(&transactions, &sets, Deadline::none()).expect("no deadline set");
    for ((at, _), count) in dense.into_iter().zip(dense_counts) {
        counts[at] = count;
    }
    counts
}

/// Join over sorted borrowed sets; shared with the dense engine.
fn join_sorted<T: Copy + Ord>(prev: &[&[T]]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for i in 0..prev.len() {
        let prefix = &prev[i][..prev[i].len().saturating_sub(1)];
        for j in (i + 1)..prev.len() {
            if &prev[j][..prev[j].len() - 1] != prefix {
                break;
            }
            let mut joined = Vec::with_capacity(prev[i].len() + 1);
            joined.extend_from_slice(prev[i]);
            joined.push(*prev[j].last().expect("non-empty set"));
            out.push(joined);
        }
    }
    out
}

/// True iff every subset of `set` obtained by dropping one element
/// satisfies `present`.
fn subsets_all_present<T: Copy>(set: &[T], present: impl Fn(&[T]) -> bool) -> bool {
    let mut buf = Vec::with_capacity(set.len().saturating_sub(1));
    for skip in 0..set.len() {
        buf.clear();
        buf.extend_from_slice(&set[..skip]);
        buf.extend_from_slice(&set[skip + 1..]);
        if !present(&buf) {
            return false;
        }
    }
    true
}

/// One counting pass: transactions are walked in parallel chunks, each
/// chunk descending the sorted candidate list as a prefix tree.
fn count_pass(
    transactions: &[Vec<u32>],
    candidates: &[Vec<u32>],
    deadline: Deadline,
) -> Result<Vec<u64>, MineError> {
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    debug_assert!(candidates.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(candidates.iter().all(|c| !c.is_empty()));
    transactions
        .par_chunks(1024)
        .map(|chunk| {
            if deadline.expired() {
                return Err(MineError::DeadlineExceeded);
            }
            let mut counts = vec![0u64; candidates.len()];
            for t in chunk {
                count_into(candidates, 0, candidates.len(), 0, t, &mut counts);
            }
            Ok(counts)
        })
        .try_reduce(
            || vec![0u64; candidates.len()],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p;
                }
                Ok(acc)
            },
        )
}

/// Recursive descent over candidates[lo..hi], which all share a matched
/// prefix of `depth` items. Groups candidates by their item at `depth` and
/// advances through the transaction tail in lockstep; both sides are
/// sorted, so each level is a single merge. Candidates may have mixed
/// lengths: one ending exactly at this depth sorts first in its group.
fn count_into(
    candidates: &[Vec<u32>],
    lo: usize,
    hi: usize,
    depth: usize,
    tail: &[u32],
    counts: &mut [u64],
) {
    let mut i = lo;
    let mut t = 0usize;
    while i < hi {
        let item = candidates[i][depth];
        let mut group_end = i + 1;
        while group_end < hi && candidates[group_end][depth] == item {
            group_end += 1;
        }
        while t < tail.len() && tail[t] < item {
            t += 1;
        }
        if t == tail.len() {
            return; // groups only get larger; nothing left can match
        }
        if tail[t] == item {
            let mut sub = i;
            while sub < group_end && candidates[sub].len() == depth + 1 {
                counts[sub] += 1; // candidate fully matched
                sub += 1;
            }
            if sub < group_end {
                count_into(
                    candidates,
                    sub,
                    group_end,
                    depth + 1,
                    &tail[t + 1..],
                    counts,
                );
            }
        }
        i = group_end;
    }
}
