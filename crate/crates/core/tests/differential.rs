//! Differential and property tests: the level-wise engine against the
//! exhaustive oracle, plus the structural invariants every mining run
//! must satisfy.

use std::collections::BTreeSet;

use proptest::prelude::*;

use ubifim::apriori::{count_candidates, mine_frequent};
use ubifim::fimi::{parse_fimi, parse_report, write_fimi, write_report, MiningReport};
use ubifim::oracle::{brute_force_frequent, brute_force_rules};
use ubifim::rules::{generate_rules, lift_ratio_without_ubiquitous};
use ubifim::{Fraction, ItemSet, MiningParams, TransactionDatabase};

fn arb_rows(
    max_item: u32,
    max_row: usize,
    max_rows: usize,
) -> impl Strategy<Value = Vec<BTreeSet<u32>>> {
    prop::collection::vec(
        prop::collection::btree_set(1..=max_item, 0..=max_row),
        1..=max_rows,
    )
}

fn arb_db() -> impl Strategy<Value = TransactionDatabase> {
    arb_rows(10, 6, 40).prop_map(TransactionDatabase::build)
}

/// Fractions num/den with den in 1..=max_den, value in [0, 1].
fn arb_unit_fraction(max_den: u64) -> impl Strategy<Value = Fraction> {
    (1..=max_den).prop_flat_map(|den| (0..=den).prop_map(move |num| Fraction::new(num, den)))
}

fn arb_params() -> impl Strategy<Value = MiningParams> {
    (
        arb_unit_fraction(8),
        arb_unit_fraction(8),
        arb_unit_fraction(8),
        any::<bool>(),
        prop::option::of(1usize..=4),
    )
        .prop_map(|(s, c, u, use_u, max_len)| {
            let mut params = MiningParams::new(s, c);
            if use_u && !u.is_zero() && s <= u {
                params = params.with_ubiquitousness(u);
            }
            if let Some(len) = max_len {
                params = params.with_max_itemset_len(len);
            }
            params
        })
}

proptest! {
    /// The engine and the exhaustive search agree exactly: same itemsets,
    /// same counts, and the same rules with identical confidence and lift.
    #[test]
    fn engine_matches_oracle(db in arb_db(), params in arb_params()) {
        let mined = mine_frequent(&db, &params).unwrap();
        let expected = brute_force_frequent(&db, &params).unwrap();
        prop_assert_eq!(&mined.frequent, &expected);

        let rules = generate_rules(&mined.frequent, db.n() as u64, params.confidence).unwrap();
        let expected_rules = brute_force_rules(&db, &params).unwrap();
        prop_assert_eq!(rules, expected_rules);
    }

    /// Every subset of a reported itemset is reported, with a count at
    /// least as large, and no reported itemset touches an ignored item.
    #[test]
    fn output_is_downward_closed_and_filter_sound(db in arb_db(), params in arb_params()) {
        let mined = mine_frequent(&db, &params).unwrap();
        let counts: std::collections::HashMap<&ItemSet, u64> =
            mined.frequent.iter().map(|f| (&f.itemset, f.count)).collect();
        for f in &mined.frequent {
            prop_assert!(f.itemset.iter().all(|i| !mined.ignored.contains(i)));
            prop_assert_eq!(f.level, f.itemset.len());
            let items = f.itemset.items();
            for skip in 0..items.len() {
                if items.len() == 1 {
                    continue;
                }
                let mut subset = items.to_vec();
                subset.remove(skip);
                let subset = ItemSet::from_items(subset);
                match counts.get(&subset) {
                    Some(&sub_count) => prop_assert!(sub_count >= f.count),
                    None => prop_assert!(false, "missing subset {} of {}", subset, f.itemset),
                }
            }
        }
    }

    /// Filtering never drops transactions, and it removes exactly the
    /// census entries strictly above the cutoff.
    #[test]
    fn filter_preserves_n_and_is_strict(db in arb_db(), u in arb_unit_fraction(8)) {
        prop_assume!(!u.is_zero());
        let n = db.n() as u64;
        let (filtered, ignored) = db.filter_ubiquitous(u);
        prop_assert_eq!(filtered.n() as u64, n);
        for &item in db.items() {
            let count = db.census_of(item);
            let dropped = ignored.contains(item);
            prop_assert_eq!(dropped, u.is_exceeded_by(count, n), "item {}", item);
            if dropped {
                prop_assert_eq!(filtered.census_of(item), 0);
            } else {
                prop_assert_eq!(filtered.census_of(item), count);
            }
        }
    }

    /// Batch counting equals the one-basket-at-a-time definition, for
    /// candidates of mixed sizes including items absent from the db.
    #[test]
    fn count_candidates_matches_definition(
        db in arb_db(),
        raw in prop::collection::vec(prop::collection::btree_set(1u32..=13, 0..=4), 0..=16),
    ) {
        let candidates: Vec<ItemSet> = raw.into_iter().map(ItemSet::from_ids).collect();
        let counts = count_candidates(&db, &candidates);
        prop_assert_eq!(counts.len(), candidates.len());
        for (candidate, &count) in candidates.iter().zip(&counts) {
            if candidate.is_empty() {
                prop_assert_eq!(count, db.n() as u64);
            } else {
                prop_assert_eq!(count, db.support_count(candidate).unwrap());
            }
        }
    }

    /// FIMI text survives a write/parse cycle when every transaction is
    /// representable (non-empty).
    #[test]
    fn fimi_round_trip(rows in arb_rows(30, 8, 30)) {
        let rows: Vec<BTreeSet<u32>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        prop_assume!(!rows.is_empty());
        let db = TransactionDatabase::build(rows);
        let mut text = Vec::new();
        write_fimi(&db, &mut text).unwrap();
        let reparsed = parse_fimi(&text[..]).unwrap();
        prop_assert_eq!(reparsed.transactions(), db.transactions());
        prop_assert_eq!(reparsed.items(), db.items());
    }

    /// A mining report survives a write/parse cycle bit-exactly,
    /// including the float timing field.
    #[test]
    fn report_round_trip(db in arb_db(), params in arb_params(), wall_ms in 0.0f64..1e6) {
        let mined = mine_frequent(&db, &params).unwrap();
        let report = MiningReport::from_run(params, db.n() as u64, &mined, 17, wall_ms);
        let mut text = Vec::new();
        write_report(&report, &mut text).unwrap();
        let back = parse_report(&text[..]).unwrap();
        prop_assert_eq!(back, report);
    }

    /// The filter diagnostic equals the ratio of basket lifts computed
    /// from first principles: support(B)/prod(items) with and without the
    /// extra item.
    #[test]
    fn lift_ratio_matches_first_principles(
        db in arb_db(),
        pick_txn in any::<prop::sample::Index>(),
        pick_item in any::<prop::sample::Index>(),
    ) {
        // Split one real transaction into (u_item, basket) so the joint
        // support is at least 1 by construction.
        let candidates: Vec<&ItemSet> = db
            .transactions()
            .iter()
            .map(|t| &t.items)
            .filter(|items| items.len() >= 2)
            .collect();
        prop_assume!(!candidates.is_empty());
        let source = candidates[pick_txn.index(candidates.len())];
        let u_item = source.items()[pick_item.index(source.len())];
        let basket = source.difference(&ItemSet::from_items(vec![u_item]));
        let joint = db.support_count(&basket.union(&ItemSet::from_items(vec![u_item]))).unwrap();
        prop_assert!(joint > 0);

        let n = db.n() as f64;
        let basket_lift = |set: &ItemSet| -> f64 {
            let marginals: f64 = set
                .iter()
                .map(|i| db.census_of(i) as f64 / n)
                .product();
            (db.support_count(set).unwrap() as f64 / n) / marginals
        };
        let with_u = basket_lift(&basket.union(&ItemSet::from_items(vec![u_item])));
        let without_u = basket_lift(&basket);
        let expected = without_u / with_u;
        let got = lift_ratio_without_ubiquitous(&db, u_item, &basket).unwrap();
        prop_assert!((got - expected).abs() <= 1e-9, "{got} vs {expected}");
    }
}
