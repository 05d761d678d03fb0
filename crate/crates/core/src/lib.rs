//! Frequent item-set mining with a ubiquitousness filter: items whose
//! support strictly exceeds a cutoff are discarded before the level-wise
//! search, which shrinks the rule explosion that near-universal items
//! cause while leaving every support denominator untouched.

pub mod apriori;
pub mod datagen;
pub mod db;
pub mod deadline;
pub mod entropy;
pub mod fimi;
pub mod fraction;
pub mod oracle;
pub mod params;
pub mod rules;

pub use apriori::{mine_frequent, FrequentItemset, LevelSummary, MiningOutcome};
pub use db::{ItemId, ItemSet, Transaction, TransactionDatabase};
pub use deadline::Deadline;
pub use fimi::MiningReport;
pub use fraction::{min_support_count, Fraction};
pub use params::MiningParams;
pub use rules::{generate_rules, AssociationRule};
