//! Shared fixtures for the benchmark targets.

use ubifim::datagen::{self, ExperimentPreset};
use ubifim::TransactionDatabase;

/// A stock dataset at its full 10,000-transaction size, seed 0.
pub fn preset_db(preset: ExperimentPreset) -> TransactionDatabase {
    datagen::generate(&datagen::experiment_spec(preset)).expect("preset specs are valid")
}
