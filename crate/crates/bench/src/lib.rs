//! Shared inputs for the strategy benchmarks.

use coupm::oracle::random_database;
use coupm::QuantitativeDatabase;

/// Dense synthetic corpus: every item joins every transaction with
/// probability `density`.
pub fn dense_corpus(n_items: usize, n_tx: usize, density: f64) -> QuantitativeDatabase {
    random_database(0xC0FFEE, n_items, n_tx, 5, 10, density).expect("valid corpus parameters")
}
