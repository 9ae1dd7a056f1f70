//! The five-transaction e-commerce example with items a..e mapped to ids 1..5.

use crate::model::{ItemId, ProfitTable, QuantitativeDatabase};

pub const A: ItemId = ItemId(1);
pub const B: ItemId = ItemId(2);
pub const C: ItemId = ItemId(3);
pub const D: ItemId = ItemId(4);
pub const E: ItemId = ItemId(5);

pub fn running_example_raw() -> Vec<Vec<(ItemId, u64)>> {
    vec![
        vec![(A, 3), (B, 1), (E, 2)],
        vec![(A, 2), (B, 3), (C, 1), (D, 1)],
        vec![(A, 1), (D, 3), (E, 2)],
        vec![(A, 1), (B, 5), (C, 2), (D, 1), (E, 1)],
        vec![(A, 2), (B, 3), (E, 3)],
    ]
}

pub fn running_example_profits() -> ProfitTable {
    [(A, 3), (B, 1), (C, 7), (D, 2), (E, 10)].into_iter().collect()
}

pub fn running_example() -> QuantitativeDatabase {
    QuantitativeDatabase::new(running_example_raw(), running_example_profits())
        .expect("running example is valid")
}

/// Builds an itemset from letters `a..e`.
pub fn items(letters: &str) -> Vec<ItemId> {
    letters
        .chars()
        .map(|c| ItemId(c as u32 - 'a' as u32 + 1))
        .collect()
}
