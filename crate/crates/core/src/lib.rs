//! Mining of correlated high-utility itemsets from quantitative transaction
//! databases.
//!
//! A pattern is reported when its total utility reaches the minimum utility
//! threshold and its Kulczynski correlation reaches `min_cor`. The miner runs
//! in one phase over revised utility-lists, with three toggleable pruning
//! strategies (see [`Strategies`]); [`oracle`] holds an exhaustive reference
//! used to check it.
//!
//! ```
//! use coupm::{fixtures, mine, MinUtil, MiningParams};
//!
//! let db = fixtures::running_example();
//! let (patterns, _stats) = mine(&db, &MiningParams::new(MinUtil::relative(0.2), 0.7)).unwrap();
//! assert_eq!(patterns.len(), 7);
//! ```

pub mod error;
pub mod fixtures;
pub mod measures;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod rulist;

pub use error::{MeasureError, ModelError, OracleError};
pub use miner::{mine, MiningStats};
pub use model::{
    Decimal, ItemId, ItemOrder, MinUtil, MiningParams, PatternResult, ProfitTable,
    QuantitativeDatabase, Strategies, Tid, Transaction, Utility,
};
pub use oracle::brute_force_mine;
pub use rulist::{RevisedUtilityList, RulEntry, TotalOrder};
