use thiserror::Error;

use crate::model::{ItemId, Tid};

/// Errors raised while building a database or validating mining parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("item {0} has no entry in the profit table")]
    MissingProfit(ItemId),
    #[error("item {0} has a non-positive unit profit")]
    NonPositiveProfit(ItemId),
    #[error("transaction {tid}: item {item} has a non-positive quantity")]
    NonPositiveQuantity { tid: Tid, item: ItemId },
    #[error("database contains no transactions")]
    EmptyDatabase,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

/// Errors raised by the scalar measures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("unknown transaction {0}")]
    UnknownTid(Tid),
    #[error("item {item} does not occur in transaction {tid}")]
    ItemNotInTransaction { item: ItemId, tid: Tid },
    #[error("itemset is not contained in transaction {0}")]
    ItemsetNotContained(Tid),
    #[error("item {0} never occurs in the database")]
    ZeroSupportMember(ItemId),
}

/// Errors raised by the brute-force reference miner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("item universe has {size} items, enumeration cap is {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
