//! Domain types: items, transactions, the quantitative database, mining
//! parameters and mined patterns.
//!
//! All money values are exact integers. Only the Kulc correlation is carried
//! as a float.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;

/// Transaction identifier, 1-based in input order.
pub type Tid = u32;

/// Exact money amount in minimal currency units.
pub type Utility = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ItemId {
    fn from(id: u32) -> Self {
        ItemId(id)
    }
}

/// Unit profit per item.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfitTable {
    entries: BTreeMap<ItemId, Utility>,
}

impl ProfitTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the unit profit of `item`, replacing any previous entry.
    pub fn insert(&mut self, item: ItemId, profit: Utility) {
        self.entries.insert(item, profit);
    }

    pub fn get(&self, item: ItemId) -> Option<Utility> {
        self.entries.get(&item).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ItemId, Utility)> + '_ {
        self.entries.iter().map(|(&i, &p)| (i, p))
    }
}

impl FromIterator<(ItemId, Utility)> for ProfitTable {
    fn from_iter<T: IntoIterator<Item = (ItemId, Utility)>>(iter: T) -> Self {
        ProfitTable {
            entries: iter.into_iter().collect(),
        }
    }
}

/// One purchase record: distinct items with their quantities, sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    tid: Tid,
    items: Vec<(ItemId, u64)>,
    utility: Utility,
}

impl Transaction {
    pub fn tid(&self) -> Tid {
        self.tid
    }

    /// `(item, quantity)` pairs in ascending item order.
    pub fn items(&self) -> &[(ItemId, u64)] {
        &self.items
    }

    pub fn quantity(&self, item: ItemId) -> Option<u64> {
        self.items
            .binary_search_by_key(&item, |&(i, _)| i)
            .ok()
            .map(|pos| self.items[pos].1)
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.quantity(item).is_some()
    }

    /// Transaction utility `tu(T)`.
    pub fn utility(&self) -> Utility {
        self.utility
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Immutable quantitative transaction database with its profit table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantitativeDatabase {
    transactions: Vec<Transaction>,
    profits: ProfitTable,
    total_utility: Utility,
}

impl QuantitativeDatabase {
    /// Builds a database from raw `(item, quantity)` lists. Tids are assigned
    /// 1-based in input order; repeated items within one transaction are
    /// merged by summing their quantities.
    pub fn new<T>(raw: T, profits: ProfitTable) -> Result<Self, ModelError>
    where
        T: IntoIterator,
        T::Item: IntoIterator<Item = (ItemId, u64)>,
    {
        for (item, profit) in profits.iter() {
            if profit == 0 {
                return Err(ModelError::NonPositiveProfit(item));
            }
        }

        let mut transactions = Vec::new();
        let mut total_utility: Utility = 0;
        for (idx, raw_tx) in raw.into_iter().enumerate() {
            let tid = Tid::try_from(idx + 1)
                .map_err(|_| ModelError::InvalidParams("too many transactions".into()))?;
            let mut merged: BTreeMap<ItemId, u64> = BTreeMap::new();
            for (item, qty) in raw_tx {
                if qty == 0 {
                    return Err(ModelError::NonPositiveQuantity { tid, item });
                }
                if profits.get(item).is_none() {
                    return Err(ModelError::MissingProfit(item));
                }
                *merged.entry(item).or_insert(0) += qty;
            }
            let items: Vec<(ItemId, u64)> = merged.into_iter().collect();
            let utility = items
                .iter()
                .map(|&(item, qty)| profits.get(item).unwrap() * qty)
                .sum();
            total_utility += utility;
            transactions.push(Transaction {
                tid,
                items,
                utility,
            });
        }
        if transactions.is_empty() {
            return Err(ModelError::EmptyDatabase);
        }

        Ok(QuantitativeDatabase {
            transactions,
            profits,
            total_utility,
        })
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn transaction(&self, tid: Tid) -> Option<&Transaction> {
        // tids are 1..=n in order
        let idx = usize::try_from(tid).ok()?.checked_sub(1)?;
        self.transactions.get(idx)
    }

    pub fn profits(&self) -> &ProfitTable {
        &self.profits
    }

    pub fn profit(&self, item: ItemId) -> Option<Utility> {
        self.profits.get(item)
    }

    /// Total utility `TU` of the database.
    pub fn total_utility(&self) -> Utility {
        self.total_utility
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Distinct items occurring in at least one transaction, ascending.
    pub fn items(&self) -> Vec<ItemId> {
        let mut items: Vec<ItemId> = self
            .transactions
            .iter()
            .flat_map(|t| t.items.iter().map(|&(i, _)| i))
            .collect();
        items.sort_unstable();
        items.dedup();
        items
    }
}

/// Non-negative exact decimal `num / den`, parsed from text such as `"0.25"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimal {
    num: u128,
    den: u128,
}

impl Decimal {
    pub fn from_ratio(num: u64, den: u64) -> Option<Self> {
        (den != 0).then_some(Decimal {
            num: num as u128,
            den: den as u128,
        })
    }

    /// Converts through the shortest decimal representation of `value`, so
    /// `0.2` becomes exactly 2/10.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() || value < 0.0 {
            return None;
        }
        format!("{value}").parse().ok()
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn scaled(self, factor: u128) -> Option<Self> {
        Some(Decimal {
            num: self.num,
            den: self.den.checked_mul(factor)?,
        })
    }

    fn le_one(self) -> bool {
        self.num <= self.den
    }

    /// Smallest integer `n` with `n >= self * scale`.
    fn ceil_mul(self, scale: u64) -> u64 {
        let prod = self.num.saturating_mul(scale as u128);
        let q = prod.div_ceil(self.den);
        u64::try_from(q).unwrap_or(u64::MAX)
    }
}

impl FromStr for Decimal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_ok(int_part)
            || !digits_ok(frac_part)
            || frac_part.len() > 30
        {
            return Err(format!("`{s}` is not a non-negative decimal number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let num: u128 = digits
            .parse()
            .map_err(|_| format!("`{s}` is out of range"))?;
        let den = 10u128.pow(frac_part.len() as u32);
        Ok(Decimal { num, den })
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Minimum utility threshold, either relative to `TU` or an absolute amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinUtil {
    Relative(Decimal),
    Absolute(Decimal),
}

impl MinUtil {
    /// Fraction of the total utility, e.g. `MinUtil::relative(0.2)`.
    pub fn relative(fraction: f64) -> Self {
        MinUtil::Relative(Decimal::from_f64(fraction).expect("fraction must be finite and >= 0"))
    }

    pub fn absolute(amount: Utility) -> Self {
        MinUtil::Absolute(Decimal::from_ratio(amount, 1).unwrap())
    }

    /// Absolute threshold in money units: the least integer utility that
    /// satisfies `u >= minUtil x TU` (or `u >= amount`).
    pub fn resolve(&self, total_utility: Utility) -> Utility {
        match *self {
            MinUtil::Relative(frac) => frac.ceil_mul(total_utility),
            MinUtil::Absolute(amount) => amount.ceil_mul(1),
        }
    }
}

impl FromStr for MinUtil {
    type Err = String;

    /// `"20%"` is relative, `"0.2%"` likewise; anything else is absolute money.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.strip_suffix('%') {
            Some(pct) => {
                let frac = pct
                    .parse::<Decimal>()?
                    .scaled(100)
                    .ok_or_else(|| format!("`{s}` is out of range"))?;
                if !frac.le_one() {
                    return Err(format!("relative min-util `{s}` exceeds 100%"));
                }
                Ok(MinUtil::Relative(frac))
            }
            None => Ok(MinUtil::Absolute(s.parse()?)),
        }
    }
}

/// Pruning strategies. The utility upper bound (UBU) is always applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategies {
    /// Skip extensions of nodes whose Kulc is below `min_cor`.
    pub spk: bool,
    /// Abort list joins early once the look-ahead bound drops below the threshold.
    pub la: bool,
}

impl Strategies {
    pub const UBU: Strategies = Strategies { spk: false, la: false };
    pub const SORTED: Strategies = Strategies { spk: true, la: false };
    pub const LA: Strategies = Strategies { spk: false, la: true };
    pub const SORTED_LA: Strategies = Strategies { spk: true, la: true };

    pub const ALL: [Strategies; 4] = [Self::UBU, Self::SORTED, Self::LA, Self::SORTED_LA];

    pub fn name(&self) -> &'static str {
        match (self.spk, self.la) {
            (false, false) => "ubu",
            (true, false) => "sorted",
            (false, true) => "la",
            (true, true) => "sorted+la",
        }
    }
}

impl Default for Strategies {
    fn default() -> Self {
        Self::SORTED_LA
    }
}

impl FromStr for Strategies {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ubu" => Ok(Self::UBU),
            "sorted" => Ok(Self::SORTED),
            "la" => Ok(Self::LA),
            "sorted+la" => Ok(Self::SORTED_LA),
            other => Err(format!(
                "unknown strategy set `{other}` (expected ubu, sorted, la or sorted+la)"
            )),
        }
    }
}

/// Processing order of items in the enumeration tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ItemOrder {
    /// Ascending support, ties by ascending id. Required by SPK.
    #[default]
    SupportAscending,
    /// Ascending item id.
    Lexicographic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningParams {
    pub min_util: MinUtil,
    pub min_cor: f64,
    pub strategies: Strategies,
    pub order: ItemOrder,
}

impl MiningParams {
    pub fn new(min_util: MinUtil, min_cor: f64) -> Self {
        MiningParams {
            min_util,
            min_cor,
            strategies: Strategies::default(),
            order: ItemOrder::default(),
        }
    }

    pub fn with_strategies(mut self, strategies: Strategies) -> Self {
        self.strategies = strategies;
        self
    }

    pub fn with_order(mut self, order: ItemOrder) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(0.0..=1.0).contains(&self.min_cor) {
            return Err(ModelError::InvalidParams(format!(
                "min-cor must lie in [0, 1], got {}",
                self.min_cor
            )));
        }
        if let MinUtil::Relative(frac) = self.min_util {
            if !frac.le_one() {
                return Err(ModelError::InvalidParams(format!(
                    "relative min-util must lie in [0, 1], got {frac}"
                )));
            }
        }
        if self.strategies.spk && self.order != ItemOrder::SupportAscending {
            return Err(ModelError::InvalidParams(
                "the Kulc pruning strategy requires support-ascending item order".into(),
            ));
        }
        Ok(())
    }
}

/// A mined correlated high-utility itemset.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternResult {
    /// Members in ascending id order.
    pub itemset: Vec<ItemId>,
    pub utility: Utility,
    pub support: u32,
    pub kulc: f64,
}

impl PatternResult {
    /// Canonical order: ascending size, then lexicographic by item id.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.itemset
            .len()
            .cmp(&other.itemset.len())
            .then_with(|| self.itemset.cmp(&other.itemset))
    }
}

/// Sorts patterns into canonical order.
pub fn sort_canonical(results: &mut [PatternResult]) {
    results.sort_by(PatternResult::canonical_cmp);
}
