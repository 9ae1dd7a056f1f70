//! Scalar measures over a quantitative database: utilities, TWU, support and
//! the Kulczynski correlation.
//!
//! These are direct, per-call computations. The miner never calls them on its
//! hot path; they back the brute-force oracle and the tests.

use std::collections::HashMap;

use crate::error::MeasureError;
use crate::model::{ItemId, QuantitativeDatabase, Tid, Transaction, Utility};

/// Ascending tids of the transactions containing one item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tidset {
    pub item: ItemId,
    pub tids: Vec<Tid>,
}

impl Tidset {
    pub fn support(&self) -> u32 {
        self.tids.len() as u32
    }
}

/// Tidsets of every item in a database, built in one scan.
#[derive(Debug, Clone, Default)]
pub struct Tidsets {
    by_item: HashMap<ItemId, Tidset>,
}

impl Tidsets {
    pub fn build(db: &QuantitativeDatabase) -> Self {
        let mut by_item: HashMap<ItemId, Tidset> = HashMap::new();
        for tx in db.transactions() {
            for &(item, _) in tx.items() {
                by_item
                    .entry(item)
                    .or_insert_with(|| Tidset {
                        item,
                        tids: Vec::new(),
                    })
                    .tids
                    .push(tx.tid());
            }
        }
        Tidsets { by_item }
    }

    pub fn get(&self, item: ItemId) -> Option<&Tidset> {
        self.by_item.get(&item)
    }

    /// Support of a single item; 0 when it never occurs.
    pub fn item_support(&self, item: ItemId) -> u32 {
        self.get(item).map_or(0, Tidset::support)
    }

    /// Tids containing every member of `itemset`, by pairwise intersection.
    /// The empty itemset is contained in no tidset here and yields `None`.
    pub fn intersect(&self, itemset: &[ItemId]) -> Option<Vec<Tid>> {
        let (first, rest) = itemset.split_first()?;
        let mut acc = self.get(*first).map(|t| t.tids.clone()).unwrap_or_default();
        for item in rest {
            let other = self.get(*item).map(|t| t.tids.as_slice()).unwrap_or(&[]);
            acc = intersect_sorted(&acc, other);
            if acc.is_empty() {
                break;
            }
        }
        Some(acc)
    }

    pub fn support(&self, itemset: &[ItemId]) -> u32 {
        self.intersect(itemset).map_or(0, |t| t.len() as u32)
    }

    pub fn len(&self) -> usize {
        self.by_item.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_item.is_empty()
    }
}

fn intersect_sorted(a: &[Tid], b: &[Tid]) -> Vec<Tid> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn tx(db: &QuantitativeDatabase, tid: Tid) -> Result<&Transaction, MeasureError> {
    db.transaction(tid).ok_or(MeasureError::UnknownTid(tid))
}

fn contains_all(tx: &Transaction, itemset: &[ItemId]) -> bool {
    itemset.iter().all(|&i| tx.contains(i))
}

/// `u(i, T) = pr(i) * q(i, T)`.
pub fn item_utility(db: &QuantitativeDatabase, item: ItemId, tid: Tid) -> Result<Utility, MeasureError> {
    let t = tx(db, tid)?;
    let qty = t
        .quantity(item)
        .ok_or(MeasureError::ItemNotInTransaction { item, tid })?;
    // every item in a built database has a profit
    Ok(db.profit(item).unwrap_or(0) * qty)
}

/// `u(X, T)`, the summed utility of the members of `itemset` in one transaction.
pub fn itemset_utility_in_tx(
    db: &QuantitativeDatabase,
    itemset: &[ItemId],
    tid: Tid,
) -> Result<Utility, MeasureError> {
    let t = tx(db, tid)?;
    let mut total = 0;
    for &item in itemset {
        let qty = t
            .quantity(item)
            .ok_or(MeasureError::ItemsetNotContained(tid))?;
        total += db.profit(item).unwrap_or(0) * qty;
    }
    Ok(total)
}

/// `u(X)` over the whole database; 0 when `itemset` occurs nowhere.
pub fn itemset_utility(db: &QuantitativeDatabase, itemset: &[ItemId]) -> Utility {
    db.transactions()
        .iter()
        .filter(|t| contains_all(t, itemset))
        .map(|t| {
            itemset
                .iter()
                .map(|&i| db.profit(i).unwrap_or(0) * t.quantity(i).unwrap_or(0))
                .sum::<Utility>()
        })
        .sum()
}

/// `tu(T)`.
pub fn transaction_utility(db: &QuantitativeDatabase, tid: Tid) -> Result<Utility, MeasureError> {
    Ok(tx(db, tid)?.utility())
}

/// Transaction-weighted utilization: summed `tu` of transactions containing `itemset`.
pub fn twu(db: &QuantitativeDatabase, itemset: &[ItemId]) -> Utility {
    db.transactions()
        .iter()
        .filter(|t| contains_all(t, itemset))
        .map(Transaction::utility)
        .sum()
}

/// Number of transactions containing every member of `itemset`.
pub fn support(db: &QuantitativeDatabase, itemset: &[ItemId]) -> u32 {
    if itemset.is_empty() {
        return db.len() as u32;
    }
    Tidsets::build(db).support(itemset)
}

/// Kulc from the itemset support and the supports of its members.
///
/// Terms are summed in ascending member-support order so the result does not
/// depend on the order members are listed in. Callers must ensure every
/// member support is non-zero.
pub fn kulc_from_supports<I>(sup: u32, member_sups: I) -> f64
where
    I: IntoIterator<Item = u32>,
{
    let mut sups: Vec<u32> = member_sups.into_iter().collect();
    if sups.is_empty() {
        return 0.0;
    }
    sups.sort_unstable();
    let s = sup as f64;
    let total: f64 = sups.iter().map(|&si| s / si as f64).sum();
    total / sups.len() as f64
}

/// Kulc of `itemset` given its support, with member supports taken over the
/// full database.
pub fn kulc_with(tidsets: &Tidsets, itemset: &[ItemId], sup: u32) -> Result<f64, MeasureError> {
    let mut member_sups = Vec::with_capacity(itemset.len());
    for &item in itemset {
        match tidsets.item_support(item) {
            0 => return Err(MeasureError::ZeroSupportMember(item)),
            s => member_sups.push(s),
        }
    }
    Ok(kulc_from_supports(sup, member_sups))
}

pub fn kulc(db: &QuantitativeDatabase, itemset: &[ItemId], sup: u32) -> Result<f64, MeasureError> {
    kulc_with(&Tidsets::build(db), itemset, sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn item_utilities() {
        let db = running_example();
        assert_eq!(item_utility(&db, E, 3), Ok(20));
        assert_eq!(item_utility(&db, B, 1), Ok(1));
        assert_eq!(item_utility(&db, A, 3), Ok(3));
        assert_eq!(
            item_utility(&db, C, 1),
            Err(MeasureError::ItemNotInTransaction { item: C, tid: 1 })
        );
        assert_eq!(item_utility(&db, A, 9), Err(MeasureError::UnknownTid(9)));
    }

    #[test]
    fn itemset_utilities_in_transactions() {
        let db = running_example();
        assert_eq!(itemset_utility_in_tx(&db, &items("de"), 3), Ok(26));
        assert_eq!(itemset_utility_in_tx(&db, &items("de"), 4), Ok(12));
        assert_eq!(itemset_utility_in_tx(&db, &[], 2), Ok(0));
        assert_eq!(
            itemset_utility_in_tx(&db, &items("de"), 1),
            Err(MeasureError::ItemsetNotContained(1))
        );
    }

    #[test]
    fn itemset_utilities() {
        let db = running_example();
        assert_eq!(itemset_utility(&db, &items("de")), 38);
        assert_eq!(itemset_utility(&db, &items("ab")), 36);
        assert_eq!(itemset_utility(&db, &items("ce")), 24);
        assert_eq!(itemset_utility(&db, &items("e")), 80);
        assert_eq!(itemset_utility(&db, &[ItemId(42)]), 0);
    }

    #[test]
    fn transaction_utilities() {
        let db = running_example();
        let tus: Vec<_> = (1..=5).map(|t| transaction_utility(&db, t).unwrap()).collect();
        assert_eq!(tus, vec![30, 18, 29, 34, 39]);
        assert_eq!(transaction_utility(&db, 0), Err(MeasureError::UnknownTid(0)));
    }

    #[test]
    fn twu_values() {
        let db = running_example();
        assert_eq!(twu(&db, &items("e")), 132);
        assert_eq!(twu(&db, &items("de")), 63);
        assert_eq!(twu(&db, &[ItemId(42)]), 0);
    }

    #[test]
    fn supports() {
        let db = running_example();
        let singles: Vec<_> = "abcde".chars().map(|c| support(&db, &items(&c.to_string()))).collect();
        assert_eq!(singles, vec![5, 4, 2, 3, 4]);
        assert_eq!(support(&db, &items("cd")), 2);
        assert_eq!(support(&db, &items("ce")), 1);
        let ts = Tidsets::build(&db);
        assert_eq!(ts.get(D).unwrap().tids, vec![2, 3, 4]);
        assert_eq!(ts.intersect(&items("cd")), Some(vec![2, 4]));
    }

    #[test]
    fn kulc_values() {
        let db = running_example();
        let k = |s: &str| {
            let set = items(s);
            kulc(&db, &set, support(&db, &set)).unwrap()
        };
        assert!((k("de") - 0.583_333).abs() < 5e-4);
        assert!((k("abc") - 0.633_333).abs() < 5e-4);
        assert!((k("cd") - 0.833).abs() < 5e-4);
        assert!((k("cdb") - 0.722).abs() < 5e-4);
        assert!((k("cdbe") - 0.333).abs() < 5e-4);
        assert!((k("cdbea") - 0.307).abs() < 5e-4);
        for c in "abcde".chars() {
            assert_eq!(k(&c.to_string()), 1.0);
        }
        assert_eq!(
            kulc(&db, &[A, ItemId(42)], 0),
            Err(MeasureError::ZeroSupportMember(ItemId(42)))
        );
    }

    #[test]
    fn kulc_is_member_order_independent() {
        let a = kulc_from_supports(3, [7, 3, 11, 5]);
        let b = kulc_from_supports(3, [11, 5, 3, 7]);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
