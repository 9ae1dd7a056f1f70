//! Revised utility-lists: per-itemset vertical lists of `(tid, iu, ru)`
//! tuples plus a support count, and the three-way join that extends them.

use std::collections::{HashMap, HashSet};

use crate::error::MeasureError;
use crate::measures::Tidsets;
use crate::model::{ItemId, QuantitativeDatabase, Tid, Utility};

/// Binary probing replaces the linear merge once the probed list is at least
/// this many times longer than the driving one.
const PROBE_RATIO: usize = 16;

/// Processing order of items. Extensions always append items that rank later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalOrder {
    items: Vec<ItemId>,
    rank: HashMap<ItemId, usize>,
}

impl TotalOrder {
    /// Ascending support, ties broken by ascending item id.
    pub fn support_ascending(items: &[ItemId], tidsets: &Tidsets) -> Self {
        let mut sorted = items.to_vec();
        sorted.sort_by_key(|&i| (tidsets.item_support(i), i));
        sorted.dedup();
        Self::from_sequence(sorted)
    }

    pub fn lexicographic(items: &[ItemId]) -> Self {
        let mut sorted = items.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Self::from_sequence(sorted)
    }

    fn from_sequence(items: Vec<ItemId>) -> Self {
        let rank = items.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        TotalOrder { items, rank }
    }

    pub fn rank(&self, item: ItemId) -> Option<usize> {
        self.rank.get(&item).copied()
    }

    /// Items from first to last.
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RulEntry {
    pub tid: Tid,
    /// Utility of the itemset in this transaction.
    pub iu: Utility,
    /// Utility of the items ranked after the itemset in this transaction.
    pub ru: Utility,
}

/// Revised utility-list of one itemset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisedUtilityList {
    itemset: Vec<ItemId>,
    entries: Vec<RulEntry>,
    iu_total: Utility,
    ru_total: Utility,
}

impl RevisedUtilityList {
    fn new(itemset: Vec<ItemId>) -> Self {
        RevisedUtilityList {
            itemset,
            entries: Vec::new(),
            iu_total: 0,
            ru_total: 0,
        }
    }

    fn push(&mut self, entry: RulEntry) {
        self.iu_total += entry.iu;
        self.ru_total += entry.ru;
        self.entries.push(entry);
    }

    /// Members in processing order.
    pub fn itemset(&self) -> &[ItemId] {
        &self.itemset
    }

    /// Entries in ascending tid order.
    pub fn entries(&self) -> &[RulEntry] {
        &self.entries
    }

    /// Support count, one per tuple.
    pub fn sup(&self) -> u32 {
        self.entries.len() as u32
    }

    /// Summed `iu`, equal to the itemset's utility.
    pub fn iu(&self) -> Utility {
        self.iu_total
    }

    /// Summed `ru`.
    pub fn ru(&self) -> Utility {
        self.ru_total
    }

    /// Upper bound on the utility of every extension of this itemset.
    pub fn upper_bound(&self) -> Utility {
        self.iu_total + self.ru_total
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `ru(X, T)`: utility in `T` of the ranked items after the last member of
/// `itemset` under `order`. Items missing from `order` are not counted.
pub fn remaining_utility(
    db: &QuantitativeDatabase,
    order: &TotalOrder,
    itemset: &[ItemId],
    tid: Tid,
) -> Result<Utility, MeasureError> {
    let tx = db.transaction(tid).ok_or(MeasureError::UnknownTid(tid))?;
    if !itemset.iter().all(|&i| tx.contains(i)) {
        return Err(MeasureError::ItemsetNotContained(tid));
    }
    let last = itemset.iter().filter_map(|&i| order.rank(i)).max();
    Ok(tx
        .items()
        .iter()
        .filter(|&&(item, _)| match (order.rank(item), last) {
            (Some(r), Some(l)) => r > l,
            (Some(_), None) => true,
            (None, _) => false,
        })
        .map(|&(item, qty)| db.profit(item).unwrap_or(0) * qty)
        .sum())
}

/// One scan building the 1-item list of every promising item. Remaining
/// utilities only count promising items that are ranked in `order`.
pub fn build_initial_lists(
    db: &QuantitativeDatabase,
    order: &TotalOrder,
    promising: &[ItemId],
) -> HashMap<ItemId, RevisedUtilityList> {
    let keep: HashSet<ItemId> = promising
        .iter()
        .copied()
        .filter(|&i| order.rank(i).is_some())
        .collect();
    let mut lists: HashMap<ItemId, RevisedUtilityList> = keep
        .iter()
        .map(|&i| (i, RevisedUtilityList::new(vec![i])))
        .collect();

    let mut row: Vec<(usize, ItemId, Utility)> = Vec::new();
    for tx in db.transactions() {
        row.clear();
        row.extend(tx.items().iter().filter(|(i, _)| keep.contains(i)).map(|&(i, q)| {
            (order.rank(i).unwrap(), i, db.profit(i).unwrap_or(0) * q)
        }));
        row.sort_unstable_by_key(|&(r, _, _)| r);
        let mut remaining: Utility = row.iter().map(|&(_, _, u)| u).sum();
        for &(_, item, u) in &row {
            remaining -= u;
            lists.get_mut(&item).unwrap().push(RulEntry {
                tid: tx.tid(),
                iu: u,
                ru: remaining,
            });
        }
    }
    lists
}

/// Locates the entry for `tid` by binary search.
pub fn find_entry(list: &RevisedUtilityList, tid: Tid) -> Option<&RulEntry> {
    list.entries
        .binary_search_by_key(&tid, |e| e.tid)
        .ok()
        .map(|pos| &list.entries[pos])
}

/// Forward cursor over a tid-sorted entry slice.
struct Cursor<'a> {
    entries: &'a [RulEntry],
    pos: usize,
    probe: bool,
}

impl<'a> Cursor<'a> {
    fn new(entries: &'a [RulEntry], driver_len: usize) -> Self {
        Cursor {
            entries,
            pos: 0,
            probe: entries.len() >= driver_len.saturating_mul(PROBE_RATIO),
        }
    }

    /// Advances past every tid below `tid` and returns the entry equal to it.
    /// Calls must use non-decreasing tids.
    fn seek(&mut self, tid: Tid) -> Option<&'a RulEntry> {
        let rest = &self.entries[self.pos..];
        if self.probe {
            self.pos += rest.partition_point(|e| e.tid < tid);
        } else {
            let mut i = self.pos;
            while i < self.entries.len() && self.entries[i].tid < tid {
                i += 1;
            }
            self.pos = i;
        }
        self.entries.get(self.pos).filter(|e| e.tid == tid)
    }
}

/// Builds the list of `Xab` from `X` (None for the empty prefix), `Xa` and
/// `Xb`, where `Xb` ranks after `Xa`.
///
/// With `la_enabled`, the look-ahead bound starts at `Xa.IU + Xa.RU` and loses
/// `iu + ru` of every `Xa` tuple without a partner in `Xb`; once it falls below
/// `la_threshold` the join is abandoned and `None` is returned.
pub fn construct_join(
    prefix: Option<&RevisedUtilityList>,
    xa: &RevisedUtilityList,
    xb: &RevisedUtilityList,
    la_threshold: Utility,
    la_enabled: bool,
) -> Option<RevisedUtilityList> {
    let mut itemset = Vec::with_capacity(xa.itemset.len() + 1);
    itemset.extend_from_slice(&xa.itemset);
    if let Some(&last) = xb.itemset.last() {
        itemset.push(last);
    }
    let mut out = RevisedUtilityList::new(itemset);
    out.entries.reserve(xa.entries.len().min(xb.entries.len()));

    let mut bound = xa.upper_bound();
    let mut b_cursor = Cursor::new(&xb.entries, xa.entries.len());
    let mut p_cursor = prefix.map(|p| Cursor::new(&p.entries, xa.entries.len()));

    for ea in &xa.entries {
        match b_cursor.seek(ea.tid) {
            Some(eb) => {
                let iu = match p_cursor.as_mut() {
                    Some(cursor) => {
                        let e = cursor
                            .seek(ea.tid)
                            .expect("prefix list covers every tid of its extension");
                        ea.iu + eb.iu - e.iu
                    }
                    None => ea.iu + eb.iu,
                };
                out.push(RulEntry {
                    tid: ea.tid,
                    iu,
                    ru: eb.ru,
                });
            }
            None => {
                bound -= ea.iu + ea.ru;
                if la_enabled && bound < la_threshold {
                    return None;
                }
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::measures::{itemset_utility, itemset_utility_in_tx, support};
    use crate::oracle::random_database;
    use proptest::prelude::*;

    fn setup() -> (QuantitativeDatabase, TotalOrder, HashMap<ItemId, RevisedUtilityList>) {
        let db = running_example();
        let ts = Tidsets::build(&db);
        let items = db.items();
        let order = TotalOrder::support_ascending(&items, &ts);
        let lists = build_initial_lists(&db, &order, &items);
        (db, order, lists)
    }

    fn e(tid: Tid, iu: Utility, ru: Utility) -> RulEntry {
        RulEntry { tid, iu, ru }
    }

    #[test]
    fn support_ascending_order_of_running_example() {
        let (_, order, _) = setup();
        assert_eq!(order.items(), &items("cdbea")[..]);
    }

    #[test]
    fn remaining_utilities() {
        let (db, order, _) = setup();
        assert_eq!(remaining_utility(&db, &order, &[D], 4), Ok(18));
        assert_eq!(remaining_utility(&db, &order, &items("de"), 4), Ok(3));
        for tid in 1..=5 {
            assert_eq!(remaining_utility(&db, &order, &[A], tid), Ok(0));
        }
        assert_eq!(
            remaining_utility(&db, &order, &[C], 1),
            Err(MeasureError::ItemsetNotContained(1))
        );
    }

    #[test]
    fn initial_lists() {
        let (_, _, lists) = setup();
        let d = &lists[&D];
        assert_eq!(d.entries(), &[e(2, 2, 9), e(3, 6, 23), e(4, 2, 18)]);
        assert_eq!(d.sup(), 3);
        let c = &lists[&C];
        assert_eq!(c.entries(), &[e(2, 7, 11), e(4, 14, 20)]);
        assert_eq!(c.sup(), 2);
        assert!(lists[&A].entries().iter().all(|x| x.ru == 0));
    }

    #[test]
    fn remaining_utility_skips_unpromising_items() {
        let db = running_example();
        let ts = Tidsets::build(&db);
        let promising = items("cdba");
        let order = TotalOrder::support_ascending(&promising, &ts);
        let lists = build_initial_lists(&db, &order, &promising);
        assert!(!lists.contains_key(&E));
        // T_4 without e: d=2, then b=5, a=3
        assert_eq!(find_entry(&lists[&D], 4), Some(&e(4, 2, 8)));
    }

    #[test]
    fn join_d_with_b() {
        let (_, _, lists) = setup();
        let db_list = construct_join(None, &lists[&D], &lists[&B], 0, false).unwrap();
        assert_eq!(db_list.itemset(), &items("db")[..]);
        assert_eq!(db_list.entries(), &[e(2, 5, 6), e(4, 7, 13)]);
        assert_eq!(db_list.sup(), 2);
    }

    #[test]
    fn cdb_upper_bound() {
        let (_, _, lists) = setup();
        let cd = construct_join(None, &lists[&C], &lists[&D], 0, false).unwrap();
        let cb = construct_join(None, &lists[&C], &lists[&B], 0, false).unwrap();
        let cdb = construct_join(Some(&lists[&C]), &cd, &cb, 0, false).unwrap();
        assert_eq!(cdb.iu(), 33);
        assert_eq!(cdb.ru(), 19);
        assert_eq!(cdb.upper_bound(), 52);
    }

    #[test]
    fn la_forced_prune() {
        let (_, _, lists) = setup();
        let d = &lists[&D];
        // d's first tuple (T_2) has no partner in e
        let threshold = d.upper_bound() + 1;
        assert!(construct_join(None, d, &lists[&E], threshold, true).is_none());
        assert!(construct_join(None, d, &lists[&E], threshold, false).is_some());
    }

    #[test]
    fn disjoint_join_is_empty() {
        let profits: crate::model::ProfitTable = [(A, 1), (B, 1)].into_iter().collect();
        let db = QuantitativeDatabase::new(vec![vec![(A, 1)], vec![(B, 2)]], profits).unwrap();
        let order = TotalOrder::lexicographic(&db.items());
        let lists = build_initial_lists(&db, &order, &db.items());
        let ab = construct_join(None, &lists[&A], &lists[&B], 0, false).unwrap();
        assert_eq!(ab.sup(), 0);
        assert!(ab.entries().is_empty());
    }

    #[test]
    fn find_entries() {
        let (_, _, lists) = setup();
        assert_eq!(find_entry(&lists[&D], 3), Some(&e(3, 6, 23)));
        assert_eq!(find_entry(&lists[&D], 1), None);
        let empty = RevisedUtilityList::new(vec![A]);
        assert_eq!(find_entry(&empty, 1), None);
    }

    #[test]
    fn probe_and_merge_agree() {
        let long: Vec<RulEntry> = (1..=400).map(|t| e(t, 1, 1)).collect();
        let short = [e(3, 1, 1), e(200, 1, 1), e(399, 1, 1), e(401, 1, 1)];
        let mut probe = Cursor::new(&long, short.len());
        let mut merge = Cursor { probe: false, ..Cursor::new(&long, short.len()) };
        assert!(probe.probe);
        for x in &short {
            assert_eq!(probe.seek(x.tid), merge.seek(x.tid));
        }
    }

    /// Walks the whole enumeration tree with LA disabled and checks every
    /// node against direct measures.
    fn check_tree(
        db: &QuantitativeDatabase,
        prefix: Option<&RevisedUtilityList>,
        exts: &[RevisedUtilityList],
    ) -> Result<(), TestCaseError> {
        for (idx, xa) in exts.iter().enumerate() {
            prop_assert_eq!(xa.iu(), itemset_utility(db, xa.itemset()));
            prop_assert_eq!(xa.sup(), support(db, xa.itemset()));
            for entry in xa.entries() {
                prop_assert_eq!(Ok(entry.iu), itemset_utility_in_tx(db, xa.itemset(), entry.tid));
                prop_assert!(entry.iu > 0);
                prop_assert!(entry.iu + entry.ru <= db.transaction(entry.tid).unwrap().utility());
            }
            let mut children = Vec::new();
            for xb in &exts[idx + 1..] {
                let child = construct_join(prefix, xa, xb, 0, false).unwrap();
                // any threshold: a non-null LA join matches the plain join
                for threshold in [1, xa.upper_bound() / 2, xa.upper_bound()] {
                    if let Some(la) = construct_join(prefix, xa, xb, threshold, true) {
                        prop_assert_eq!(&la, &child);
                    }
                }
                prop_assert!(child.upper_bound() <= xa.upper_bound());
                if !child.is_empty() {
                    children.push(child);
                }
            }
            check_descendants(xa, &children)?;
            check_tree(db, Some(xa), &children)?;
        }
        Ok(())
    }

    fn check_descendants(
        root: &RevisedUtilityList,
        children: &[RevisedUtilityList],
    ) -> Result<(), TestCaseError> {
        for c in children {
            prop_assert!(c.iu() <= root.upper_bound());
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn list_tree_invariants(seed in any::<u64>(), n_items in 1usize..8, n_tx in 1usize..16, density in 0.2f64..1.0) {
            let Ok(db) = random_database(seed, n_items, n_tx, 4, 9, density) else {
                return Ok(());
            };
            let ts = Tidsets::build(&db);
            let order = TotalOrder::support_ascending(&db.items(), &ts);
            let lists = build_initial_lists(&db, &order, &db.items());
            let roots: Vec<_> = order.items().iter().map(|i| lists[i].clone()).collect();
            check_tree(&db, None, &roots)?;
        }
    }
}
