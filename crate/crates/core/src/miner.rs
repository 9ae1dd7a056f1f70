//! One-phase miner: a TWU filter over single items followed by a depth-first
//! walk of the set-enumeration tree on revised utility-lists.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use crate::error::ModelError;
use crate::measures::{kulc_from_supports, Tidsets};
use crate::model::{
    sort_canonical, ItemId, ItemOrder, MiningParams, PatternResult, QuantitativeDatabase,
    Strategies, Utility,
};
use crate::rulist::{build_initial_lists, construct_join, RevisedUtilityList, TotalOrder};

/// Kulc pruning only fires this far below `min_cor`. Mathematically equal Kulc
/// values along a chain can round differently once the member count changes.
const SPK_SLACK: f64 = 1e-9;

/// Counters collected during one mining run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MiningStats {
    /// Tree nodes (itemsets with a materialized list) examined by the search.
    pub nodes_visited: u64,
    pub joins_performed: u64,
    /// Nodes whose extensions were skipped because Kulc fell below `min_cor`.
    pub spk_prunes: u64,
    /// Nodes whose extensions were skipped because `IU + RU` fell below the
    /// threshold. Checked first, so a node failing both counts here.
    pub ubu_prunes: u64,
    /// Joins abandoned by the look-ahead bound.
    pub la_prunes: u64,
    pub patterns_found: u64,
    pub wall_time: Duration,
    /// Largest number of lists held by the search at once.
    pub peak_live_lists: u64,
}

/// Fixed inputs of a search.
#[derive(Debug, Clone)]
pub struct SearchContext {
    pub threshold: Utility,
    pub min_cor: f64,
    pub strategies: Strategies,
    /// Full-database support of every item, including ones the TWU filter dropped.
    pub item_supports: HashMap<ItemId, u32>,
}

impl SearchContext {
    pub fn kulc(&self, list: &RevisedUtilityList) -> f64 {
        kulc_from_supports(
            list.sup(),
            list.itemset().iter().map(|i| self.item_supports[i]),
        )
    }
}

/// Mutable state threaded through the search.
#[derive(Debug, Default)]
pub struct Accumulator {
    pub results: Vec<PatternResult>,
    pub stats: MiningStats,
}

struct Frame {
    prefix: Option<Rc<RevisedUtilityList>>,
    extensions: Vec<Rc<RevisedUtilityList>>,
    next: usize,
}

/// Depth-first search below `prefix` over `extensions`, which must be ordered
/// by the processing order and share `prefix`.
///
/// Runs on an explicit stack, so depth is bounded only by memory.
pub fn search(
    prefix: Option<Rc<RevisedUtilityList>>,
    extensions: Vec<Rc<RevisedUtilityList>>,
    ctx: &SearchContext,
    acc: &mut Accumulator,
) {
    let stats = &mut acc.stats;
    let mut live = extensions.len() as u64;
    stats.peak_live_lists = stats.peak_live_lists.max(live);
    let mut stack = vec![Frame {
        prefix,
        extensions,
        next: 0,
    }];

    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.extensions.len() {
            live -= frame.extensions.len() as u64;
            stack.pop();
            continue;
        }
        let xa = Rc::clone(&frame.extensions[frame.next]);
        frame.next += 1;
        stats.nodes_visited += 1;

        // iu <= iu + ru, so a node failing this can neither be emitted nor expanded
        if xa.upper_bound() < ctx.threshold {
            stats.ubu_prunes += 1;
            continue;
        }
        let kulc = ctx.kulc(&xa);
        if kulc >= ctx.min_cor && xa.iu() >= ctx.threshold {
            let mut itemset = xa.itemset().to_vec();
            itemset.sort_unstable();
            acc.results.push(PatternResult {
                itemset,
                utility: xa.iu(),
                support: xa.sup(),
                kulc,
            });
        }

        if ctx.strategies.spk && kulc < ctx.min_cor - SPK_SLACK {
            stats.spk_prunes += 1;
            continue;
        }

        let siblings = &frame.extensions[frame.next..];
        if siblings.is_empty() {
            continue;
        }
        let mut children = Vec::new();
        for xb in siblings {
            stats.joins_performed += 1;
            match construct_join(
                frame.prefix.as_deref(),
                &xa,
                xb,
                ctx.threshold,
                ctx.strategies.la,
            ) {
                None => stats.la_prunes += 1,
                Some(list) if list.is_empty() => {}
                Some(list) => children.push(Rc::new(list)),
            }
        }
        if children.is_empty() {
            continue;
        }
        live += children.len() as u64;
        stats.peak_live_lists = stats.peak_live_lists.max(live);
        stack.push(Frame {
            prefix: Some(xa),
            extensions: children,
            next: 0,
        });
    }
}

/// Mines every itemset with `u(X) >= threshold` and `Kulc(X) >= min_cor`.
/// Results come back in canonical order; the set does not depend on the
/// chosen strategies.
pub fn mine(
    db: &QuantitativeDatabase,
    params: &MiningParams,
) -> Result<(Vec<PatternResult>, MiningStats), ModelError> {
    params.validate()?;
    let start = Instant::now();

    let threshold = params.min_util.resolve(db.total_utility());
    let tidsets = Tidsets::build(db);
    let mut twu: HashMap<ItemId, Utility> = HashMap::new();
    for tx in db.transactions() {
        for &(item, _) in tx.items() {
            *twu.entry(item).or_insert(0) += tx.utility();
        }
    }
    let item_supports: HashMap<ItemId, u32> = twu
        .keys()
        .map(|&i| (i, tidsets.item_support(i)))
        .collect();

    let promising: Vec<ItemId> = twu
        .iter()
        .filter(|&(_, &w)| w >= threshold)
        .map(|(&i, _)| i)
        .collect();
    let order = match params.order {
        ItemOrder::SupportAscending => TotalOrder::support_ascending(&promising, &tidsets),
        ItemOrder::Lexicographic => TotalOrder::lexicographic(&promising),
    };
    let mut lists = build_initial_lists(db, &order, &promising);
    let roots: Vec<Rc<RevisedUtilityList>> = order
        .items()
        .iter()
        .filter_map(|i| lists.remove(i))
        .map(Rc::new)
        .collect();

    let ctx = SearchContext {
        threshold,
        min_cor: params.min_cor,
        strategies: params.strategies,
        item_supports,
    };
    let mut acc = Accumulator::default();
    search(None, roots, &ctx, &mut acc);

    let Accumulator {
        mut results,
        mut stats,
    } = acc;
    sort_canonical(&mut results);
    stats.patterns_found = results.len() as u64;
    stats.wall_time = start.elapsed();
    Ok((results, stats))
}
