//! Exhaustive reference miner and seeded database generator used to check the
//! list-based miner. Only the model and the direct measures are used here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ModelError, OracleError};
use crate::measures::{kulc_with, Tidsets};
use crate::model::{
    sort_canonical, Decimal, ItemId, MinUtil, MiningParams, PatternResult, ProfitTable,
    QuantitativeDatabase,
};

pub const DEFAULT_UNIVERSE_CAP: usize = 20;

/// Enumerates all `2^|I| - 1` itemsets. See [`brute_force_mine_with_cap`].
pub fn brute_force_mine(
    db: &QuantitativeDatabase,
    params: &MiningParams,
) -> Result<Vec<PatternResult>, OracleError> {
    brute_force_mine_with_cap(db, params, DEFAULT_UNIVERSE_CAP)
}

pub fn brute_force_mine_with_cap(
    db: &QuantitativeDatabase,
    params: &MiningParams,
    cap: usize,
) -> Result<Vec<PatternResult>, OracleError> {
    params.validate()?;
    let universe = db.items();
    if universe.len() > cap {
        return Err(OracleError::UniverseTooLarge {
            size: universe.len(),
            cap,
        });
    }
    let threshold = params.min_util.resolve(db.total_utility());
    let tidsets = Tidsets::build(db);

    let mut out = Vec::new();
    let mut itemset = Vec::with_capacity(universe.len());
    for mask in 1u64..(1u64 << universe.len()) {
        itemset.clear();
        itemset.extend(
            universe
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &i)| i),
        );
        let tids = tidsets.intersect(&itemset).unwrap_or_default();
        if tids.is_empty() {
            continue;
        }
        let utility: u64 = tids
            .iter()
            .map(|&tid| {
                let tx = db.transaction(tid).expect("tid from tidset");
                itemset
                    .iter()
                    .map(|&i| db.profit(i).unwrap() * tx.quantity(i).unwrap())
                    .sum::<u64>()
            })
            .sum();
        if utility < threshold {
            continue;
        }
        let support = tids.len() as u32;
        let kulc = kulc_with(&tidsets, &itemset, support)
            .expect("members of an occurring itemset occur");
        if kulc >= params.min_cor {
            out.push(PatternResult {
                itemset: itemset.clone(),
                utility,
                support,
                kulc,
            });
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// Seeded random quantitative database over items `1..=n_items`.
///
/// Each item joins each transaction independently with probability
/// `density`; quantities and profits are uniform in `1..=max`. Empty
/// transactions are dropped.
pub fn random_database(
    seed: u64,
    n_items: usize,
    n_tx: usize,
    max_qty: u64,
    max_profit: u64,
    density: f64,
) -> Result<QuantitativeDatabase, ModelError> {
    if n_items == 0 || n_tx == 0 || max_qty == 0 || max_profit == 0 {
        return Err(ModelError::InvalidParams(
            "item count, transaction count, max quantity and max profit must be positive".into(),
        ));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(ModelError::InvalidParams(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    let n_items = u32::try_from(n_items)
        .map_err(|_| ModelError::InvalidParams("too many items".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profits: ProfitTable = (1..=n_items)
        .map(|i| (ItemId(i), rng.gen_range(1..=max_profit)))
        .collect();
    let mut raw = Vec::with_capacity(n_tx);
    for _ in 0..n_tx {
        let mut tx: Vec<(ItemId, u64)> = Vec::new();
        for i in 1..=n_items {
            if density >= 1.0 || rng.gen_bool(density) {
                tx.push((ItemId(i), rng.gen_range(1..=max_qty)));
            }
        }
        if !tx.is_empty() {
            raw.push(tx);
        }
    }
    QuantitativeDatabase::new(raw, profits)
}

/// One instance of the seeded equivalence suite.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub seed: u64,
    pub density: f64,
    pub min_util_percent: u64,
    pub min_cor_percent: u64,
    pub db: QuantitativeDatabase,
}

impl SuiteCase {
    /// Mining parameters with the default strategies.
    pub fn params(&self) -> MiningParams {
        MiningParams::new(
            MinUtil::Relative(Decimal::from_ratio(self.min_util_percent, 100).unwrap()),
            self.min_cor_percent as f64 / 100.0,
        )
    }
}

/// Small random instance for `seed`: at most 10 items and 30 transactions,
/// with thresholds on a percent grid.
pub fn suite_case(seed: u64) -> SuiteCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    loop {
        let n_items = rng.gen_range(2..=10);
        let n_tx = rng.gen_range(3..=30);
        let density = rng.gen_range(20..=100) as f64 / 100.0;
        let min_util_percent = rng.gen_range(0..=40);
        let min_cor_percent = rng.gen_range(0..=100);
        let db_seed = rng.gen();
        if let Ok(db) = random_database(db_seed, n_items, n_tx, 5, 10, density) {
            return SuiteCase {
                seed,
                density,
                min_util_percent,
                min_cor_percent,
                db,
            };
        }
    }
}
