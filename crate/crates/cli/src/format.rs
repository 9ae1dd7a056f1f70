//! Text formats: quantity-pair datasets with a separate profit table, the
//! SPMF utility format, and the mined-pattern report.
//!
//! Lines starting with `#` are comments in every input format; blank lines are
//! skipped. Line numbers in errors are 1-based physical lines.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, Write};

use coupm::{ItemId, MiningStats, ModelError, PatternResult, ProfitTable, QuantitativeDatabase};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    /// `item:qty` tokens per line plus a profit table (`item profit` per line).
    QuantityPairs,
    /// `items : tu : utilities` per line; utilities are embedded directly.
    SpmfUtility,
}

impl DatasetFormat {
    pub fn needs_profit_table(self) -> bool {
        matches!(self, DatasetFormat::QuantityPairs)
    }
}

/// Which input a line number refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Dataset,
    Profits,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Dataset => "dataset",
            Source::Profits => "profits",
        })
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{source_kind} line {line}: {reason}")]
    MalformedLine {
        source_kind: Source,
        line: usize,
        reason: String,
    },
    #[error("{source_kind} line {line}: value must be positive")]
    NonPositiveValue { source_kind: Source, line: usize },
    #[error("dataset line {line}: item utilities sum to {actual}, declared {declared}")]
    UtilitySumMismatch {
        line: usize,
        declared: u64,
        actual: u64,
    },
    #[error("item {0} has no entry in the profit table")]
    MissingProfit(ItemId),
    #[error("dataset contains no transactions")]
    EmptyDatabase,
    #[error(transparent)]
    Model(ModelError),
    #[error("cannot write output: {0}")]
    SinkWrite(#[from] io::Error),
}

impl From<ModelError> for FormatError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::MissingProfit(item) => FormatError::MissingProfit(item),
            ModelError::EmptyDatabase => FormatError::EmptyDatabase,
            other => FormatError::Model(other),
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn malformed(source_kind: Source, line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::MalformedLine {
        source_kind,
        line,
        reason: reason.into(),
    }
}

fn parse_item(token: &str, source_kind: Source, line: usize) -> Result<ItemId, FormatError> {
    token
        .parse::<u32>()
        .map(ItemId)
        .map_err(|_| malformed(source_kind, line, format!("`{token}` is not an item id")))
}

/// Parses a positive integer; zero or a negative number is `NonPositiveValue`.
fn parse_positive(token: &str, source_kind: Source, line: usize) -> Result<u64, FormatError> {
    match token.parse::<i128>() {
        Ok(v) if v <= 0 => Err(FormatError::NonPositiveValue { source_kind, line }),
        Ok(v) => u64::try_from(v)
            .map_err(|_| malformed(source_kind, line, format!("`{token}` is too large"))),
        Err(_) => Err(malformed(source_kind, line, format!("`{token}` is not an integer"))),
    }
}

pub fn parse_profit_table(text: &str) -> Result<ProfitTable, FormatError> {
    let mut profits = ProfitTable::new();
    for (line, content) in data_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [item, profit] = tokens[..] else {
            return Err(malformed(Source::Profits, line, "expected `item profit`"));
        };
        let item = parse_item(item, Source::Profits, line)?;
        let profit = parse_positive(profit, Source::Profits, line)?;
        if profits.get(item).is_some() {
            return Err(malformed(Source::Profits, line, format!("duplicate entry for item {item}")));
        }
        profits.insert(item, profit);
    }
    Ok(profits)
}

/// Parses `item:qty` lines against a profit table. Tids follow line order.
pub fn parse_quantity_pairs(text: &str, profit_text: &str) -> Result<QuantitativeDatabase, FormatError> {
    let profits = parse_profit_table(profit_text)?;
    let mut raw = Vec::new();
    for (line, content) in data_lines(text) {
        let mut tx = Vec::new();
        for token in content.split_whitespace() {
            let (item, qty) = token
                .split_once(':')
                .ok_or_else(|| malformed(Source::Dataset, line, format!("`{token}` is not `item:qty`")))?;
            let item = parse_item(item, Source::Dataset, line)?;
            let qty = parse_positive(qty, Source::Dataset, line)?;
            if profits.get(item).is_none() {
                return Err(FormatError::MissingProfit(item));
            }
            tx.push((item, qty));
        }
        raw.push(tx);
    }
    Ok(QuantitativeDatabase::new(raw, profits)?)
}

/// Parses SPMF utility lines `i1 .. im : tu : u1 .. um`.
///
/// A global profit table cannot hold per-transaction utilities, so every item
/// gets unit profit 1 and its utility becomes the quantity. Every measure only
/// uses the product of the two, so nothing is lost.
pub fn parse_spmf_utility(text: &str) -> Result<QuantitativeDatabase, FormatError> {
    let mut raw = Vec::new();
    let mut seen: BTreeSet<ItemId> = BTreeSet::new();
    for (line, content) in data_lines(text) {
        let parts: Vec<&str> = content.split(':').collect();
        let [items, tu, utils] = parts[..] else {
            return Err(malformed(Source::Dataset, line, "expected `items : tu : utilities`"));
        };
        let items: Vec<&str> = items.split_whitespace().collect();
        let utils: Vec<&str> = utils.split_whitespace().collect();
        if items.is_empty() || items.len() != utils.len() {
            return Err(malformed(
                Source::Dataset,
                line,
                format!("{} items but {} utilities", items.len(), utils.len()),
            ));
        }
        let declared = parse_positive(tu.trim(), Source::Dataset, line)?;
        let mut tx = Vec::with_capacity(items.len());
        let mut actual: u64 = 0;
        for (item, util) in items.iter().zip(&utils) {
            let item = parse_item(item, Source::Dataset, line)?;
            let util = parse_positive(util, Source::Dataset, line)?;
            actual = actual.saturating_add(util);
            seen.insert(item);
            tx.push((item, util));
        }
        if actual != declared {
            return Err(FormatError::UtilitySumMismatch {
                line,
                declared,
                actual,
            });
        }
        raw.push(tx);
    }
    let profits: ProfitTable = seen.into_iter().map(|i| (i, 1)).collect();
    Ok(QuantitativeDatabase::new(raw, profits)?)
}

/// Serializes to quantity-pair text, returning `(dataset, profit table)`.
pub fn write_quantity_pairs(db: &QuantitativeDatabase) -> (String, String) {
    let mut data = String::new();
    for tx in db.transactions() {
        let line: Vec<String> = tx.items().iter().map(|(i, q)| format!("{i}:{q}")).collect();
        data.push_str(&line.join(" "));
        data.push('\n');
    }
    let mut profits = String::new();
    for (item, p) in db.profits().iter() {
        profits.push_str(&format!("{item} {p}\n"));
    }
    (data, profits)
}

pub fn write_spmf_utility(db: &QuantitativeDatabase) -> String {
    let mut out = String::new();
    for tx in db.transactions() {
        let items: Vec<String> = tx.items().iter().map(|(i, _)| i.to_string()).collect();
        let utils: Vec<String> = tx
            .items()
            .iter()
            .map(|&(i, q)| (db.profit(i).unwrap_or(0) * q).to_string())
            .collect();
        out.push_str(&format!("{}:{}:{}\n", items.join(" "), tx.utility(), utils.join(" ")));
    }
    out
}

/// Kulc at six decimals. `{:.6}` rounds exact ties to even.
pub fn format_kulc(kulc: f64) -> String {
    format!("{kulc:.6}")
}

pub fn format_pattern(p: &PatternResult) -> String {
    let items: Vec<String> = p.itemset.iter().map(ItemId::to_string).collect();
    format!(
        "{} #UTIL: {} #SUP: {} #KULC: {}",
        items.join(" "),
        p.utility,
        p.support,
        format_kulc(p.kulc)
    )
}

/// One line per pattern, then a `# STATS:` block. Lines end in LF.
pub fn write_results<W: Write + ?Sized>(
    results: &[PatternResult],
    stats: &MiningStats,
    sink: &mut W,
) -> Result<(), FormatError> {
    for p in results {
        writeln!(sink, "{}", format_pattern(p))?;
    }
    writeln!(sink, "# STATS:")?;
    writeln!(sink, "# nodes_visited: {}", stats.nodes_visited)?;
    writeln!(sink, "# joins_performed: {}", stats.joins_performed)?;
    writeln!(sink, "# spk_prunes: {}", stats.spk_prunes)?;
    writeln!(sink, "# ubu_prunes: {}", stats.ubu_prunes)?;
    writeln!(sink, "# la_prunes: {}", stats.la_prunes)?;
    writeln!(sink, "# peak_live_lists: {}", stats.peak_live_lists)?;
    writeln!(sink, "# wall_time_ms: {:.3}", stats.wall_time.as_secs_f64() * 1e3)?;
    writeln!(sink, "# patterns_found: {}", stats.patterns_found)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use coupm::fixtures::running_example;

    const PAIRS: &str = "# running example\n1:3 2:1 5:2\n1:2 2:3 3:1 4:1\n1:1 4:3 5:2\n1:1 2:5 3:2 4:1 5:1\n1:2 2:3 5:3\n";
    const PROFITS: &str = "1 3\n2 1\n3 7\n4 2\n5 10\n";

    #[test]
    fn pairs_running_example() {
        let db = parse_quantity_pairs(PAIRS, PROFITS).unwrap();
        assert_eq!(db, running_example());
        assert_eq!(db.transaction(1).unwrap().utility(), 30);
    }

    #[test]
    fn pairs_errors() {
        assert!(matches!(parse_quantity_pairs("", PROFITS), Err(FormatError::EmptyDatabase)));
        assert!(matches!(
            parse_quantity_pairs("1:0", PROFITS),
            Err(FormatError::NonPositiveValue { source_kind: Source::Dataset, line: 1 })
        ));
        assert!(matches!(
            parse_quantity_pairs("1:2\n1-2", PROFITS),
            Err(FormatError::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_quantity_pairs("9:1", PROFITS),
            Err(FormatError::MissingProfit(ItemId(9)))
        ));
        assert!(matches!(
            parse_quantity_pairs("1:1", "1 -4"),
            Err(FormatError::NonPositiveValue { source_kind: Source::Profits, line: 1 })
        ));
        assert!(matches!(
            parse_quantity_pairs("1:1", "1 4\n1 5"),
            Err(FormatError::MalformedLine { source_kind: Source::Profits, line: 2, .. })
        ));
    }

    #[test]
    fn spmf_lines() {
        let db = parse_spmf_utility("1 2 5:30:9 1 20").unwrap();
        let tx = db.transaction(1).unwrap();
        assert_eq!(tx.utility(), 30);
        let utils: Vec<u64> = tx.items().iter().map(|&(i, q)| db.profit(i).unwrap() * q).collect();
        assert_eq!(utils, vec![9, 1, 20]);

        let single = parse_spmf_utility("7:5:5").unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.total_utility(), 5);

        assert!(matches!(
            parse_spmf_utility("1 2:10:3 4"),
            Err(FormatError::UtilitySumMismatch { line: 1, declared: 10, actual: 7 })
        ));
        assert!(matches!(parse_spmf_utility("1 2:3:3"), Err(FormatError::MalformedLine { .. })));
        assert!(matches!(parse_spmf_utility("1 2 3"), Err(FormatError::MalformedLine { .. })));
    }

    #[test]
    fn report_lines() {
        let de = PatternResult {
            itemset: vec![ItemId(4), ItemId(5)],
            utility: 38,
            support: 2,
            kulc: 7.0 / 12.0,
        };
        assert_eq!(format_pattern(&de), "4 5 #UTIL: 38 #SUP: 2 #KULC: 0.583333");
        let e = PatternResult {
            itemset: vec![ItemId(5)],
            utility: 80,
            support: 4,
            kulc: 1.0,
        };
        assert_eq!(format_pattern(&e), "5 #UTIL: 80 #SUP: 4 #KULC: 1.000000");
    }

    #[test]
    fn kulc_ties_round_to_even() {
        assert_eq!(format_kulc(0.0078125), "0.007812");
        assert_eq!(format_kulc(0.0234375), "0.023438");
    }

    #[test]
    fn empty_results_print_only_stats() {
        let mut out = Vec::new();
        write_results(&[], &MiningStats::default(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().all(|l| l.starts_with('#')));
        assert!(text.starts_with("# STATS:\n"));
        assert!(text.contains("# patterns_found: 0\n"));
    }
}
