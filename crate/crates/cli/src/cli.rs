//! `coupm` command line: mine a dataset, optionally cross-check against the
//! brute-force oracle or repeat for timing, or generate a synthetic dataset.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 oracle mismatch,
//! 1 when the output cannot be written.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coupm::oracle::{brute_force_mine, random_database};
use coupm::{mine, ItemOrder, MinUtil, MiningParams, PatternResult, Strategies};

use crate::format::{
    parse_quantity_pairs, parse_spmf_utility, write_quantity_pairs, write_results,
    write_spmf_utility, DatasetFormat, FormatError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "coupm",
    version,
    about = "Mine correlated high-utility itemsets",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    mine: MineArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded synthetic dataset.
    #[command(long_flag = "gen")]
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Pairs,
    Spmf,
}

impl From<FormatArg> for DatasetFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Pairs => DatasetFormat::QuantityPairs,
            FormatArg::Spmf => DatasetFormat::SpmfUtility,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Support,
    Lexicographic,
}

#[derive(Debug, Args)]
struct MineArgs {
    /// Dataset to mine.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pairs")]
    format: FormatArg,
    /// Profit table (`item profit` per line); pairs format only.
    #[arg(long)]
    profits: Option<PathBuf>,
    /// Minimum utility: `20%` of the total utility, or an absolute amount.
    #[arg(long)]
    min_util: Option<String>,
    /// Minimum Kulc correlation in [0, 1].
    #[arg(long, default_value = "0")]
    min_cor: String,
    /// One of ubu, sorted, la, sorted+la.
    #[arg(long, default_value = "sorted+la")]
    strategies: String,
    /// Item processing order; `lexicographic` cannot be combined with Kulc pruning.
    #[arg(long, value_enum, default_value = "support")]
    order: OrderArg,
    /// Also run the brute-force miner and fail with exit 3 on any difference.
    #[arg(long)]
    oracle: bool,
    /// Mine N times and report min/median wall time.
    #[arg(long, value_name = "N")]
    bench: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    items: usize,
    #[arg(long, default_value_t = 30)]
    transactions: usize,
    #[arg(long, default_value_t = 5)]
    max_qty: u64,
    #[arg(long, default_value_t = 10)]
    max_profit: u64,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, value_enum, default_value = "pairs")]
    format: FormatArg,
    /// Dataset file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Profit table file, required for the pairs format.
    #[arg(long)]
    profits_output: Option<PathBuf>,
}

/// Failure carrying its exit code and a one-line diagnostic.
struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::SinkWrite(err) => Failure {
                code: EXIT_IO,
                message: format!("cannot write output: {err}"),
            },
            other => invalid(other.to_string()),
        }
    }
}

/// Runs the command line with process stdout/stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line against explicit sinks.
pub fn run_cli_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return EXIT_INVALID;
        }
    };
    let result = match cli.command {
        Some(Command::Gen(args)) => generate(&args, stdout),
        None => run_mine(&cli.mine, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path, flag: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{flag} {}: {e}", path.display())))
}

fn params_from(args: &MineArgs) -> Result<MiningParams, Failure> {
    let min_util: MinUtil = args
        .min_util
        .as_deref()
        .ok_or_else(|| invalid("--min-util is required"))?
        .parse()
        .map_err(|e| invalid(format!("--min-util: {e}")))?;
    let min_cor: f64 = args
        .min_cor
        .trim()
        .parse()
        .map_err(|_| invalid(format!("--min-cor: `{}` is not a number", args.min_cor)))?;
    if !(0.0..=1.0).contains(&min_cor) {
        return Err(invalid(format!("--min-cor: must lie in [0, 1], got {min_cor}")));
    }
    let strategies: Strategies = args
        .strategies
        .parse()
        .map_err(|e| invalid(format!("--strategies: {e}")))?;
    let order = match args.order {
        OrderArg::Support => ItemOrder::SupportAscending,
        OrderArg::Lexicographic => ItemOrder::Lexicographic,
    };
    let params = MiningParams::new(min_util, min_cor)
        .with_strategies(strategies)
        .with_order(order);
    params
        .validate()
        .map_err(|e| invalid(format!("--order/--strategies: {e}")))?;
    Ok(params)
}

fn run_mine(args: &MineArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let input = args.input.as_ref().ok_or_else(|| invalid("--input is required"))?;
    let params = params_from(args)?;
    if args.bench == Some(0) {
        return Err(invalid("--bench: repetition count must be at least 1"));
    }

    let format = DatasetFormat::from(args.format);
    let text = read(input, "--input")?;
    let db = if format.needs_profit_table() {
        let profits = args
            .profits
            .as_ref()
            .ok_or_else(|| invalid("--profits is required with --format pairs"))?;
        parse_quantity_pairs(&text, &read(profits, "--profits")?)?
    } else {
        if args.profits.is_some() {
            return Err(invalid("--profits only applies to --format pairs"));
        }
        parse_spmf_utility(&text)?
    };

    let runs = args.bench.unwrap_or(1);
    let mut times = Vec::with_capacity(runs);
    let mut outcome = None;
    for _ in 0..runs {
        let (results, stats) = mine(&db, &params).map_err(|e| invalid(e.to_string()))?;
        times.push(stats.wall_time);
        outcome = Some((results, stats));
    }
    let (results, stats) = outcome.expect("at least one run");

    let mut report = Vec::new();
    write_results(&results, &stats, &mut report)?;
    if args.bench.is_some() {
        let (min, median) = min_median(&mut times);
        writeln!(
            report,
            "# BENCH: runs={runs} min_ms={:.3} median_ms={:.3}",
            min.as_secs_f64() * 1e3,
            median.as_secs_f64() * 1e3
        )
        .map_err(FormatError::from)?;
    }
    match &args.output {
        Some(path) => fs::write(path, &report).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("--output {}: {e}", path.display()),
        })?,
        None => stdout.write_all(&report).map_err(FormatError::from)?,
    }

    if args.oracle {
        let expected = brute_force_mine(&db, &params).map_err(|e| invalid(format!("--oracle: {e}")))?;
        let diff = diff_results(&results, &expected);
        if !diff.is_empty() {
            for line in &diff {
                let _ = writeln!(stderr, "oracle mismatch: {line}");
            }
            return Ok(EXIT_ORACLE_MISMATCH);
        }
    }
    Ok(EXIT_OK)
}

fn min_median(times: &mut [Duration]) -> (Duration, Duration) {
    times.sort_unstable();
    let n = times.len();
    let median = if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2
    };
    (times[0], median)
}

/// Differences between mined and reference patterns, one line each.
pub fn diff_results(got: &[PatternResult], expected: &[PatternResult]) -> Vec<String> {
    let key = |p: &PatternResult| p.itemset.clone();
    let mut diff = Vec::new();
    for e in expected {
        match got.iter().find(|g| key(g) == key(e)) {
            None => diff.push(format!("missing {:?}", e.itemset)),
            Some(g) => {
                if g.utility != e.utility || g.support != e.support || (g.kulc - e.kulc).abs() > 1e-9 {
                    diff.push(format!(
                        "{:?}: got util {} sup {} kulc {}, expected util {} sup {} kulc {}",
                        e.itemset, g.utility, g.support, g.kulc, e.utility, e.support, e.kulc
                    ));
                }
            }
        }
    }
    for g in got {
        if !expected.iter().any(|e| key(e) == key(g)) {
            diff.push(format!("unexpected {:?}", g.itemset));
        }
    }
    diff
}

fn generate(args: &GenArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let db = random_database(
        args.seed,
        args.items,
        args.transactions,
        args.max_qty,
        args.max_profit,
        args.density,
    )
    .map_err(|e| invalid(format!("gen: {e}")))?;

    let (data, profits) = match DatasetFormat::from(args.format) {
        DatasetFormat::QuantityPairs => {
            let (data, profits) = write_quantity_pairs(&db);
            (data, Some(profits))
        }
        DatasetFormat::SpmfUtility => (write_spmf_utility(&db), None),
    };
    if let Some(profits) = profits {
        let path = args
            .profits_output
            .as_ref()
            .ok_or_else(|| invalid("--profits-output is required with --format pairs"))?;
        write_file(path, &profits)?;
    }
    match &args.output {
        Some(path) => write_file(path, &data)?,
        None => stdout.write_all(data.as_bytes()).map_err(FormatError::from)?,
    }
    Ok(EXIT_OK)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })
}
