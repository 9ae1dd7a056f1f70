//! Dataset formats and the command-line driver for the `coupm` miner.

pub mod cli;
pub mod format;

pub use cli::{run_cli, run_cli_with};
pub use format::{
    parse_quantity_pairs, parse_spmf_utility, write_quantity_pairs, write_results,
    write_spmf_utility, DatasetFormat, FormatError,
};
