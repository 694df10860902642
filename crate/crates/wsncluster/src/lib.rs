//! File formats, parallel execution and the command line for the
//! `wsncluster-core` simulator.
//!
//! A run reads a TOML scenario ([`config`]), executes paired LEACH/FCA trials
//! across threads ([`runner`]) and writes CSV tables plus the effective
//! config ([`output`]).

pub mod config;
pub mod output;
pub mod runner;

pub use config::{load_config, parse_config, to_toml, ConfigDocument, ConfigError};
pub use output::{emit_results, OutputBundle, OutputError};
pub use runner::run_scenario_parallel;
