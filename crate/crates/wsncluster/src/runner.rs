//! Parallel trial execution.

use rayon::prelude::*;
use wsncluster_core::protocol::Protocol;
use wsncluster_core::sim::{aggregate, run_trial, AggregateResult};
use wsncluster_core::{InvalidParameter, ScenarioConfig, TrialResult};

/// Same result as [`wsncluster_core::run_scenario`], with trials spread over
/// the rayon pool. Trials are collected back in seed order before aggregation.
pub fn run_scenario_parallel(
    config: &ScenarioConfig,
    protocols: &[Protocol],
) -> Result<AggregateResult, InvalidParameter> {
    config.validate()?;
    if protocols.is_empty() {
        return Err(InvalidParameter {
            key: "protocol",
            reason: "no protocol selected".into(),
        });
    }
    let jobs: Vec<(Protocol, u64)> = protocols
        .iter()
        .flat_map(|&p| (0..config.trials).map(move |k| (p, config.seed(k))))
        .collect();
    let mut results: Vec<TrialResult> = jobs
        .par_iter()
        .map(|&(p, seed)| run_trial(config, p, seed))
        .collect();

    let mut grouped = Vec::with_capacity(protocols.len());
    for &p in protocols.iter().rev() {
        let trials = results.split_off(results.len() - config.trials);
        grouped.push((p, trials));
    }
    grouped.reverse();
    Ok(aggregate(grouped))
}
