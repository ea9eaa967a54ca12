//! Multi-threaded Monte Carlo runner. Each replication owns its RNG stream,
//! so the output is identical to the serial runner in the core crate.

use asyncov_core::simulation::run_replication;
use asyncov_core::{EstimatorKind, McResult, SimConfig, TuningPolicy};
use rayon::prelude::*;

pub fn run_experiment_parallel(
    cfg: &SimConfig,
    estimators: &[EstimatorKind],
    policy: TuningPolicy,
) -> asyncov_core::Result<McResult> {
    cfg.validate()?;
    let per_rep: Vec<_> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, estimators, policy, rep))
        .collect::<Result<_, _>>()?;
    let records = per_rep.into_iter().flatten().collect();
    Ok(McResult::aggregate(*cfg, estimators, records))
}
