//! Runs statistical trials on a rayon pool. Each trial derives its
//! randomness from `(seed, index)` and results are collected in index order,
//! so the worker count never changes a report.

use caqwbh_core::stats::{run_trial, TrialSet};
use caqwbh_core::HashParams;
use rayon::prelude::*;

use crate::{CliError, Result};

/// `jobs = None` uses rayon's default pool size.
pub fn run_trials(
    params: &HashParams,
    trials: usize,
    msg_len: usize,
    seed: u64,
    jobs: Option<usize>,
) -> Result<TrialSet> {
    let work = || {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| run_trial(params, msg_len, seed, i))
            .collect::<caqwbh_core::Result<Vec<_>>>()
    };
    let outcomes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    }?;
    Ok(TrialSet::from_outcomes(params.digest_bits(), outcomes)?)
}
