//! Trial orchestration: seeded schedule construction, algorithm dispatch,
//! and a deterministic worker pool.

use baro_core::adversary::build_schedule;
use baro_core::algo::{self, Trace};
use baro_core::diagnostics::{
    competitive_ratio, occupation_profile, rank_profile, OccupationProfile, RankProfile,
    RatioReport,
};

use crate::config::{AlgorithmChoice, ResolvedExperiment};
use crate::CliError;

/// Run one trial. Trial `i` permutes with seed `base_seed + i`.
pub fn run_trial(exp: &ResolvedExperiment, trial: usize) -> Result<Trace, CliError> {
    let seed = exp.base_seed.wrapping_add(trial as u64);
    let schedule =
        build_schedule(&exp.pool, &exp.params, &exp.strategy, seed).map_err(CliError::from_core)?;
    let trace = match (exp.algorithm, &exp.adaptive) {
        (AlgorithmChoice::Baro, Some(rule)) => {
            algo::run_adaptive(&schedule, rule, exp.observation, &exp.constants)
        }
        (AlgorithmChoice::Baro, None) => algo::run(&schedule, &exp.constants),
        (AlgorithmChoice::Primal, _) => algo::run_baseline_primal(&schedule),
        (AlgorithmChoice::Topk, _) => algo::run_baseline_topk_filter(&schedule),
    }
    .map_err(CliError::from_core)?;
    trace
        .validate()
        .map_err(|msg| CliError::invariant(format!("trial {trial}: {msg}")))?;
    Ok(trace)
}

/// Run all trials on a small worker pool. Output order is by trial index
/// regardless of scheduling, so reports are bit-stable for any thread
/// count.
pub fn run_trials(exp: &ResolvedExperiment, threads: usize) -> Result<Vec<Trace>, CliError> {
    let trials = exp.trials;
    let threads = threads.clamp(1, trials.max(1));
    if threads == 1 {
        return (0..trials).map(|i| run_trial(exp, i)).collect();
    }
    let mut slots: Vec<Option<Result<Trace, CliError>>> = (0..trials).map(|_| None).collect();
    std::thread::scope(|scope| {
        let exp = &*exp;
        let mut handles = Vec::with_capacity(threads);
        for w in 0..threads {
            handles.push(scope.spawn(move || {
                (w..trials)
                    .step_by(threads)
                    .map(|i| (i, run_trial(exp, i)))
                    .collect::<Vec<_>>()
            }));
        }
        for h in handles {
            for (i, res) in h.join().expect("worker panicked") {
                slots[i] = Some(res);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every trial dispatched"))
        .collect()
}

/// Everything the summary report needs from one experiment.
pub struct ExperimentOutput {
    pub traces: Vec<Trace>,
    pub ratio: RatioReport,
    pub rank_profile: RankProfile,
    pub occupation: OccupationProfile,
}

pub fn run_experiment(
    exp: &ResolvedExperiment,
    threads: usize,
) -> Result<ExperimentOutput, CliError> {
    let traces = run_trials(exp, threads)?;
    let ratio = competitive_ratio(&traces, &exp.pool, exp.params.k());
    let rank_profile = rank_profile(&traces);
    let occupation = occupation_profile(&traces);
    Ok(ExperimentOutput {
        traces,
        ratio,
        rank_profile,
        occupation,
    })
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
