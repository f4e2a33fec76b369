//! Monte Carlo harness: per-trial Sylow types with precision escalation, aggregation
//! into Hom-moments, centered rank-vector moments and histograms, and cross-run
//! comparison.

mod report;
mod stats;
mod trial;

pub use report::{
    aggregate, compare_ensembles, hom_moment_of_trial, run_experiment, run_trials, worker_budget, Comparison,
    ExperimentConfig, ExperimentReport, HistogramBin, HomMomentEstimate, LMomentEstimate, MomentGap,
    LOG_K_OVER_N_WARNING, REPORT_SCHEMA_VERSION, WORKERS_ENV,
};
pub use stats::{bootstrap_mean_cis, mean, quantile_sorted, total_variation, ConfidenceInterval};
pub use trial::{run_trial, TrialRecord, MAX_PRECISION, RANK_PRIMES};
