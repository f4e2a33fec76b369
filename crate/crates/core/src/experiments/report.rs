use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{bootstrap_mean_cis, mean, total_variation, ConfidenceInterval};
use super::trial::{run_trial, TrialRecord};
use crate::ensembles::{EnsembleSpec, Sampler, GENERATOR_ID};
use crate::error::{Error, Result};
use crate::pgroups::{hom_count, AbelianPGroup, Partition};
use crate::theory::{self, centered_rank_vector, CenteredRankVector, FluctuationParams};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Environment variable capping the number of worker threads.
pub const WORKERS_ENV: &str = "COKFLUCT_WORKERS";

/// `log k / n_•` above this draws a warning.
pub const LOG_K_OVER_N_WARNING: f64 = 0.25;

/// What to measure in a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub trials: u64,
    /// Types `μ` of the test groups `G_μ` for Hom-moments.
    #[serde(default)]
    pub groups: Vec<Partition>,
    /// Exponents `λ` of the moments `E p^{⟨centered, λ⟩}`.
    #[serde(default)]
    pub lambdas: Vec<Partition>,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default = "default_resamples")]
    pub bootstrap_resamples: usize,
    /// Omit the timestamp so repeated runs give identical bytes.
    #[serde(default)]
    pub reproducible: bool,
}

fn default_d() -> usize {
    3
}

fn default_resamples() -> usize {
    1000
}

impl ExperimentConfig {
    pub fn new(trials: u64) -> Self {
        ExperimentConfig {
            trials,
            groups: Vec::new(),
            lambdas: Vec::new(),
            d: default_d(),
            workers: None,
            bootstrap_resamples: default_resamples(),
            reproducible: true,
        }
    }

    pub fn with_groups(mut self, groups: Vec<Partition>) -> Self {
        self.groups = groups;
        self
    }

    pub fn with_lambdas(mut self, lambdas: Vec<Partition>) -> Self {
        self.lambdas = lambdas;
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

/// Threads to use: the request (or all cores), capped by `COKFLUCT_WORKERS`.
pub fn worker_budget(requested: Option<usize>) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut workers = requested.unwrap_or(available).max(1);
    if let Some(cap) = std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        workers = workers.min(cap.max(1));
    }
    workers
}

/// `|Hom(Γ (+) Z^r, G)| = |Hom(G_λ, G)| · |G|^r`.
pub fn hom_moment_of_trial(partition: &Partition, free_rank: usize, group: &AbelianPGroup) -> BigUint {
    hom_count(partition, group.lambda(), group.p()) * Pow::pow(group.order(), free_rank)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomMomentEstimate {
    pub group: Partition,
    pub group_name: String,
    pub ell: u32,
    pub trials_used: u64,
    /// Empirical `E|Hom(cok, G)|`.
    pub mean: f64,
    /// `mean / k^{ℓ(G)}`.
    pub rescaled: f64,
    /// Bootstrap interval for `rescaled`.
    pub ci: Option<ConfidenceInterval>,
    #[serde(with = "crate::theory::rational_string")]
    pub target: BigRational,
    pub target_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LMomentEstimate {
    pub lambda: Partition,
    pub trials_used: u64,
    /// Empirical `E p^{⟨centered, λ⟩}`.
    pub mean: f64,
    pub ci: Option<ConfidenceInterval>,
    #[serde(with = "crate::theory::rational_string")]
    pub target_exact: BigRational,
    pub target_scale: f64,
    pub target_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub vector: CenteredRankVector,
    pub count: u64,
    pub mass: f64,
}

/// Aggregated statistics of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub spec: EnsembleSpec,
    pub generator: String,
    pub trials: u64,
    pub d: usize,
    pub k: u64,
    pub centering: i64,
    pub epsilon: f64,
    pub log_k_over_n: f64,
    /// Trials with finite, exactly known Sylow subgroup.
    pub finite_count: u64,
    pub free_rank_count: u64,
    pub saturated_count: u64,
    /// Trials left out of the centered statistics (free rank or saturated).
    pub excluded_count: u64,
    pub precision_counts: BTreeMap<u32, u64>,
    pub bootstrap_resamples: usize,
    pub hom_moments: Vec<HomMomentEstimate>,
    pub l_moments: Vec<LMomentEstimate>,
    pub centered_histogram: Vec<HistogramBin>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl ExperimentReport {
    pub fn params(&self) -> Result<FluctuationParams> {
        FluctuationParams::new(self.spec.p, self.spec.zeta, self.d)
    }

    /// Centered-vector pmf.
    pub fn pmf(&self) -> BTreeMap<CenteredRankVector, f64> {
        self.centered_histogram.iter().map(|b| (b.vector.clone(), b.mass)).collect()
    }

    pub fn hom_moment(&self, group: &Partition) -> Option<&HomMomentEstimate> {
        self.hom_moments.iter().find(|h| &h.group == group)
    }

    pub fn l_moment(&self, lambda: &Partition) -> Option<&LMomentEstimate> {
        self.l_moments.iter().find(|l| &l.lambda == lambda)
    }
}

/// Runs every trial, in parallel up to the worker budget. Records are in trial order.
pub fn run_trials(spec: &EnsembleSpec, trials: u64, workers: Option<usize>) -> Result<Vec<TrialRecord>> {
    let sampler = Sampler::new(spec)?;
    let workers = worker_budget(workers);
    if workers == 1 {
        return (0..trials).map(|t| run_trial(&sampler, t)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(|t| run_trial(&sampler, t)).collect())
}

/// Samples, eliminates and aggregates.
pub fn run_experiment(spec: &EnsembleSpec, config: &ExperimentConfig) -> Result<ExperimentReport> {
    check_config(spec, config)?;
    let records = run_trials(spec, config.trials, config.workers)?;
    aggregate(spec, config, &records)
}

fn check_config(spec: &EnsembleSpec, config: &ExperimentConfig) -> Result<()> {
    spec.validate()?;
    FluctuationParams::new(spec.p, spec.zeta, config.d)?;
    if let Some(l) = config.lambdas.iter().find(|l| l.len() > config.d) {
        return Err(Error::TooManyParts { lambda: l.to_string(), d: config.d });
    }
    Ok(())
}

/// Builds the report from trial records; the result does not depend on record order.
pub fn aggregate(spec: &EnsembleSpec, config: &ExperimentConfig, records: &[TrialRecord]) -> Result<ExperimentReport> {
    check_config(spec, config)?;
    let params = FluctuationParams::new(spec.p, spec.zeta, config.d)?;
    let mut records = records.to_vec();
    records.sort_by_key(|r| r.trial);
    let k = spec.k() as u64;
    let centering = theory::centering(k, &params);

    let usable: Vec<&TrialRecord> = records.iter().filter(|r| !r.saturated).collect();
    let finite: Vec<&TrialRecord> = records.iter().filter(|r| r.is_finite()).collect();
    let saturated_count = records.iter().filter(|r| r.saturated).count() as u64;
    let free_rank_count = records.iter().filter(|r| !r.saturated && r.free_rank > 0).count() as u64;

    let groups: Vec<AbelianPGroup> =
        config.groups.iter().map(|g| AbelianPGroup::new(spec.p, g.clone())).collect::<Result<_>>()?;
    let hom_series: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            usable
                .iter()
                .map(|r| hom_moment_of_trial(&r.partition, r.free_rank, g).to_f64().unwrap_or(f64::INFINITY))
                .collect()
        })
        .collect();

    let centered: Vec<CenteredRankVector> = finite
        .iter()
        .map(|r| centered_rank_vector(&r.partition, 0, k, &params))
        .collect::<Result<_>>()?;
    let l_series: Vec<Vec<f64>> = config
        .lambdas
        .iter()
        .map(|l| centered.iter().map(|c| theory::p_power(spec.p, c.pairing(l))).collect())
        .collect();

    let mut rng = ChaCha20Rng::seed_from_u64(spec.master_seed);
    rng.set_stream(u64::MAX);
    let hom_cis = bootstrap_mean_cis(&hom_series, config.bootstrap_resamples, &mut rng);
    let l_cis = bootstrap_mean_cis(&l_series, config.bootstrap_resamples, &mut rng);

    let mut hom_moments = Vec::with_capacity(groups.len());
    for ((g, series), ci) in groups.iter().zip(&hom_series).zip(hom_cis) {
        let scale = (k as f64).powi(g.ell() as i32);
        let target = theory::limit_rescaled_hom_moment(g)?;
        let m = mean(series);
        hom_moments.push(HomMomentEstimate {
            group: g.lambda().clone(),
            group_name: g.to_string(),
            ell: g.ell(),
            trials_used: series.len() as u64,
            mean: m,
            rescaled: m / scale,
            ci: ci.map(|c| c.scaled(1.0 / scale)),
            target_value: target.to_f64().unwrap_or(f64::NAN),
            target,
        });
    }

    let mut l_moments = Vec::with_capacity(config.lambdas.len());
    for ((lambda, series), ci) in config.lambdas.iter().zip(&l_series).zip(l_cis) {
        let target = theory::l_moment(lambda, &params)?;
        l_moments.push(LMomentEstimate {
            lambda: lambda.clone(),
            trials_used: series.len() as u64,
            mean: mean(series),
            ci,
            target_value: target.value(),
            target_scale: target.scale,
            target_exact: target.exact,
        });
    }

    let mut counts: BTreeMap<CenteredRankVector, u64> = BTreeMap::new();
    for c in centered {
        *counts.entry(c).or_insert(0) += 1;
    }
    let total = finite.len() as f64;
    let centered_histogram = counts
        .into_iter()
        .map(|(vector, count)| HistogramBin { vector, count, mass: count as f64 / total })
        .collect();

    let mut precision_counts = BTreeMap::new();
    for r in &records {
        *precision_counts.entry(r.precision_used).or_insert(0) += 1;
    }

    let mut warnings = Vec::new();
    if spec.log_k_over_n() > LOG_K_OVER_N_WARNING {
        warnings.push(format!(
            "log k / n = {:.3} exceeds {LOG_K_OVER_N_WARNING}; blocks may be too small for k = {k}",
            spec.log_k_over_n()
        ));
    }

    Ok(ExperimentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        spec: spec.clone(),
        generator: GENERATOR_ID.to_string(),
        trials: records.len() as u64,
        d: config.d,
        k,
        centering,
        epsilon: spec.epsilon(),
        log_k_over_n: spec.log_k_over_n(),
        finite_count: finite.len() as u64,
        free_rank_count,
        saturated_count,
        excluded_count: records.len() as u64 - finite.len() as u64,
        precision_counts,
        bootstrap_resamples: config.bootstrap_resamples,
        hom_moments,
        l_moments,
        centered_histogram,
        warnings,
        timestamp: (!config.reproducible).then(unix_timestamp),
    })
}

fn unix_timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    format!("unix:{secs}")
}

/// Gap between two reports' moments for one `λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentGap {
    pub lambda: Partition,
    pub mean_a: f64,
    pub mean_b: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub tv_distance: f64,
    pub support_size: usize,
    pub moment_gaps: Vec<MomentGap>,
}

/// Total variation distance between the centered pmfs and per-`λ` moment gaps.
pub fn compare_ensembles(a: &ExperimentReport, b: &ExperimentReport) -> Result<Comparison> {
    if a.spec.p != b.spec.p || a.d != b.d || a.spec.zeta != b.spec.zeta {
        return Err(Error::Mismatch(format!(
            "reports differ in (p, d, zeta): ({}, {}, {}) vs ({}, {}, {})",
            a.spec.p, a.d, a.spec.zeta, b.spec.p, b.d, b.spec.zeta
        )));
    }
    let (pa, pb) = (a.pmf(), b.pmf());
    let support_size = pa.keys().chain(pb.keys()).collect::<std::collections::BTreeSet<_>>().len();
    let moment_gaps = a
        .l_moments
        .iter()
        .filter_map(|la| {
            b.l_moment(&la.lambda).map(|lb| MomentGap {
                lambda: la.lambda.clone(),
                mean_a: la.mean,
                mean_b: lb.mean,
                gap: (la.mean - lb.mean).abs(),
            })
        })
        .collect();
    Ok(Comparison { tv_distance: total_variation(&pa, &pb), support_size, moment_gaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EntryDistribution, Layout};

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hom_moment_examples() {
        let z2 = AbelianPGroup::cyclic(2, 1).unwrap();
        assert_eq!(hom_moment_of_trial(&part(&[1]), 0, &z2), BigUint::from(2u32));
        assert_eq!(hom_moment_of_trial(&part(&[]), 1, &z2), BigUint::from(2u32));
        let z4 = AbelianPGroup::cyclic(2, 2).unwrap();
        assert_eq!(hom_moment_of_trial(&part(&[2, 1]), 0, &z4), BigUint::from(8u32));
    }

    fn small_spec() -> EnsembleSpec {
        EnsembleSpec::new(2, Layout::MatrixProduct { n: 1, k: 1 }, 42).with_a(EntryDistribution::UniformMod { modulus: 2 })
    }

    #[test]
    fn zero_trials() {
        let config = ExperimentConfig::new(0).with_groups(vec![part(&[1])]).with_lambdas(vec![part(&[1])]);
        let r = run_experiment(&small_spec(), &config).unwrap();
        assert_eq!((r.trials, r.finite_count, r.excluded_count), (0, 0, 0));
        assert!(r.centered_histogram.is_empty());
        assert!(r.hom_moments[0].ci.is_none());
    }

    #[test]
    fn single_entry_hom_moment() {
        let config = ExperimentConfig::new(20_000).with_groups(vec![part(&[1])]).with_d(1);
        let r = run_experiment(&small_spec(), &config).unwrap();
        let h = &r.hom_moments[0];
        assert!((h.rescaled - 1.5).abs() < 0.02, "{}", h.rescaled);
        assert!(h.ci.unwrap().contains(h.rescaled));
        assert_eq!(r.finite_count + r.excluded_count, r.trials);
        let mass: f64 = r.centered_histogram.iter().map(|b| b.mass).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn aggregation_ignores_record_order() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(3, 4), 9);
        let config = ExperimentConfig::new(40).with_groups(vec![part(&[1])]).with_lambdas(vec![part(&[1])]).with_d(2);
        let mut records = run_trials(&spec, 40, Some(1)).unwrap();
        let forward = aggregate(&spec, &config, &records).unwrap();
        records.reverse();
        records.swap(3, 17);
        assert_eq!(aggregate(&spec, &config, &records).unwrap(), forward);
    }

    #[test]
    fn comparison_rules() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(3, 4), 9);
        let config = ExperimentConfig::new(30).with_lambdas(vec![part(&[1])]).with_d(1);
        let r = run_experiment(&spec, &config).unwrap();
        let c = compare_ensembles(&r, &r).unwrap();
        assert_eq!(c.tv_distance, 0.0);
        assert_eq!(c.moment_gaps[0].gap, 0.0);
        let mut other = r.clone();
        other.d = 2;
        assert!(matches!(compare_ensembles(&r, &other), Err(Error::Mismatch(_))));
    }
}
