use serde::{Deserialize, Serialize};

use crate::ensembles::{BlockSample, FactorSample, Layout, Sampler};
use crate::error::Result;
use crate::exact_linalg::{padic_valuations, streaming_block_eliminate, DivisorValuations, Modulus};
use crate::pgroups::Partition;

/// Precision is doubled on saturation until it would exceed this cap.
pub const MAX_PRECISION: u32 = 256;

/// Two primes near `2^62` used to detect free rank (corank over `Q`).
pub const RANK_PRIMES: [u64; 2] = [(1 << 61) - 1, 4_611_686_018_427_387_847];

/// Outcome of one sampled matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Sylow type; for saturated trials only the valuations below `precision_used`.
    pub partition: Partition,
    pub free_rank: usize,
    /// Some valuation is only known to be at least `precision_used`.
    pub saturated: bool,
    pub precision_used: u32,
}

impl TrialRecord {
    /// Finite Sylow subgroup known exactly.
    pub fn is_finite(&self) -> bool {
        !self.saturated && self.free_rank == 0
    }
}

enum Sample {
    Blocks(BlockSample),
    Factors(FactorSample),
}

impl Sample {
    fn dim(&self) -> usize {
        match self {
            Sample::Blocks(b) => b.dim(),
            Sample::Factors(f) => f.n(),
        }
    }

    fn valuations(&self, modulus: Modulus) -> DivisorValuations {
        match self {
            Sample::Blocks(b) => streaming_block_eliminate(&b.to_block_matrix(modulus)),
            Sample::Factors(f) => padic_valuations(&f.product(modulus)),
        }
    }

    /// Corank modulo each of the rank primes, minimized: an upper bound on the corank
    /// over `Q`, exact unless both primes divide every maximal nonvanishing minor.
    fn free_rank_estimate(&self) -> Result<usize> {
        let mut best = usize::MAX;
        for q in RANK_PRIMES {
            let rank = self.valuations(Modulus::new(q, 1)?).unit_count;
            best = best.min(self.dim() - rank);
        }
        Ok(best)
    }
}

/// Samples trial `trial` and extracts its Sylow type, escalating precision while the
/// number of vanishing pivots exceeds the free rank.
pub fn run_trial(sampler: &Sampler, trial: u64) -> Result<TrialRecord> {
    let spec = sampler.spec();
    let sample = match spec.layout {
        Layout::MatrixProduct { .. } => Sample::Factors(sampler.factors(trial)?),
        _ => Sample::Blocks(sampler.blocks(trial)?),
    };
    let free_rank = sample.free_rank_estimate()?;
    let mut precision = spec.initial_precision();
    loop {
        let vals = sample.valuations(Modulus::new(spec.p, precision)?);
        if vals.saturated_count <= free_rank {
            return Ok(TrialRecord {
                trial,
                partition: vals.partition(),
                free_rank: vals.saturated_count,
                saturated: false,
                precision_used: precision,
            });
        }
        if precision >= MAX_PRECISION {
            return Ok(TrialRecord {
                trial,
                partition: vals.partition(),
                free_rank,
                saturated: true,
                precision_used: precision,
            });
        }
        precision = (precision * 2).min(MAX_PRECISION);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EnsembleSpec, EntryDistribution};
    use crate::exact_linalg::cokernel_partition;

    #[test]
    fn matches_exact_snf() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(3, 4), 3)
            .with_a(EntryDistribution::UniformRange { low: -3, high: 3 })
            .with_precision(2);
        let sampler = Sampler::new(&spec).unwrap();
        for t in 0..20 {
            let rec = run_trial(&sampler, t).unwrap();
            let exact = cokernel_partition(&sampler.blocks(t).unwrap().to_int_matrix(), 2);
            assert_eq!((rec.partition.clone(), rec.free_rank), (exact.partition, exact.free_rank), "trial {t}");
            assert!(!rec.saturated);
        }
    }

    #[test]
    fn singular_trials_report_free_rank() {
        let spec = EnsembleSpec::new(2, Layout::MatrixProduct { n: 1, k: 1 }, 0)
            .with_a(EntryDistribution::UniformMod { modulus: 2 });
        let sampler = Sampler::new(&spec).unwrap();
        for t in 0..10 {
            let rec = run_trial(&sampler, t).unwrap();
            let entry = sampler.factors(t).unwrap().factors()[0][0];
            assert_eq!(rec.free_rank, usize::from(entry == 0));
            assert!(rec.partition.is_empty());
        }
    }
}
