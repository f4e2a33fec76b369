use std::collections::BTreeMap;

use rand::distributions::{Bernoulli, Distribution, Uniform, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of a single integer matrix entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryDistribution {
    /// Uniform on `{0, 1, ..., modulus - 1}`.
    UniformMod { modulus: u64 },
    /// `1` with probability `q`, else `0`.
    Bernoulli { q: f64 },
    /// Uniform on the integers in `[low, high]`.
    UniformRange { low: i64, high: i64 },
    /// `(value, weight)` pairs; weights are normalized.
    FiniteSupport { support: Vec<(i64, f64)> },
    Constant { value: i64 },
}

impl Default for EntryDistribution {
    fn default() -> Self {
        EntryDistribution::UniformRange { low: -100, high: 100 }
    }
}

impl EntryDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            EntryDistribution::UniformMod { modulus } => {
                if *modulus == 0 || *modulus > i64::MAX as u64 {
                    return Err(Error::Config(format!("uniform_mod modulus must be in [1, 2^63), got {modulus}")));
                }
            }
            EntryDistribution::Bernoulli { q } => {
                if !(0.0..=1.0).contains(q) {
                    return Err(Error::Config(format!("bernoulli q must be in [0, 1], got {q}")));
                }
            }
            EntryDistribution::UniformRange { low, high } => {
                if low > high {
                    return Err(Error::Config(format!("uniform_range needs low <= high, got [{low}, {high}]")));
                }
            }
            EntryDistribution::FiniteSupport { support } => {
                if support.is_empty() {
                    return Err(Error::Config("finite_support needs at least one value".into()));
                }
                if let Some((v, w)) = support.iter().find(|(_, w)| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::Config(format!("finite_support weight for {v} must be positive, got {w}")));
                }
            }
            EntryDistribution::Constant { .. } => {}
        }
        Ok(())
    }

    /// `P(X ≡ r mod p)` for every residue with positive mass.
    pub fn residue_masses(&self, p: u64) -> BTreeMap<u64, f64> {
        let residue = |x: i64| x.rem_euclid(p as i64) as u64;
        let mut out = BTreeMap::new();
        match self {
            EntryDistribution::UniformMod { modulus } => {
                return residue_counts(0, *modulus as i128 - 1, p);
            }
            EntryDistribution::UniformRange { low, high } => {
                return residue_counts(*low as i128, *high as i128, p);
            }
            EntryDistribution::Bernoulli { q } => {
                *out.entry(residue(1)).or_insert(0.0) += q;
                *out.entry(0).or_insert(0.0) += 1.0 - q;
            }
            EntryDistribution::FiniteSupport { support } => {
                let total: f64 = support.iter().map(|(_, w)| w).sum();
                for &(v, w) in support {
                    *out.entry(residue(v)).or_insert(0.0) += w / total;
                }
            }
            EntryDistribution::Constant { value } => {
                out.insert(residue(*value), 1.0);
            }
        }
        out.retain(|_, m| *m > 0.0);
        out
    }

    /// `max_r P(X ≡ r mod p)`.
    pub fn max_residue_mass(&self, p: u64) -> f64 {
        let uniform_max = |len: i128| (len + p as i128 - 1) / p as i128;
        match self {
            EntryDistribution::UniformMod { modulus } => {
                let len = *modulus as i128;
                uniform_max(len) as f64 / len as f64
            }
            EntryDistribution::UniformRange { low, high } => {
                let len = range_len(*low as i128, *high as i128);
                uniform_max(len) as f64 / len as f64
            }
            _ => self.residue_masses(p).values().copied().fold(0.0, f64::max),
        }
    }

    /// Largest `ε` with `P(X ≡ r mod p) <= 1 - ε` for every residue `r`.
    pub fn balancedness(&self, p: u64) -> f64 {
        (1.0 - self.max_residue_mass(p)).max(0.0)
    }

    /// Whether the distribution is `({p}, ε)`-balanced for some `ε > 0`, i.e. not
    /// constant mod `p`.
    pub fn is_balanced(&self, p: u64) -> bool {
        match self {
            EntryDistribution::UniformMod { modulus } => *modulus > 1,
            EntryDistribution::UniformRange { low, high } => high > low,
            _ => self.residue_masses(p).len() > 1,
        }
    }

    /// Probability mass function on integers, for finite-support kinds; `None` for
    /// ranges wider than `max_support`.
    pub fn pmf(&self, max_support: u64) -> Option<Vec<(i64, f64)>> {
        match self {
            EntryDistribution::UniformMod { modulus } if *modulus <= max_support => {
                Some((0..*modulus as i64).map(|v| (v, 1.0 / *modulus as f64)).collect())
            }
            EntryDistribution::UniformRange { low, high } if range_len(*low as i128, *high as i128) <= max_support as i128 => {
                let len = range_len(*low as i128, *high as i128) as f64;
                Some((*low..=*high).map(|v| (v, 1.0 / len)).collect())
            }
            EntryDistribution::Bernoulli { q } => Some(vec![(0, 1.0 - q), (1, *q)]),
            EntryDistribution::FiniteSupport { support } => {
                let total: f64 = support.iter().map(|(_, w)| w).sum();
                Some(support.iter().map(|&(v, w)| (v, w / total)).collect())
            }
            EntryDistribution::Constant { value } => Some(vec![(*value, 1.0)]),
            _ => None,
        }
    }

    pub(crate) fn sampler(&self) -> Result<EntrySampler> {
        self.validate()?;
        Ok(match self {
            EntryDistribution::UniformMod { modulus } => EntrySampler::Uniform(Uniform::new_inclusive(0, *modulus as i64 - 1)),
            EntryDistribution::UniformRange { low, high } => EntrySampler::Uniform(Uniform::new_inclusive(*low, *high)),
            EntryDistribution::Bernoulli { q } => {
                EntrySampler::Bernoulli(Bernoulli::new(*q).map_err(|e| Error::Config(e.to_string()))?)
            }
            EntryDistribution::FiniteSupport { support } => {
                let index = WeightedIndex::new(support.iter().map(|(_, w)| *w)).map_err(|e| Error::Config(e.to_string()))?;
                EntrySampler::Weighted { values: support.iter().map(|(v, _)| *v).collect(), index }
            }
            EntryDistribution::Constant { value } => EntrySampler::Constant(*value),
        })
    }
}

/// Residue masses of the uniform law on `[low, high]`, by counting. Iterates over
/// `min(len, p)` residues.
fn residue_counts(low: i128, high: i128, p: u64) -> BTreeMap<u64, f64> {
    let len = high - low + 1;
    let p = p as i128;
    let (q, extra) = (len / p, len % p);
    // Residues of low, low+1, ..., low+extra-1 get one element more than the rest.
    (0..len.min(p))
        .map(|j| ((low + j).rem_euclid(p) as u64, (q + i128::from(j < extra)) as f64 / len as f64))
        .collect()
}

fn range_len(low: i128, high: i128) -> i128 {
    high - low + 1
}

/// Prepared sampler; draws are independent of any modulus.
#[derive(Clone, Debug)]
pub(crate) enum EntrySampler {
    Uniform(Uniform<i64>),
    Bernoulli(Bernoulli),
    Weighted { values: Vec<i64>, index: WeightedIndex<f64> },
    Constant(i64),
}

impl EntrySampler {
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        match self {
            EntrySampler::Uniform(u) => u.sample(rng),
            EntrySampler::Bernoulli(b) => i64::from(b.sample(rng)),
            EntrySampler::Weighted { values, index } => values[index.sample(rng)],
            EntrySampler::Constant(v) => *v,
        }
    }

    pub(crate) fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [i64]) {
        if let EntrySampler::Constant(v) = self {
            out.fill(*v);
            return;
        }
        for x in out {
            *x = self.sample(rng);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balancedness_values() {
        let u = EntryDistribution::UniformMod { modulus: 4 };
        assert_eq!(u.balancedness(2), 0.5);
        let r = EntryDistribution::UniformRange { low: -100, high: 100 };
        assert!((r.balancedness(2) - (1.0 - 101.0 / 201.0)).abs() < 1e-15);
        assert_eq!(EntryDistribution::Constant { value: 4 }.balancedness(2), 0.0);
        assert!(!EntryDistribution::Constant { value: 4 }.is_balanced(2));
        let b = EntryDistribution::Bernoulli { q: 0.3 };
        assert!((b.balancedness(2) - 0.3).abs() < 1e-15);
        assert!(EntryDistribution::UniformMod { modulus: 3 }.is_balanced(3));
        let f = EntryDistribution::FiniteSupport { support: vec![(0, 1.0), (2, 1.0)] };
        assert!(!f.is_balanced(2));
        assert!(f.is_balanced(3));
    }

    #[test]
    fn validation() {
        assert!(EntryDistribution::Bernoulli { q: 1.5 }.validate().is_err());
        assert!(EntryDistribution::UniformRange { low: 2, high: 1 }.validate().is_err());
        assert!(EntryDistribution::FiniteSupport { support: vec![(1, 0.0)] }.validate().is_err());
        assert!(EntryDistribution::UniformMod { modulus: 0 }.validate().is_err());
    }

    #[test]
    fn serde_shape() {
        let d: EntryDistribution = serde_json::from_str(r#"{"kind":"uniform_range","low":-3,"high":3}"#).unwrap();
        assert_eq!(d, EntryDistribution::UniformRange { low: -3, high: 3 });
        let s = serde_json::to_string(&EntryDistribution::Constant { value: 1 }).unwrap();
        assert_eq!(s, r#"{"kind":"constant","value":1}"#);
    }
}
