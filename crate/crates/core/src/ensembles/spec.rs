use serde::{Deserialize, Serialize};

use super::EntryDistribution;
use crate::error::{Error, Result};

/// Shape of the random matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// `C = A + B` with block sizes `n_1, ..., n_k`: `A` lives on the diagonal and
    /// subdiagonal blocks, `B` strictly below the subdiagonal.
    BlockTriangular { block_sizes: Vec<usize> },
    /// `A_1 A_2 ... A_k` of iid `n x n` factors.
    MatrixProduct { n: usize, k: usize },
    /// The `nk x nk` block bidiagonal matrix with `A_i` on the diagonal and `I` below it.
    BidiagonalEmbedding { n: usize, k: usize },
}

impl Layout {
    /// `k` blocks of equal size `n`.
    pub fn constant_blocks(n: usize, k: usize) -> Self {
        Layout::BlockTriangular { block_sizes: vec![n; k] }
    }

    /// `n_i = n + (i mod 3)`, for exercising unequal block sizes.
    pub fn cycling_blocks(n: usize, k: usize) -> Self {
        Layout::BlockTriangular { block_sizes: (0..k).map(|i| n + i % 3).collect() }
    }

    /// Number of blocks or factors.
    pub fn k(&self) -> usize {
        match self {
            Layout::BlockTriangular { block_sizes } => block_sizes.len(),
            Layout::MatrixProduct { k, .. } | Layout::BidiagonalEmbedding { k, .. } => *k,
        }
    }

    /// Smallest block size `n_•` (the factor size for products).
    pub fn min_block(&self) -> usize {
        match self {
            Layout::BlockTriangular { block_sizes } => block_sizes.iter().copied().min().unwrap_or(0),
            Layout::MatrixProduct { n, .. } | Layout::BidiagonalEmbedding { n, .. } => *n,
        }
    }

    /// Side length of the matrix whose cokernel is measured.
    pub fn dim(&self) -> usize {
        match self {
            Layout::BlockTriangular { block_sizes } => block_sizes.iter().sum(),
            Layout::MatrixProduct { n, .. } => *n,
            Layout::BidiagonalEmbedding { n, k } => n * k,
        }
    }

    /// Block sizes of the block lower triangular form (the embedding has `k` blocks of `n`).
    pub fn block_sizes(&self) -> Option<Vec<usize>> {
        match self {
            Layout::BlockTriangular { block_sizes } => Some(block_sizes.clone()),
            Layout::BidiagonalEmbedding { n, k } => Some(vec![*n; *k]),
            Layout::MatrixProduct { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Layout::BlockTriangular { .. } => "block_triangular",
            Layout::MatrixProduct { .. } => "matrix_product",
            Layout::BidiagonalEmbedding { .. } => "bidiagonal_embedding",
        }
    }
}

/// Full description of a random matrix ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub p: u64,
    pub layout: Layout,
    /// Entries of the `A` blocks (or of the factors).
    pub a_dist: EntryDistribution,
    /// Entries of the `B` blocks; ignored outside the block triangular layout.
    #[serde(default)]
    pub b_dist: EntryDistribution,
    pub master_seed: u64,
    /// Starting `p`-adic precision; the default policy is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Target fractional offset `ζ`, used for centering.
    #[serde(default)]
    pub zeta: f64,
    /// Optional lower bound on the balancedness of `a_dist`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_epsilon: Option<f64>,
}

impl EnsembleSpec {
    /// Spec with default entry laws: `A` and `B` uniform on `[-100, 100]`, `ζ = 0`.
    pub fn new(p: u64, layout: Layout, master_seed: u64) -> Self {
        EnsembleSpec {
            p,
            layout,
            a_dist: EntryDistribution::default(),
            b_dist: EntryDistribution::default(),
            master_seed,
            precision: None,
            zeta: 0.0,
            min_epsilon: None,
        }
    }

    pub fn with_a(mut self, a: EntryDistribution) -> Self {
        self.a_dist = a;
        self
    }

    pub fn with_b(mut self, b: EntryDistribution) -> Self {
        self.b_dist = b;
        self
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = Some(precision);
        self
    }

    pub fn k(&self) -> usize {
        self.layout.k()
    }

    /// Certified balancedness `ε = 1 - max_r P(X ≡ r mod p)` of the `A` entries.
    pub fn epsilon(&self) -> f64 {
        self.a_dist.balancedness(self.p)
    }

    /// Starting precision: the configured one, or `max(16, ⌈log_p k⌉ + 8)`.
    pub fn initial_precision(&self) -> u32 {
        self.precision.unwrap_or_else(|| default_precision(self.p, self.k() as u64))
    }

    /// `log k / n_•`, which should be small.
    pub fn log_k_over_n(&self) -> f64 {
        (self.k() as f64).ln() / self.layout.min_block() as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        match &self.layout {
            Layout::BlockTriangular { block_sizes } => {
                if block_sizes.is_empty() || block_sizes.contains(&0) {
                    return Err(Error::Config(format!("block sizes must be positive and nonempty, got {block_sizes:?}")));
                }
            }
            Layout::MatrixProduct { n, k } | Layout::BidiagonalEmbedding { n, k } => {
                if *n == 0 || *k == 0 {
                    return Err(Error::Config(format!("n and k must be positive, got n = {n}, k = {k}")));
                }
            }
        }
        self.a_dist.validate()?;
        self.b_dist.validate()?;
        if !self.a_dist.is_balanced(self.p) {
            return Err(Error::Config(format!(
                "a_dist {:?} is constant mod {}; the A entries must be balanced (assumption A.3)",
                self.a_dist, self.p
            )));
        }
        if let Some(min) = self.min_epsilon {
            let eps = self.epsilon();
            if eps < min {
                return Err(Error::Config(format!(
                    "a_dist is only ({}, {eps})-balanced, below the required {min} (assumption A.3)",
                    self.p
                )));
            }
        }
        if self.precision == Some(0) {
            return Err(Error::Config("precision must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.zeta) {
            return Err(Error::Config(format!("zeta must lie in [0, 1), got {}", self.zeta)));
        }
        Ok(())
    }
}

/// `max(16, ⌈log_p k⌉ + 8)`.
pub fn default_precision(p: u64, k: u64) -> u32 {
    let mut ceil_log = 0u32;
    let mut power = 1u128;
    while power < u128::from(k) {
        power *= u128::from(p);
        ceil_log += 1;
    }
    (ceil_log + 8).max(16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_precision_policy() {
        assert_eq!(default_precision(2, 16), 16);
        assert_eq!(default_precision(2, 1 << 10), 18);
        assert_eq!(default_precision(2, 1025), 19);
        assert_eq!(default_precision(3, 1), 16);
    }

    #[test]
    fn validation_names_balancedness() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(2, 2), 1).with_a(EntryDistribution::Constant { value: 0 });
        let err = spec.validate().unwrap_err().to_string();
        assert!(err.contains("A.3"), "{err}");
        assert!(EnsembleSpec::new(4, Layout::constant_blocks(2, 2), 1).validate().is_err());
        assert!(EnsembleSpec::new(2, Layout::constant_blocks(2, 2), 1).validate().is_ok());
        let mut strict = EnsembleSpec::new(2, Layout::MatrixProduct { n: 3, k: 2 }, 1);
        strict.min_epsilon = Some(0.6);
        assert!(strict.validate().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let spec = EnsembleSpec::new(3, Layout::cycling_blocks(4, 5), 99).with_b(EntryDistribution::Constant { value: 1 });
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<EnsembleSpec>(&json).unwrap(), spec);
        let minimal: EnsembleSpec = serde_json::from_str(
            r#"{"p":2,"layout":{"kind":"matrix_product","n":3,"k":2},"a_dist":{"kind":"bernoulli","q":0.5},"master_seed":7}"#,
        )
        .unwrap();
        assert_eq!(minimal.b_dist, EntryDistribution::default());
        assert_eq!(minimal.layout.dim(), 3);
    }
}
