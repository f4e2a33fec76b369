use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::distribution::EntrySampler;
use super::{EnsembleSpec, Layout};
use crate::error::{Error, Result};
use crate::exact_linalg::{BlockLowerMatrix, IntMatrix, Modulus, PadicMatrix};

/// Generator used for every trial; recorded in reports.
pub const GENERATOR_ID: &str =
    "ChaCha20 (rand_chacha 0.3): key = seed_from_u64(master_seed), stream = trial index, word position 0";

/// The random stream of one trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Integer entries of a block lower triangular sample, one strip per block row.
///
/// Strip `i` is `n_i x (n_1 + ... + n_i)`, row-major. Keeping integers means the same
/// sample can be reduced at any precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSample {
    sizes: Vec<usize>,
    strips: Vec<Vec<i64>>,
}

impl BlockSample {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn strips(&self) -> &[Vec<i64>] {
        &self.strips
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn to_block_matrix(&self, modulus: Modulus) -> BlockLowerMatrix {
        BlockLowerMatrix::from_integer_strips(modulus, &self.sizes, &self.strips)
    }

    pub fn to_padic(&self, modulus: Modulus) -> PadicMatrix {
        self.to_block_matrix(modulus).assemble()
    }

    /// Dense integer matrix, zeros above the block diagonal.
    pub fn to_int_matrix(&self) -> IntMatrix {
        let n = self.dim();
        let mut flat = vec![0i64; n * n];
        let mut off = 0;
        for (strip, &ni) in self.strips.iter().zip(&self.sizes) {
            let width = off + ni;
            for r in 0..ni {
                flat[(off + r) * n..(off + r) * n + width].copy_from_slice(&strip[r * width..(r + 1) * width]);
            }
            off += ni;
        }
        IntMatrix::from_i64(n, n, &flat).expect("square shape")
    }
}

/// Iid `n x n` integer factors `A_1, ..., A_k`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSample {
    n: usize,
    factors: Vec<Vec<i64>>,
}

impl FactorSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Vec<i64>] {
        &self.factors
    }

    pub fn to_padic(&self, modulus: Modulus) -> Vec<PadicMatrix> {
        self.factors
            .iter()
            .map(|f| PadicMatrix::from_i64(self.n, self.n, modulus, f).expect("square factor"))
            .collect()
    }

    pub fn to_int(&self) -> Vec<IntMatrix> {
        self.factors.iter().map(|f| IntMatrix::from_i64(self.n, self.n, f).expect("square factor")).collect()
    }

    /// `A_1 A_2 ... A_k` reduced modulo `p^N` after every multiplication.
    pub fn product(&self, modulus: Modulus) -> PadicMatrix {
        let mut factors = self.to_padic(modulus).into_iter();
        let first = factors.next().expect("at least one factor");
        factors.fold(first, |acc, f| acc.mul(&f).expect("equal sizes and modulus"))
    }

    /// The block bidiagonal embedding as strips: `I` at block `(i, i-1)`, `A_i` at `(i, i)`.
    pub fn embedding(&self) -> BlockSample {
        let n = self.n;
        let strips = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let width = (i + 1) * n;
                let mut strip = vec![0i64; n * width];
                for r in 0..n {
                    strip[r * width + i * n..r * width + i * n + n].copy_from_slice(&a[r * n..(r + 1) * n]);
                    if i > 0 {
                        strip[r * width + (i - 1) * n + r] = 1;
                    }
                }
                strip
            })
            .collect();
        BlockSample { sizes: vec![n; self.factors.len()], strips }
    }
}

/// Validated spec with prepared entry samplers.
#[derive(Clone, Debug)]
pub struct Sampler {
    spec: EnsembleSpec,
    a: EntrySampler,
    b: EntrySampler,
}

impl Sampler {
    pub fn new(spec: &EnsembleSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Sampler { spec: spec.clone(), a: spec.a_dist.sampler()?, b: spec.b_dist.sampler()? })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    /// Block sample of `C = A + B` (block triangular layout) or of the embedding.
    ///
    /// Draw order per block row `i`: `A_{i,i}`, then `A_{i,i-1}`, then `B_{i,j}` for
    /// `j = 0, ..., i-2`, each row-major.
    pub fn blocks(&self, trial: u64) -> Result<BlockSample> {
        match &self.spec.layout {
            Layout::BlockTriangular { block_sizes } => Ok(self.block_triangular(block_sizes, trial)),
            Layout::BidiagonalEmbedding { .. } => Ok(self.factors(trial)?.embedding()),
            Layout::MatrixProduct { .. } => {
                Err(Error::Config("the matrix_product layout has no block triangular form; use factors()".into()))
            }
        }
    }

    fn block_triangular(&self, sizes: &[usize], trial: u64) -> BlockSample {
        let mut rng = trial_rng(self.spec.master_seed, trial);
        let mut strips = Vec::with_capacity(sizes.len());
        let mut off = 0;
        let offsets: Vec<usize> = sizes
            .iter()
            .map(|&n| {
                let o = off;
                off += n;
                o
            })
            .collect();
        let mut block = Vec::new();
        for (i, &ni) in sizes.iter().enumerate() {
            let width = offsets[i] + ni;
            let mut strip = vec![0i64; ni * width];
            let put = |strip: &mut Vec<i64>, j: usize, sampler: &EntrySampler, block: &mut Vec<i64>, rng: &mut ChaCha20Rng| {
                let nj = sizes[j];
                block.resize(ni * nj, 0);
                sampler.fill(rng, block);
                for r in 0..ni {
                    strip[r * width + offsets[j]..r * width + offsets[j] + nj].copy_from_slice(&block[r * nj..(r + 1) * nj]);
                }
            };
            put(&mut strip, i, &self.a, &mut block, &mut rng);
            if i >= 1 {
                put(&mut strip, i - 1, &self.a, &mut block, &mut rng);
            }
            for j in 0..i.saturating_sub(1) {
                put(&mut strip, j, &self.b, &mut block, &mut rng);
            }
            strips.push(strip);
        }
        BlockSample { sizes: sizes.to_vec(), strips }
    }

    /// Factors `A_1, ..., A_k` of the product or embedding layouts, drawn in order.
    pub fn factors(&self, trial: u64) -> Result<FactorSample> {
        let (n, k) = match self.spec.layout {
            Layout::MatrixProduct { n, k } | Layout::BidiagonalEmbedding { n, k } => (n, k),
            Layout::BlockTriangular { .. } => {
                return Err(Error::Config("the block_triangular layout has no factors".into()));
            }
        };
        let mut rng = trial_rng(self.spec.master_seed, trial);
        let factors = (0..k)
            .map(|_| {
                let mut f = vec![0i64; n * n];
                self.a.fill(&mut rng, &mut f);
                f
            })
            .collect();
        Ok(FactorSample { n, factors })
    }
}

/// `C = A + B` for a block triangular spec, assembled and reduced at the spec's
/// starting precision.
pub fn sample_block_matrix(spec: &EnsembleSpec, trial: u64) -> Result<PadicMatrix> {
    let modulus = Modulus::new(spec.p, spec.initial_precision())?;
    Ok(Sampler::new(spec)?.blocks(trial)?.to_padic(modulus))
}

/// `A_1 ... A_k` for a product spec, reduced modulo `p^N` throughout.
pub fn sample_product(spec: &EnsembleSpec, trial: u64) -> Result<PadicMatrix> {
    let modulus = Modulus::new(spec.p, spec.initial_precision())?;
    Ok(Sampler::new(spec)?.factors(trial)?.product(modulus))
}

fn check_factors(sizes: impl Iterator<Item = (usize, usize)>) -> Result<usize> {
    let mut n = None;
    for (r, c) in sizes {
        if r != c || n.is_some_and(|m| m != r) {
            return Err(Error::Dimension("factors must be square of equal size".into()));
        }
        n = Some(r);
    }
    n.ok_or_else(|| Error::Dimension("no factors".into()))
}

/// The `nk x nk` matrix with `A_i` on the diagonal blocks and `I` on the subdiagonal.
pub fn build_bidiagonal_embedding(factors: &[PadicMatrix]) -> Result<PadicMatrix> {
    let n = check_factors(factors.iter().map(|f| (f.rows(), f.cols())))?;
    let modulus = factors[0].modulus();
    if factors.iter().any(|f| f.modulus() != modulus) {
        return Err(Error::Mismatch("factors over different residue rings".into()));
    }
    let k = factors.len();
    let size = n * k;
    let mut out = vec![num_bigint::BigUint::default(); size * size];
    for (i, f) in factors.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                out[(i * n + r) * size + i * n + c] = f.get(r, c);
            }
            if i > 0 {
                out[(i * n + r) * size + (i - 1) * n + r] = num_bigint::BigUint::from(1u32) % modulus.value();
            }
        }
    }
    PadicMatrix::from_residues(size, size, modulus, out)
}

/// Integer version of [`build_bidiagonal_embedding`].
pub fn build_bidiagonal_embedding_int(factors: &[IntMatrix]) -> Result<IntMatrix> {
    let n = check_factors(factors.iter().map(|f| (f.rows(), f.cols())))?;
    let size = n * factors.len();
    let mut out = IntMatrix::zeros(size, size);
    for (i, f) in factors.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                out.set(i * n + r, i * n + c, f.get(r, c).clone());
            }
            if i > 0 {
                out.set(i * n + r, (i - 1) * n + r, 1.into());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EntryDistribution;

    fn modulus() -> Modulus {
        Modulus::new(2, 16).unwrap()
    }

    #[test]
    fn single_block_is_a_alone() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(2, 1), 5);
        let s = Sampler::new(&spec).unwrap().blocks(0).unwrap();
        assert_eq!(s.strips().len(), 1);
        assert_eq!(s.strips()[0].len(), 4);
    }

    #[test]
    fn zero_pattern_with_zero_b() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(2, 3), 5)
            .with_a(EntryDistribution::UniformRange { low: 1, high: 9 })
            .with_b(EntryDistribution::Constant { value: 0 });
        let m = Sampler::new(&spec).unwrap().blocks(3).unwrap().to_int_matrix();
        for r in 0..6 {
            for c in 0..6 {
                let allowed = r / 2 == c / 2 || r / 2 == c / 2 + 1;
                assert_eq!(m.get(r, c) != &0.into(), allowed, "({r}, {c})");
            }
        }
    }

    #[test]
    fn deterministic_and_precision_independent() {
        let spec = EnsembleSpec::new(2, Layout::constant_blocks(3, 4), 11);
        let a = sample_block_matrix(&spec, 7).unwrap();
        assert_eq!(a, sample_block_matrix(&spec, 7).unwrap());
        assert_ne!(a, sample_block_matrix(&spec, 8).unwrap());
        let sampler = Sampler::new(&spec).unwrap();
        let low = sampler.blocks(7).unwrap().to_padic(Modulus::new(2, 8).unwrap());
        let high = sampler.blocks(7).unwrap().to_padic(Modulus::new(2, 40).unwrap());
        let m8 = num_bigint::BigUint::from(256u32);
        for (x, y) in low.entries().iter().zip(high.entries()) {
            assert_eq!(x, &(y % &m8));
        }
    }

    #[test]
    fn embedding_examples() {
        let m = modulus();
        let f = |x| PadicMatrix::from_i64(1, 1, m, &[x]).unwrap();
        assert_eq!(build_bidiagonal_embedding(&[f(2)]).unwrap().entries(), vec![2u32.into()]);
        let e = build_bidiagonal_embedding(&[f(2), f(3)]).unwrap();
        let expected: Vec<num_bigint::BigUint> = [2u32, 0, 1, 3].into_iter().map(Into::into).collect();
        assert_eq!(e.entries(), expected);
        let g = PadicMatrix::from_i64(2, 2, m, &[1, 0, 0, 1]).unwrap();
        assert!(build_bidiagonal_embedding(&[f(2), g]).is_err());
    }

    #[test]
    fn embedding_strips_match_dense_embedding() {
        let spec = EnsembleSpec::new(2, Layout::BidiagonalEmbedding { n: 3, k: 4 }, 2);
        let sampler = Sampler::new(&spec).unwrap();
        let factors = sampler.factors(1).unwrap();
        let dense = build_bidiagonal_embedding(&factors.to_padic(modulus())).unwrap();
        assert_eq!(sampler.blocks(1).unwrap().to_padic(modulus()), dense);
        let int = build_bidiagonal_embedding_int(&factors.to_int()).unwrap();
        assert_eq!(factors.embedding().to_int_matrix(), int);
    }

    #[test]
    fn scalar_product() {
        let spec = EnsembleSpec::new(2, Layout::MatrixProduct { n: 1, k: 2 }, 0)
            .with_a(EntryDistribution::FiniteSupport { support: vec![(2, 1.0), (3, 1.0)] });
        let sampler = Sampler::new(&spec).unwrap();
        for t in 0..8 {
            let f = sampler.factors(t).unwrap();
            let expected = f.factors()[0][0] * f.factors()[1][0];
            assert_eq!(f.product(modulus()).get(0, 0), num_bigint::BigUint::from(expected as u64));
        }
    }
}
