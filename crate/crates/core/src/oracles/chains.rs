use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::identities::ENUMERATION_LIMIT;
use super::law::{for_each_vector, guard_power, row_distribution, EntryLaw};
use crate::error::{Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::pgroups::{chain_counts_by_type, AbelianPGroup, ElementTable, Subgroup, SubgroupLattice};
use crate::theory::rational_string;

/// Block statistics of a vector `g = (g_1, …, g_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WtStatistics {
    /// `#{i ≥ 2 : ⟨g_{i-1}⟩ ⊄ ⟨g_i⟩}`.
    pub w: usize,
    /// `#{i ≥ 1 : ⟨g_{i-1}⟩ ⊊ ⟨g_i⟩}` with `⟨g_0⟩ = {0}`.
    pub t: usize,
    /// `⟨g_1⟩, …, ⟨g_k⟩`.
    pub subgroups: Vec<Subgroup>,
}

/// `(w, t)` of a subgroup sequence `H_1, …, H_k`, starting from the trivial subgroup.
pub fn sequence_wt(hs: &[Subgroup]) -> (usize, usize) {
    let mut w = 0;
    let mut t = 0;
    for (i, h) in hs.iter().enumerate() {
        match i.checked_sub(1).map(|j| &hs[j]) {
            Some(prev) => {
                if !prev.is_subgroup_of(h) {
                    w += 1;
                } else if prev.order() < h.order() {
                    t += 1;
                }
            }
            None => t += usize::from(!h.is_trivial()),
        }
    }
    (w, t)
}

/// Splits `g` (element indices) into consecutive blocks and reports `w`, `t` and the
/// generated subgroups.
pub fn wt_statistics(table: &ElementTable, g: &[usize], block_sizes: &[usize]) -> Result<WtStatistics> {
    if block_sizes.iter().sum::<usize>() != g.len() {
        return Err(Error::Dimension(format!(
            "blocks sum to {}, vector has length {}",
            block_sizes.iter().sum::<usize>(),
            g.len()
        )));
    }
    let mut subgroups = Vec::with_capacity(block_sizes.len());
    let mut start = 0;
    for &s in block_sizes {
        subgroups.push(table.generated(&g[start..start + s]));
        start += s;
    }
    let (w, t) = sequence_wt(&subgroups);
    Ok(WtStatistics { w, t, subgroups })
}

/// `t(H) <= ℓ(G)(1 + w(H))`.
pub fn verify_chain_claim(hs: &[Subgroup], ell: u32) -> bool {
    let (w, t) = sequence_wt(hs);
    t <= ell as usize * (1 + w)
}

/// `c(G, i) · C(k, i)`.
pub fn w0_count_target(group: &AbelianPGroup, k: usize, i: usize) -> BigUint {
    let chains = chain_counts_by_type(group.lambda(), group.p());
    match chains.get(i) {
        Some(c) if i <= k => c * binomial(k, i),
        _ => BigUint::zero(),
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, j| acc * BigUint::from(n - j) / BigUint::from(j + 1))
}

/// `|{H ∈ Sg(G)^k : w(H) = 0, t(H) = i}|` by dynamic programming over
/// nondecreasing sequences.
pub fn count_w0_sequences(lattice: &SubgroupLattice, k: usize, i: usize) -> BigUint {
    let s = lattice.len();
    // dp[h][t]: sequences so far ending at h with t strict steps.
    let mut dp = vec![vec![BigUint::zero(); i + 1]; s];
    dp[lattice.trivial()][0] = BigUint::one();
    for _ in 0..k {
        let mut next = vec![vec![BigUint::zero(); i + 1]; s];
        for (h, row) in dp.iter().enumerate() {
            for (t, count) in row.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for (h2, slot) in next.iter_mut().enumerate() {
                    if !lattice.includes(h, h2) {
                        continue;
                    }
                    let t2 = t + usize::from(h != h2);
                    if t2 <= i {
                        slot[t2] += count;
                    }
                }
            }
        }
        dp = next;
    }
    dp.iter().map(|row| row[i].clone()).sum()
}

/// Same count by listing every sequence in `Sg(G)^k`.
pub fn count_w0_sequences_brute_force(lattice: &SubgroupLattice, k: usize, i: usize) -> Result<u64> {
    guard_power(lattice.len(), k, ENUMERATION_LIMIT)?;
    let subs = lattice.subgroups();
    let mut count = 0u64;
    let mut seq = Vec::with_capacity(k);
    for_each_vector(subs.len(), k, |idx| {
        seq.clear();
        seq.extend(idx.iter().map(|&j| subs[j].clone()));
        count += u64::from(sequence_wt(&seq) == (0, i));
    });
    Ok(count)
}

/// Block lower-triangular law at oracle scale: iid `A` entries on the diagonal and
/// subdiagonal blocks, a fixed `B'` below them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct W0BlockLaw {
    block_sizes: Vec<usize>,
    offsets: Vec<usize>,
    a_entry: EntryLaw,
    b_fixed: IntMatrix,
}

impl W0BlockLaw {
    /// `b_fixed` is `n × n` and may be nonzero only in blocks `(i, j)` with `j <= i - 2`.
    pub fn new(block_sizes: Vec<usize>, a_entry: EntryLaw, b_fixed: IntMatrix) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::Config("block sizes must be positive".into()));
        }
        let mut offsets = vec![0];
        for s in &block_sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let n = *offsets.last().unwrap();
        if b_fixed.rows() != n || b_fixed.cols() != n {
            return Err(Error::Dimension(format!("B' must be {n}x{n}")));
        }
        let law = W0BlockLaw { block_sizes, offsets, a_entry, b_fixed };
        for r in 0..n {
            for c in 0..n {
                if !law.b_fixed.get(r, c).is_zero() && law.block_of(c) + 2 > law.block_of(r) {
                    return Err(Error::Config(format!("B' entry ({r},{c}) lies outside the blocks below the subdiagonal")));
                }
            }
        }
        Ok(law)
    }

    /// All-zero `B'`.
    pub fn without_b(block_sizes: Vec<usize>, a_entry: EntryLaw) -> Result<Self> {
        let n = block_sizes.iter().sum();
        W0BlockLaw::new(block_sizes, a_entry, IntMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    fn block_of(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    /// Columns carrying random `A` entries in row `r`.
    fn random_columns(&self, r: usize) -> std::ops::Range<usize> {
        let b = self.block_of(r);
        self.offsets[b.saturating_sub(1)]..self.offsets[b + 1]
    }

    /// `P(Cg = 0)`, factored over rows: row `r` needs its random part to hit `-(B'g)_r`.
    fn kernel_probability(&self, table: &ElementTable, g: &[usize]) -> BigRational {
        let mut prob = BigRational::one();
        for r in 0..self.dim() {
            let mut shift = 0;
            for (c, &gc) in g.iter().enumerate() {
                let b = self.b_fixed.get(r, c);
                if !b.is_zero() {
                    let b = i64::try_from(b).expect("small B' entries");
                    shift = table.add(shift, table.scale(gc, b));
                }
            }
            let dist = row_distribution(table, self.random_columns(r).map(|c| (&self.a_entry, g[c])));
            prob *= &dist[table.neg(shift)];
            if prob.is_zero() {
                break;
            }
        }
        prob
    }
}

/// The `w = 0, t = i` slice of `Σ_g P(Cg = 0)` next to `c(G, i) · C(k, i)`, plus the
/// exact count identity for subgroup sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Decomposition {
    #[serde(with = "rational_string")]
    pub sum: BigRational,
    #[serde(with = "rational_string")]
    pub target: BigRational,
    pub sequence_count: BigUint,
    pub count_target: BigUint,
}

impl W0Decomposition {
    pub fn count_matches(&self) -> bool {
        self.sequence_count == self.count_target
    }
}

fn w0_vectors(law: &W0BlockLaw, table: &ElementTable, i: usize) -> Result<Vec<Vec<usize>>> {
    guard_power(table.order(), law.dim(), ENUMERATION_LIMIT)?;
    let mut out = Vec::new();
    let mut failure = None;
    for_each_vector(table.order(), law.dim(), |g| match wt_statistics(table, g, law.block_sizes()) {
        Ok(s) if s.w == 0 && s.t == i => out.push(g.to_vec()),
        Ok(_) => {}
        Err(e) => failure = Some(e),
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

pub fn verify_w0_decomposition(law: &W0BlockLaw, group: &AbelianPGroup, i: usize) -> Result<W0Decomposition> {
    let table = group.elements()?;
    let sum = w0_vectors(law, &table, i)?.iter().map(|g| law.kernel_probability(&table, g)).sum();
    let count_target = w0_count_target(group, law.k(), i);
    let lattice = crate::pgroups::enumerate_subgroups(group)?;
    let sequence_count = count_w0_sequences(&lattice, law.k(), i);
    Ok(W0Decomposition {
        sum,
        target: BigRational::from_integer(BigInt::from(count_target.clone())),
        sequence_count,
        count_target,
    })
}

/// The same sum computed by enumerating every `A` in the support and testing `Cg = 0`.
pub fn w0_sum_by_enumeration(law: &W0BlockLaw, group: &AbelianPGroup, i: usize) -> Result<BigRational> {
    let table = group.elements()?;
    let vectors = w0_vectors(law, &table, i)?;
    let n = law.dim();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|r| law.random_columns(r).map(move |c| (r, c))).collect();
    let support = law.a_entry.support();
    let work = (support.len() as u64)
        .checked_pow(cells.len() as u32)
        .and_then(|s| s.checked_mul(vectors.len().max(1) as u64));
    if work.is_none_or(|w| w > 10 * ENUMERATION_LIMIT) {
        return Err(Error::EnumerationTooLarge {
            size: format!("{}^{} x {}", support.len(), cells.len(), vectors.len()),
            limit: 10 * ENUMERATION_LIMIT,
        });
    }
    let mut total = BigRational::zero();
    let mut c = law.b_fixed.clone();
    for_each_vector(support.len(), cells.len(), |pick| {
        let mut prob = BigRational::one();
        for (&(r, col), &j) in cells.iter().zip(pick) {
            let (v, q) = &support[j];
            c.set(r, col, BigInt::from(*v));
            prob *= q;
        }
        let hits = vectors.iter().filter(|g| kills(&c, &table, g)).count();
        total += prob * BigRational::from_integer(hits.into());
    });
    Ok(total)
}

fn kills(c: &IntMatrix, table: &ElementTable, g: &[usize]) -> bool {
    (0..c.rows()).all(|r| {
        let mut acc = 0;
        for (col, &gc) in g.iter().enumerate() {
            let v = i64::try_from(c.get(r, col)).expect("small entries");
            acc = table.add(acc, table.scale(gc, v));
        }
        acc == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::enumerate_subgroups;

    #[test]
    fn wt_examples() {
        let t = AbelianPGroup::cyclic(2, 1).unwrap().elements().unwrap();
        let s = wt_statistics(&t, &[0, 0, 0], &[1, 2]).unwrap();
        assert_eq!((s.w, s.t), (0, 0));
        let s = wt_statistics(&t, &[1, 0, 0, 0], &[2, 2]).unwrap();
        assert_eq!((s.w, s.t), (1, 1));

        let t = AbelianPGroup::cyclic(2, 2).unwrap().elements().unwrap();
        let one = t.generator(0);
        let two = t.scale(one, 2);
        let s = wt_statistics(&t, &[0, two, one], &[1, 1, 1]).unwrap();
        assert_eq!((s.w, s.t), (0, 2));
        assert_eq!(s.subgroups.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(wt_statistics(&t, &[0, 0], &[1]).is_err());
    }

    #[test]
    fn chain_claim_examples() {
        let g = AbelianPGroup::cyclic(3, 2).unwrap();
        let t = g.elements().unwrap();
        let full = t.full_subgroup();
        assert!(verify_chain_claim(&vec![full.clone(); 4], g.ell()));
        let mid = t.generated(&[t.scale(t.generator(0), 3)]);
        let chain = vec![t.trivial_subgroup(), mid, full];
        assert_eq!(sequence_wt(&chain), (0, 2));
        assert!(verify_chain_claim(&chain, g.ell()));
    }

    #[test]
    fn count_examples() {
        let g = AbelianPGroup::cyclic(2, 1).unwrap();
        let lattice = enumerate_subgroups(&g).unwrap();
        assert_eq!(count_w0_sequences(&lattice, 3, 1), BigUint::from(3u8));
        assert_eq!(count_w0_sequences_brute_force(&lattice, 3, 1).unwrap(), 3);
        assert_eq!(w0_count_target(&g, 3, 1), BigUint::from(3u8));
        for k in 1..4 {
            assert_eq!(count_w0_sequences(&lattice, k, 0), BigUint::one());
        }
    }

    #[test]
    fn decomposition_tiny() {
        let g = AbelianPGroup::cyclic(2, 1).unwrap();
        let law = W0BlockLaw::without_b(vec![1, 1], EntryLaw::uniform(&[0, 1])).unwrap();
        let d = verify_w0_decomposition(&law, &g, 1).unwrap();
        assert!(d.count_matches());
        assert_eq!(d.target, BigRational::from_integer(2.into()));
        assert_eq!(d.sum, w0_sum_by_enumeration(&law, &g, 1).unwrap());
        // g = (0,1): 1/2; g = (1,1): P(a11 = 0) P(a21 + a22 = 0) = 1/4.
        assert_eq!(d.sum, BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn fixed_b_placement() {
        let mut b = IntMatrix::zeros(3, 3);
        b.set(2, 0, BigInt::from(1));
        let law = W0BlockLaw::new(vec![1, 1, 1], EntryLaw::uniform(&[0, 1]), b.clone()).unwrap();
        let g = AbelianPGroup::cyclic(2, 1).unwrap();
        for i in 0..=1 {
            let d = verify_w0_decomposition(&law, &g, i).unwrap();
            assert_eq!(d.sum, w0_sum_by_enumeration(&law, &g, i).unwrap());
        }
        b.set(1, 0, BigInt::from(1));
        assert!(W0BlockLaw::new(vec![1, 1, 1], EntryLaw::constant(1), b).is_err());
    }
}
