//! Per-block elimination for block lower triangular matrices over `Z/p^N`.
//!
//! Block row `i` only touches column blocks `0..=i`. Processing block rows top to
//! bottom, a unit pivot whose row is local can be cleared with column operations and the
//! pivot row and column dropped: the relation then says the generator is zero. Only
//! the non-unit remainder of each stage is carried forward, together with the column
//! transform needed to express later rows in the surviving columns. After the last
//! block the small carried remainder goes through ordinary valuation-aware elimination.

use super::padic::{eliminate_dense, DivisorValuations, PadicMatrix};
use super::ring::{Modulus, ResidueRing, Residues};
use crate::error::{Error, Result};

/// Block lower triangular matrix over `Z/p^N`, stored as one dense strip per block row.
///
/// Strip `i` has `sizes[i]` rows and `offsets[i] + sizes[i]` columns (column blocks
/// `0..=i`); everything to the right of the diagonal block is zero by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLowerMatrix {
    modulus: Modulus,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    strips: Vec<Residues>,
}

impl BlockLowerMatrix {
    /// Builds a block matrix from `((block_row, block_col), block)` pairs; missing blocks
    /// are zero. A nonzero block above the diagonal is a structural error.
    pub fn from_blocks(
        modulus: Modulus,
        sizes: &[usize],
        blocks: Vec<((usize, usize), PadicMatrix)>,
    ) -> Result<Self> {
        validate_sizes(sizes)?;
        let offsets = offsets_of(sizes);
        let mut strips: Vec<Vec<num_bigint::BigUint>> = sizes
            .iter()
            .zip(&offsets)
            .map(|(&n, &off)| vec![num_bigint::BigUint::default(); n * (off + n)])
            .collect();
        for ((bi, bj), block) in blocks {
            if bi >= sizes.len() || bj >= sizes.len() {
                return Err(Error::Structure(format!("block index ({bi}, {bj}) out of range")));
            }
            if block.modulus() != modulus {
                return Err(Error::Mismatch(format!("block ({bi}, {bj}) uses a different modulus")));
            }
            if block.rows() != sizes[bi] || block.cols() != sizes[bj] {
                return Err(Error::Dimension(format!(
                    "block ({bi}, {bj}) is {}x{}, expected {}x{}",
                    block.rows(),
                    block.cols(),
                    sizes[bi],
                    sizes[bj]
                )));
            }
            if bj > bi {
                if block.is_zero() {
                    continue;
                }
                return Err(Error::Structure(format!("nonzero block ({bi}, {bj}) above the diagonal")));
            }
            let width = offsets[bi] + sizes[bi];
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    strips[bi][r * width + offsets[bj] + c] = block.get(r, c);
                }
            }
        }
        let strips = strips.into_iter().map(|s| Residues::from_biguints(&modulus, s)).collect();
        Ok(BlockLowerMatrix { modulus, sizes: sizes.to_vec(), offsets, strips })
    }

    /// Splits a dense square matrix along `sizes`, rejecting nonzero entries above the
    /// block diagonal.
    pub fn from_dense(m: &PadicMatrix, sizes: &[usize]) -> Result<Self> {
        validate_sizes(sizes)?;
        let n: usize = sizes.iter().sum();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Dimension(format!(
                "block sizes sum to {n} but the matrix is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let offsets = offsets_of(sizes);
        let mut strips = Vec::with_capacity(sizes.len());
        for (i, (&ni, &off)) in sizes.iter().zip(&offsets).enumerate() {
            let width = off + ni;
            let mut strip = Vec::with_capacity(ni * width);
            for r in off..off + ni {
                for c in 0..n {
                    let x = m.get(r, c);
                    if c >= width {
                        if x != num_bigint::BigUint::default() {
                            return Err(Error::Structure(format!(
                                "nonzero entry ({r}, {c}) above block row {i}'s diagonal block"
                            )));
                        }
                    } else {
                        strip.push(x);
                    }
                }
            }
            strips.push(Residues::from_biguints(&m.modulus(), strip));
        }
        Ok(BlockLowerMatrix { modulus: m.modulus(), sizes: sizes.to_vec(), offsets, strips })
    }

    /// Strips given as integers, reduced on the way in. Strip `i` must have
    /// `sizes[i] * (offsets[i] + sizes[i])` entries.
    pub(crate) fn from_integer_strips(modulus: Modulus, sizes: &[usize], strips: &[Vec<i64>]) -> Self {
        let offsets = offsets_of(sizes);
        let strips = strips
            .iter()
            .map(|s| Residues::from_i64(&modulus, s))
            .collect();
        BlockLowerMatrix { modulus, sizes: sizes.to_vec(), offsets, strips }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// The full square matrix.
    pub fn assemble(&self) -> PadicMatrix {
        let n = self.dim();
        let mut out = vec![num_bigint::BigUint::default(); n * n];
        for (i, strip) in self.strips.iter().enumerate() {
            let width = self.offsets[i] + self.sizes[i];
            for r in 0..self.sizes[i] {
                for c in 0..width {
                    out[(self.offsets[i] + r) * n + c] = strip.get(r * width + c);
                }
            }
        }
        PadicMatrix::from_residues(n, n, self.modulus, out).expect("entries are reduced")
    }
}

fn validate_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Structure(format!("block sizes must be positive and nonempty, got {sizes:?}")));
    }
    Ok(())
}

fn offsets_of(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &n| {
            let off = *acc;
            *acc += n;
            Some(off)
        })
        .collect()
}

/// Elementary-divisor valuations of a block lower triangular matrix, computed block row
/// by block row. Same contract as [`padic_valuations`](super::padic_valuations) on the
/// assembled matrix.
pub fn streaming_block_eliminate(m: &BlockLowerMatrix) -> DivisorValuations {
    if let Some(ring) = m.modulus.word_ring() {
        let strips: Vec<&[u64]> = m.strips.iter().map(Residues::as_word).collect();
        stream(&ring, &m.sizes, &m.offsets, &strips)
    } else if let Some(ring) = m.modulus.double_word_ring() {
        let strips: Vec<&[u128]> = m.strips.iter().map(Residues::as_double_word).collect();
        stream(&ring, &m.sizes, &m.offsets, &strips)
    } else {
        let strips: Vec<&[num_bigint::BigUint]> = m.strips.iter().map(Residues::as_wide).collect();
        stream(&m.modulus.big_ring(), &m.sizes, &m.offsets, &strips)
    }
}

fn stream<R: ResidueRing>(ring: &R, sizes: &[usize], offsets: &[usize], strips: &[&[R::Elem]]) -> DivisorValuations {
    // Carried rows have support in carried columns only; each carried column is a
    // combination (`reps`) of original columns to the left of the current block.
    let mut carried_rows: Vec<Vec<R::Elem>> = Vec::new();
    let mut reps: Vec<Vec<R::Elem>> = Vec::new();
    let mut units = 0usize;

    for (i, strip) in strips.iter().enumerate() {
        let (n, off) = (sizes[i], offsets[i]);
        let width = off + n;
        let s = reps.len();
        debug_assert_eq!(carried_rows.len(), s);
        let (lr, lc) = (s + n, s + n);

        let mut local = vec![ring.zero(); lr * lc];
        for (r, row) in carried_rows.iter().enumerate() {
            local[r * lc..r * lc + s].clone_from_slice(row);
        }
        for x in 0..n {
            let orig = &strip[x * width..(x + 1) * width];
            let dst = (s + x) * lc;
            for (c, rep) in reps.iter().enumerate() {
                let mut acc = ring.zero();
                for (a, b) in orig[..off].iter().zip(rep) {
                    if !ring.is_zero(a) && !ring.is_zero(b) {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                local[dst + c] = acc;
            }
            local[dst + s..dst + lc].clone_from_slice(&orig[off..]);
        }

        // Local column transform, applied alongside every column operation.
        let mut transform = vec![ring.zero(); lc * lc];
        for d in 0..lc {
            transform[d * lc + d] = ring.one();
        }
        let mut live_rows: Vec<usize> = (0..lr).collect();
        let mut live_cols: Vec<usize> = (0..lc).collect();

        loop {
            let pivot = live_rows.iter().enumerate().find_map(|(ri, &r)| {
                live_cols
                    .iter()
                    .position(|&c| ring.valuation(&local[r * lc + c]) == Some(0))
                    .map(|ci| (ri, ci))
            });
            let Some((ri, ci)) = pivot else { break };
            let (r, c) = (live_rows.swap_remove(ri), live_cols.swap_remove(ci));
            let inv = ring.inverse_unit(&local[r * lc + c]);
            for &y in &live_cols {
                if ring.is_zero(&local[r * lc + y]) {
                    continue;
                }
                let f = ring.mul(&local[r * lc + y], &inv);
                for &x in &live_rows {
                    let v = ring.sub_mul(&local[x * lc + y], &f, &local[x * lc + c]);
                    local[x * lc + y] = v;
                }
                for l in 0..lc {
                    let v = ring.sub_mul(&transform[l * lc + y], &f, &transform[l * lc + c]);
                    transform[l * lc + y] = v;
                }
            }
            units += 1;
        }

        let mut next_reps = Vec::with_capacity(live_cols.len());
        for &y in &live_cols {
            let mut rep = vec![ring.zero(); width];
            for (l, old) in reps.iter().enumerate() {
                let coeff = &transform[l * lc + y];
                if ring.is_zero(coeff) {
                    continue;
                }
                for (dst, src) in rep[..off].iter_mut().zip(old) {
                    *dst = ring.add(dst, &ring.mul(coeff, src));
                }
            }
            for j in 0..n {
                rep[off + j] = transform[(s + j) * lc + y].clone();
            }
            next_reps.push(rep);
        }
        carried_rows = live_rows
            .iter()
            .map(|&x| live_cols.iter().map(|&y| local[x * lc + y].clone()).collect())
            .collect();
        reps = next_reps;
    }

    let s = reps.len();
    let rest: Vec<R::Elem> = carried_rows.into_iter().flatten().collect();
    if s == 0 {
        return DivisorValuations {
            valuations: Vec::new(),
            unit_count: units,
            saturated_count: 0,
            precision: ring.precision(),
        };
    }
    eliminate_dense(ring, s, s, rest).merge_units(units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::padic_valuations;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn modulus(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    fn scalar(m: Modulus, x: i64) -> PadicMatrix {
        PadicMatrix::from_i64(1, 1, m, &[x]).unwrap()
    }

    #[test]
    fn two_scalar_blocks() {
        let m = modulus(2, 16);
        let blocks = vec![((0, 0), scalar(m, 2)), ((1, 0), scalar(m, 1)), ((1, 1), scalar(m, 3))];
        let b = BlockLowerMatrix::from_blocks(m, &[1, 1], blocks).unwrap();
        let v = streaming_block_eliminate(&b);
        assert_eq!((v.valuations.clone(), v.saturated_count), (vec![1], 0));
        assert_eq!(v, padic_valuations(&b.assemble()));
    }

    #[test]
    fn block_above_diagonal_is_rejected() {
        let m = modulus(3, 4);
        let blocks = vec![((0, 1), scalar(m, 1))];
        assert!(matches!(
            BlockLowerMatrix::from_blocks(m, &[1, 1], blocks),
            Err(Error::Structure(_))
        ));
        let zero_above = vec![((0, 1), scalar(m, 0)), ((0, 0), scalar(m, 5))];
        assert!(BlockLowerMatrix::from_blocks(m, &[1, 1], zero_above).is_ok());
        let dense = PadicMatrix::from_i64(2, 2, m, &[1, 1, 0, 1]).unwrap();
        assert!(BlockLowerMatrix::from_dense(&dense, &[1, 1]).is_err());
        assert!(BlockLowerMatrix::from_dense(&dense, &[2]).is_ok());
    }

    #[test]
    fn single_block_matches_dense() {
        let m = modulus(2, 8);
        let dense = PadicMatrix::from_i64(3, 3, m, &[2, 4, 6, 0, 8, 2, 4, 4, 12]).unwrap();
        let b = BlockLowerMatrix::from_dense(&dense, &[3]).unwrap();
        assert_eq!(streaming_block_eliminate(&b), padic_valuations(&dense));
    }

    #[test]
    fn random_layouts_match_assembled_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2u64, 16u32), (3, 6), (2, 3), (5, 40)] {
            let m = modulus(p, n);
            for _ in 0..20 {
                let k = rng.gen_range(1..=5);
                let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
                let mut blocks = Vec::new();
                for i in 0..k {
                    for j in 0..=i {
                        // Entries biased toward multiples of p so non-unit pivots occur.
                        let e: Vec<i64> = (0..sizes[i] * sizes[j])
                            .map(|_| rng.gen_range(0..3i64) * (p as i64) * rng.gen_range(0..3i64) + rng.gen_range(0..2))
                            .collect();
                        blocks.push(((i, j), PadicMatrix::from_i64(sizes[i], sizes[j], m, &e).unwrap()));
                    }
                }
                let b = BlockLowerMatrix::from_blocks(m, &sizes, blocks).unwrap();
                assert_eq!(streaming_block_eliminate(&b), padic_valuations(&b.assemble()), "sizes {sizes:?}");
            }
        }
    }
}
