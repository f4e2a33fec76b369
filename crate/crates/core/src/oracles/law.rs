use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pgroups::ElementTable;

/// Integer law with finite support and exact probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryLaw {
    support: Vec<(i64, BigRational)>,
}

impl EntryLaw {
    /// Probabilities must be positive and sum to exactly one.
    pub fn new(support: Vec<(i64, BigRational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Config("empty support".into()));
        }
        if support.iter().any(|(_, q)| q <= &BigRational::zero()) {
            return Err(Error::Config("probabilities must be positive".into()));
        }
        let total: BigRational = support.iter().map(|(_, q)| q).sum();
        if !total.is_one() {
            return Err(Error::Config(format!("probabilities sum to {total}, not 1")));
        }
        Ok(EntryLaw { support })
    }

    /// Uniform on the given values (repeats add weight).
    pub fn uniform(values: &[i64]) -> Self {
        let q = BigRational::new(BigInt::one(), BigInt::from(values.len()));
        EntryLaw { support: values.iter().map(|&v| (v, q.clone())).collect() }
    }

    /// `1` with probability `num/den`, else `0`.
    pub fn bernoulli(num: i64, den: i64) -> Result<Self> {
        let q = BigRational::new(num.into(), den.into());
        let mut support = Vec::new();
        if q < BigRational::one() {
            support.push((0, BigRational::one() - &q));
        }
        if q > BigRational::zero() {
            support.push((1, q));
        }
        EntryLaw::new(support)
    }

    pub fn constant(value: i64) -> Self {
        EntryLaw { support: vec![(value, BigRational::one())] }
    }

    pub fn support(&self) -> &[(i64, BigRational)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `1 - max_r P(X ≡ r mod p)`: the largest `ε` for which the law is `({p}, ε)`-balanced.
    pub fn certified_epsilon(&self, p: u64) -> BigRational {
        let mut masses: std::collections::BTreeMap<i64, BigRational> = Default::default();
        for (v, q) in &self.support {
            *masses.entry(v.rem_euclid(p as i64)).or_insert_with(BigRational::zero) += q;
        }
        let max = masses.into_values().max().unwrap_or_else(BigRational::zero);
        BigRational::one() - max
    }

    /// Law of `X · g` in the group, as a vector indexed by element.
    pub fn push_forward(&self, table: &ElementTable, g: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); table.order()];
        for (v, q) in &self.support {
            out[table.scale(g, *v)] += q;
        }
        out
    }
}

/// Independent entries, each with its own finite law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSupportMatrixLaw {
    rows: usize,
    cols: usize,
    entries: Vec<EntryLaw>,
}

impl FiniteSupportMatrixLaw {
    pub fn new(rows: usize, cols: usize, entries: Vec<EntryLaw>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{rows}x{cols} law needs {} entry laws", rows * cols)));
        }
        Ok(FiniteSupportMatrixLaw { rows, cols, entries })
    }

    /// Every entry iid with `law`.
    pub fn iid(rows: usize, cols: usize, law: EntryLaw) -> Result<Self> {
        FiniteSupportMatrixLaw::new(rows, cols, vec![law; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &EntryLaw {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[EntryLaw] {
        &self.entries
    }

    /// Number of matrices in the support (saturating).
    pub fn support_size(&self) -> u64 {
        self.entries.iter().fold(1u64, |acc, e| acc.saturating_mul(e.len() as u64))
    }

    /// Smallest certified `ε` over all entries.
    pub fn certified_epsilon(&self, p: u64) -> BigRational {
        self.entries.iter().map(|e| e.certified_epsilon(p)).min().expect("nonempty law")
    }

    /// Law of `row_r · g` in `G`.
    pub fn row_distribution(&self, table: &ElementTable, r: usize, g: &[usize]) -> Vec<BigRational> {
        row_distribution(table, (0..self.cols).map(|c| (self.entry(r, c), g[c])))
    }
}

/// Law of `Σ_j X_j g_j` for independent `X_j`, by convolution over the group.
pub fn row_distribution<'a>(
    table: &ElementTable,
    terms: impl IntoIterator<Item = (&'a EntryLaw, usize)>,
) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); table.order()];
    acc[0] = BigRational::one();
    for (law, g) in terms {
        if g == 0 {
            continue;
        }
        let step = law.push_forward(table, g);
        let mut next = vec![BigRational::zero(); table.order()];
        for (x, px) in acc.iter().enumerate() {
            if px.is_zero() {
                continue;
            }
            for (y, py) in step.iter().enumerate() {
                if !py.is_zero() {
                    next[table.add(x, y)] += px * py;
                }
            }
        }
        acc = next;
    }
    acc
}

/// Every vector in `G^n`, as element indices, in odometer order.
pub(crate) fn for_each_vector(order: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut v = vec![0usize; n];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            v[i] += 1;
            if v[i] < order {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Checks `order^n <= limit`.
pub(crate) fn guard_power(order: usize, n: usize, limit: u64) -> Result<()> {
    let size = (order as u64).checked_pow(n as u32);
    match size {
        Some(s) if s <= limit => Ok(()),
        _ => Err(Error::EnumerationTooLarge { size: format!("{order}^{n}"), limit }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::AbelianPGroup;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn law_validation() {
        assert!(EntryLaw::new(vec![(0, q(1, 2))]).is_err());
        assert!(EntryLaw::new(vec![(0, q(1, 2)), (1, q(1, 2))]).is_ok());
        assert_eq!(EntryLaw::bernoulli(3, 10).unwrap().len(), 2);
        assert_eq!(EntryLaw::bernoulli(1, 1).unwrap().len(), 1);
    }

    #[test]
    fn epsilon() {
        assert_eq!(EntryLaw::uniform(&[0, 1, 2, 3]).certified_epsilon(2), q(1, 2));
        assert_eq!(EntryLaw::constant(5).certified_epsilon(2), q(0, 1));
        assert_eq!(EntryLaw::bernoulli(3, 10).unwrap().certified_epsilon(2), q(3, 10));
    }

    #[test]
    fn convolution() {
        let t = AbelianPGroup::cyclic(2, 1).unwrap().elements().unwrap();
        let law = EntryLaw::uniform(&[0, 1]);
        let d = row_distribution(&t, [(&law, 1), (&law, 1)]);
        assert_eq!(d, vec![q(1, 2), q(1, 2)]);
        let d = row_distribution(&t, [(&law, 0)]);
        assert_eq!(d, vec![q(1, 1), q(0, 1)]);
    }
}
