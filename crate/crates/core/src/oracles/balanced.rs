use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::law::{for_each_vector, guard_power, row_distribution, EntryLaw, FiniteSupportMatrixLaw};
use crate::error::{Error, Result};
use crate::pgroups::{AbelianPGroup, ElementTable, Subgroup};
use crate::theory::rational_string;

/// Largest `|G_0|^n` accepted by [`verify_balanced_sums`].
pub const BALANCED_ENUMERATION_LIMIT: u64 = 10_000_000;

/// `Σ_{⟨g⟩ = G_0} min_f P(Mg = f)` and the same sum with `max_f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedSums {
    #[serde(with = "rational_string")]
    pub s_min: BigRational,
    #[serde(with = "rational_string")]
    pub s_max: BigRational,
    /// Number of `g ∈ G_0^n` generating `G_0`.
    pub generating_vectors: u64,
}

/// Exact balanced sums for a square law over `G_0`. Rows are independent, so
/// `min_f P(Mg = f) = Π_r min_x P(row_r · g = x)`, and likewise for `max`.
pub fn verify_balanced_sums(law: &FiniteSupportMatrixLaw, group: &AbelianPGroup) -> Result<BalancedSums> {
    if law.rows() != law.cols() {
        return Err(Error::Dimension(format!("law must be square, got {}x{}", law.rows(), law.cols())));
    }
    let n = law.cols();
    let table = group.elements()?;
    guard_power(table.order(), n, BALANCED_ENUMERATION_LIMIT)?;

    // Rows with identical entry laws share one marginal.
    let mut classes: Vec<(usize, usize)> = Vec::new();
    for r in 0..n {
        let row = &law.entries()[r * n..(r + 1) * n];
        match classes.iter_mut().find(|(rep, _)| &law.entries()[rep * n..(rep + 1) * n] == row) {
            Some((_, count)) => *count += 1,
            None => classes.push((r, 1)),
        }
    }

    let mut s_min = BigRational::zero();
    let mut s_max = BigRational::zero();
    let mut generating_vectors = 0u64;
    for_each_vector(table.order(), n, |g| {
        if table.generated(g).order() != table.order() {
            return;
        }
        generating_vectors += 1;
        let mut lo = BigRational::one();
        let mut hi = BigRational::one();
        for &(r, count) in &classes {
            let dist = law.row_distribution(&table, r, g);
            let min = dist.iter().min().expect("nonempty group").clone();
            let max = dist.iter().max().expect("nonempty group").clone();
            lo *= Pow::pow(min, count);
            hi *= Pow::pow(max, count);
        }
        s_min += lo;
        s_max += hi;
    });
    Ok(BalancedSums { s_min, s_max, generating_vectors })
}

/// Exact `P(f + Mg ∈ G_0^m)` against the bound `(1 - ε)^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualBound {
    #[serde(with = "rational_string")]
    pub probability: BigRational,
    #[serde(with = "rational_string")]
    pub bound: BigRational,
    #[serde(with = "rational_string")]
    pub epsilon: BigRational,
}

impl ResidualBound {
    pub fn holds(&self) -> bool {
        self.probability <= self.bound
    }
}

/// `M` is `m × n` with iid entries from `entry`, where `m = f.len()` and `n = g.len()`.
/// `ε` is the law's certified balancedness constant at `p`.
pub fn verify_residual_bound(
    entry: &EntryLaw,
    table: &ElementTable,
    sub: &Subgroup,
    g: &[usize],
    f: &[usize],
) -> Result<ResidualBound> {
    if table.generated(g).is_subgroup_of(sub) {
        return Err(Error::Precondition("the entries of g generate a subgroup of G_0".into()));
    }
    let dist = row_distribution(table, g.iter().map(|&x| (entry, x)));
    let mut probability = BigRational::one();
    for &fr in f {
        let hit: BigRational =
            dist.iter().enumerate().filter(|(x, _)| sub.contains(table.add(fr, *x))).map(|(_, q)| q).sum();
        probability *= hit;
    }
    let epsilon = entry.certified_epsilon(table.p());
    let bound = Pow::pow(BigRational::one() - &epsilon, f.len());
    Ok(ResidualBound { probability, bound, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn uniform_mod_two() {
        let law = FiniteSupportMatrixLaw::iid(8, 8, EntryLaw::uniform(&[0, 1])).unwrap();
        let s = verify_balanced_sums(&law, &AbelianPGroup::cyclic(2, 1).unwrap()).unwrap();
        assert_eq!(s.s_min, q(255, 256));
        assert_eq!(s.s_max, q(255, 256));
        assert_eq!(s.generating_vectors, 255);
    }

    #[test]
    fn single_vector() {
        let law = FiniteSupportMatrixLaw::iid(1, 1, EntryLaw::bernoulli(3, 10).unwrap()).unwrap();
        let s = verify_balanced_sums(&law, &AbelianPGroup::cyclic(2, 1).unwrap()).unwrap();
        assert_eq!((s.s_min, s.s_max), (q(3, 10), q(7, 10)));
    }

    /// `Σ_w C(n,w) ((1 ± (1-2q)^w) / 2)^n` for Bernoulli(q) entries over `Z/2`.
    fn bernoulli_closed_form(n: usize, q: BigRational) -> (BigRational, BigRational) {
        let bias = BigRational::one() - q * BigRational::from_integer(2.into());
        let half = BigRational::new(1.into(), 2.into());
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        let mut binom = BigRational::one();
        for w in 1..=n {
            binom = binom * BigRational::from_integer((n + 1 - w).into()) / BigRational::from_integer(w.into());
            let b = Pow::pow(&bias, w);
            lo += &binom * Pow::pow((BigRational::one() - &b) * &half, n);
            hi += &binom * Pow::pow((BigRational::one() + &b) * &half, n);
        }
        (lo, hi)
    }

    #[test]
    fn bernoulli_matches_closed_form() {
        let g = AbelianPGroup::cyclic(2, 1).unwrap();
        let mut last = None;
        for n in [1, 4, 6, 8, 10] {
            let law = FiniteSupportMatrixLaw::iid(n, n, EntryLaw::bernoulli(3, 10).unwrap()).unwrap();
            let s = verify_balanced_sums(&law, &g).unwrap();
            assert_eq!((s.s_min.clone(), s.s_max.clone()), bernoulli_closed_form(n, q(3, 10)));
            assert!(s.s_min <= s.s_max);
            // The gap to 1 peaks near n = 5 and shrinks from there on.
            if n >= 6 {
                let gap = s.s_max - BigRational::one();
                if let Some(prev) = last {
                    assert!(gap < prev);
                }
                last = Some(gap);
            }
        }
    }

    #[test]
    fn residual_examples() {
        let t = AbelianPGroup::cyclic(2, 1).unwrap().elements().unwrap();
        let law = EntryLaw::uniform(&[0, 1]);
        let r = verify_residual_bound(&law, &t, &t.trivial_subgroup(), &[1], &[0, 0, 0]).unwrap();
        assert_eq!((r.probability.clone(), r.bound.clone()), (q(1, 8), q(1, 8)));
        let r = verify_residual_bound(&law, &t, &t.trivial_subgroup(), &[1], &[]).unwrap();
        assert_eq!((r.probability, r.bound), (q(1, 1), q(1, 1)));
        assert!(matches!(
            verify_residual_bound(&law, &t, &t.full_subgroup(), &[1], &[0]),
            Err(Error::Precondition(_))
        ));

        let t = AbelianPGroup::cyclic(2, 2).unwrap().elements().unwrap();
        let half = t.generated(&[t.scale(t.generator(0), 2)]);
        let law = EntryLaw::uniform(&[0, 1, 2, 3]);
        let r = verify_residual_bound(&law, &t, &half, &[t.generator(0)], &[0, 0]).unwrap();
        assert_eq!(r.epsilon, q(1, 2));
        assert_eq!(r.probability, q(1, 4));
        assert!(r.holds());
    }
}
