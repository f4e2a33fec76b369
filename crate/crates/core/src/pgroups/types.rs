//! Counting by isomorphism type instead of by explicit subgroups.
//!
//! The number of subgroups of type `ν` in `G_λ` is
//! `Π_i p^{ν'_{i+1}(λ'_i - ν'_i)} [λ'_i - ν'_{i+1}, ν'_i - ν'_{i+1}]_p`,
//! and the number of chains ending at a subgroup depends only on its type. Together
//! these give `c(G, i)` without building the lattice, which reaches groups far beyond
//! the enumeration guard.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use super::Partition;

/// Gaussian binomial `[n, k]_p`.
pub fn gaussian_binomial(n: u32, k: u32, p: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let pb = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= Pow::pow(&pb, n - i) - 1u32;
        den *= Pow::pow(&pb, i + 1) - 1u32;
    }
    num / den
}

/// Number of subgroups of `G_λ` isomorphic to `G_ν`; zero unless `ν ⊆ λ`.
pub fn subgroup_count_of_type(lambda: &Partition, nu: &Partition, p: u64) -> BigUint {
    if !contained(nu, lambda) {
        return BigUint::zero();
    }
    let lc = lambda.conjugate();
    let nc = nu.conjugate();
    let width = lambda.part(0) as usize;
    let pb = BigUint::from(p);
    let mut total = BigUint::one();
    for i in 0..width {
        let (l, n, n_next) = (lc.part(i), nc.part(i), nc.part(i + 1));
        total *= Pow::pow(&pb, n_next * (l - n));
        total *= gaussian_binomial(l - n_next, n - n_next, p);
    }
    total
}

fn contained(nu: &Partition, lambda: &Partition) -> bool {
    nu.len() <= lambda.len() && nu.parts().iter().zip(lambda.parts()).all(|(a, b)| a <= b)
}

/// Partitions `ν ⊆ λ` (as Young diagrams).
pub fn sub_partitions(lambda: &Partition) -> Vec<Partition> {
    fn rec(lambda: &[u32], i: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(Partition::from_unsorted(cur.clone()));
        if i == lambda.len() {
            return;
        }
        for x in 1..=cap.min(lambda[i]) {
            cur.push(x);
            rec(lambda, i + 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lambda.parts(), 0, u32::MAX, &mut Vec::new(), &mut out);
    out
}

/// `c(G_λ, i)` for `i = 0..=|λ|`, by type recursion.
pub fn chain_counts_by_type(lambda: &Partition, p: u64) -> Vec<BigUint> {
    let ell = lambda.size() as usize;
    let mut memo: HashMap<Partition, Vec<BigUint>> = HashMap::new();
    let subs = sub_partitions(lambda);
    let mut totals = vec![BigUint::zero(); ell + 1];
    for nu in &subs {
        let mult = subgroup_count_of_type(lambda, nu, p);
        let ending = chains_ending_at(nu, p, &mut memo);
        for (t, e) in totals.iter_mut().zip(ending) {
            *t += &mult * e;
        }
    }
    totals
}

/// Strict chains `{0} ⊊ ... ⊊ G_ν` by length, indexed `0..=|ν|`.
fn chains_ending_at(nu: &Partition, p: u64, memo: &mut HashMap<Partition, Vec<BigUint>>) -> Vec<BigUint> {
    if let Some(v) = memo.get(nu) {
        return v.clone();
    }
    let size = nu.size() as usize;
    let mut out = vec![BigUint::zero(); size + 1];
    if nu.is_empty() {
        out[0] = BigUint::one();
    } else {
        for kappa in sub_partitions(nu) {
            if &kappa == nu {
                continue;
            }
            let mult = subgroup_count_of_type(nu, &kappa, p);
            let below = chains_ending_at(&kappa, p, memo);
            for (len, b) in below.iter().enumerate() {
                out[len + 1] += &mult * b;
            }
        }
    }
    memo.insert(nu.clone(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::{enumerate_subgroups, partitions_up_to, AbelianPGroup};

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_binomial(2, 1, 2), BigUint::from(3u32));
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(3, 0, 5), BigUint::one());
    }

    #[test]
    fn agrees_with_lattice() {
        for p in [2, 3] {
            for lambda in partitions_up_to(5, 5) {
                let g = AbelianPGroup::new(p, lambda.clone()).unwrap();
                let Ok(lattice) = enumerate_subgroups(&g) else { continue };
                assert_eq!(lattice.chain_counts(), chain_counts_by_type(&lambda, p), "{g}");
                let total: BigUint = sub_partitions(&lambda).iter().map(|nu| subgroup_count_of_type(&lambda, nu, p)).sum();
                assert_eq!(total, BigUint::from(lattice.len()), "{g}");
            }
        }
    }
}
