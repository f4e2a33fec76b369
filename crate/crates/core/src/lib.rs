//! Cokernels of random integer matrices and their Sylow p-subgroups.
//!
//! The crate is organised around the pipeline used by every experiment:
//!
//! * [`exact_linalg`]: Smith normal form over `BigInt`, valuation-aware elimination
//!   over `Z/p^N`, and a per-block streaming eliminator for block lower triangular input.
//! * [`pgroups`]: partitions, finite abelian p-groups, subgroup lattices, chain counts
//!   and Hom counts.
//! * [`ensembles`]: entry distributions and deterministic samplers for the block
//!   triangular ensemble, the matrix-product ensemble and its bidiagonal embedding.
//! * [`theory`]: closed-form targets (rescaled Hom-moment limits, fluctuation-law moments,
//!   centering).
//! * [`experiments`]: the Monte Carlo harness and report aggregation.
//! * [`oracles`]: exact brute-force verifiers at tiny scale, using rational arithmetic.
//! * [`cli`]: configuration files and the `cokfluct` command-line front end.

pub mod cli;
pub mod ensembles;
pub mod error;
pub mod exact_linalg;
pub mod experiments;
pub mod oracles;
pub mod pgroups;
pub mod theory;

pub use error::{Error, Result};
pub use exact_linalg::{
    cokernel_partition, padic_valuations, snf_diagonal, streaming_block_eliminate,
    BlockLowerMatrix, DivisorValuations, IntMatrix, Modulus, PadicMatrix, SylowCokernel,
};
pub use pgroups::{AbelianPGroup, Partition, Subgroup, SubgroupLattice};

/// Small deterministic primality test, sufficient for the 64-bit moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Miller-Rabin with a base set that is deterministic for all u64.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::is_prime;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime((1 << 61) - 1));
        assert!(is_prime(4_611_686_018_427_387_847));
        assert!(!is_prime(4_611_686_018_427_387_849));
        assert!(!is_prime(561));
    }
}
