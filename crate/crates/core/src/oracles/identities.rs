use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::law::{for_each_vector, guard_power, FiniteSupportMatrixLaw};
use crate::ensembles::build_bidiagonal_embedding_int;
use crate::error::{Error, Result};
use crate::exact_linalg::{cokernel_partition, nontrivial_divisors, snf_diagonal, IntMatrix};
use crate::pgroups::{hom_count, AbelianPGroup, Partition};
use crate::theory::rational_string;

/// Largest number of matrices or vectors any oracle will enumerate.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Largest `n·k` accepted by [`verify_cok_identity`].
pub const MAX_EMBEDDING_DIM: usize = 24;

/// Both sides of `E|Hom(cok M, G)| = Σ_{g ∈ G^n} P(Mg = 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentIdentity {
    #[serde(with = "rational_string")]
    pub lhs: BigRational,
    #[serde(with = "rational_string")]
    pub rhs: BigRational,
    pub equal: bool,
}

/// Computes `E|Hom(cok M, G)|` by summing over every matrix in the support (exact SNF
/// per matrix) and `Σ_g P(Mg = 0)` by summing row-marginal products over `G^n`.
pub fn verify_moment_identity(law: &FiniteSupportMatrixLaw, group: &AbelianPGroup) -> Result<MomentIdentity> {
    if law.rows() != law.cols() {
        return Err(Error::Dimension(format!("law must be square, got {}x{}", law.rows(), law.cols())));
    }
    let n = law.cols();
    let size = law.support_size();
    if size > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { size: size.to_string(), limit: ENUMERATION_LIMIT });
    }
    let table = group.elements()?;
    guard_power(table.order(), n, ENUMERATION_LIMIT)?;

    let order = group.order();
    let mut lhs = BigRational::zero();
    let entries = law.entries();
    let mut pick = vec![0usize; entries.len()];
    loop {
        let mut prob = BigRational::one();
        let mut values = Vec::with_capacity(pick.len());
        for (e, &j) in entries.iter().zip(&pick) {
            let (v, q) = &e.support()[j];
            prob *= q;
            values.push(*v);
        }
        let m = IntMatrix::from_i64(n, n, &values)?;
        let cok = cokernel_partition(&m, group.p());
        let homs = hom_count(&cok.partition, group.lambda(), group.p()) * Pow::pow(&order, cok.free_rank);
        lhs += prob * BigRational::from_integer(BigInt::from(homs));
        if !advance(&mut pick, |i| entries[i].len()) {
            break;
        }
    }

    let mut rhs = BigRational::zero();
    for_each_vector(table.order(), n, |g| {
        let mut prob = BigRational::one();
        for r in 0..n {
            prob *= &law.row_distribution(&table, r, g)[0];
            if prob.is_zero() {
                break;
            }
        }
        rhs += prob;
    });
    let equal = lhs == rhs;
    Ok(MomentIdentity { lhs, rhs, equal })
}

/// Mixed-radix increment; false once every digit has wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for (i, d) in digits.iter_mut().enumerate() {
        *d += 1;
        if *d < radix(i) {
            return true;
        }
        *d = 0;
    }
    false
}

/// Invariant factors of both sides of the bidiagonal embedding identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokIdentity {
    pub embedding_divisors: Vec<BigUint>,
    pub product_divisors: Vec<BigUint>,
    pub embedding_free_rank: usize,
    pub product_free_rank: usize,
}

impl CokIdentity {
    pub fn holds(&self) -> bool {
        self.embedding_divisors == self.product_divisors && self.embedding_free_rank == self.product_free_rank
    }
}

/// Nontrivial invariant factors of the bidiagonal embedding and of the product
/// `A_1 ⋯ A_k`, sorted.
pub fn cok_identity(factors: &[IntMatrix]) -> Result<CokIdentity> {
    let n = factors.first().map_or(0, IntMatrix::rows);
    if n * factors.len() > MAX_EMBEDDING_DIM {
        return Err(Error::EnumerationTooLarge {
            size: format!("n*k = {}", n * factors.len()),
            limit: MAX_EMBEDDING_DIM as u64,
        });
    }
    let embedding = build_bidiagonal_embedding_int(factors)?;
    let product = IntMatrix::product(factors)?;
    let side = |m: &IntMatrix| {
        let diag = snf_diagonal(m);
        let free = diag.iter().filter(|d| d.is_zero()).count() + m.cols() - diag.len();
        let mut divisors = nontrivial_divisors(&diag);
        divisors.sort();
        (divisors, free)
    };
    let (embedding_divisors, embedding_free_rank) = side(&embedding);
    let (product_divisors, product_free_rank) = side(&product);
    Ok(CokIdentity { embedding_divisors, product_divisors, embedding_free_rank, product_free_rank })
}

/// True iff the embedding and the product have isomorphic cokernels.
pub fn verify_cok_identity(factors: &[IntMatrix]) -> Result<bool> {
    Ok(cok_identity(factors)?.holds())
}

/// `|Hom(G_λ, G_μ)|` by enumerating every tuple of generator images and keeping those
/// whose orders divide the generator orders.
pub fn hom_count_brute_force(lambda: &Partition, mu: &Partition, p: u64) -> Result<BigUint> {
    let target = AbelianPGroup::new(p, mu.clone())?.elements()?;
    guard_power(target.order(), lambda.len(), ENUMERATION_LIMIT)?;
    let mut count = 0u64;
    for_each_vector(target.order(), lambda.len(), |images| {
        let ok = images
            .iter()
            .zip(lambda.parts())
            .all(|(&h, &e)| target.scale(h, (p as i64).pow(e)) == 0);
        count += u64::from(ok);
    });
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::EntryLaw;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn single_entry_moment() {
        let law = FiniteSupportMatrixLaw::iid(1, 1, EntryLaw::uniform(&[0, 1])).unwrap();
        let g = AbelianPGroup::cyclic(2, 1).unwrap();
        let r = verify_moment_identity(&law, &g).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(3, 2), q(3, 2)));
        assert!(r.equal);
        let law = FiniteSupportMatrixLaw::iid(1, 1, EntryLaw::constant(1)).unwrap();
        let r = verify_moment_identity(&law, &g).unwrap();
        assert_eq!(r.lhs, q(1, 1));
        assert!(r.equal);
    }

    #[test]
    fn two_by_two_moment() {
        let law = FiniteSupportMatrixLaw::iid(2, 2, EntryLaw::uniform(&[0, 1, 2])).unwrap();
        let r = verify_moment_identity(&law, &AbelianPGroup::cyclic(3, 1).unwrap()).unwrap();
        assert!(r.equal, "{} vs {}", r.lhs, r.rhs);
    }

    #[test]
    fn moment_guard() {
        let law = FiniteSupportMatrixLaw::iid(3, 3, EntryLaw::uniform(&(0..5).collect::<Vec<_>>())).unwrap();
        let g = AbelianPGroup::cyclic(2, 1).unwrap();
        assert!(matches!(verify_moment_identity(&law, &g), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn cok_examples() {
        let two = IntMatrix::from_rows(&[[2]]).unwrap();
        let three = IntMatrix::from_rows(&[[3]]).unwrap();
        let id = cok_identity(&[two, three]).unwrap();
        assert!(id.holds());
        assert_eq!(id.product_divisors, vec![BigUint::from(6u8)]);
        assert!(verify_cok_identity(&[IntMatrix::identity(2), IntMatrix::identity(2)]).unwrap());
        let big = vec![IntMatrix::identity(5); 5];
        assert!(verify_cok_identity(&big).is_err());
    }

    #[test]
    fn hom_brute_force_matches_formula() {
        for lambda in crate::pgroups::partitions_up_to(3, 3) {
            for mu in crate::pgroups::partitions_up_to(3, 3) {
                for p in [2, 3] {
                    assert_eq!(hom_count_brute_force(&lambda, &mu, p).unwrap(), hom_count(&lambda, &mu, p));
                }
            }
        }
    }
}
