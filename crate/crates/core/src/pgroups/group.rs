use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::Partition;
use crate::error::{Error, Result};

/// Largest group handled by element-level enumeration.
pub const MAX_ENUMERATED_ORDER: usize = 1 << 12;

/// `G_λ = Z/p^{λ_1} (+) Z/p^{λ_2} (+) ...`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianPGroup {
    p: u64,
    lambda: Partition,
}

impl AbelianPGroup {
    pub fn new(p: u64, lambda: Partition) -> Result<Self> {
        if !crate::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(AbelianPGroup { p, lambda })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        AbelianPGroup::new(p, Partition::empty())
    }

    /// `Z/p^e`.
    pub fn cyclic(p: u64, e: u32) -> Result<Self> {
        AbelianPGroup::new(p, Partition::from_unsorted(vec![e]))
    }

    /// `(Z/p)^r`.
    pub fn elementary(p: u64, r: usize) -> Result<Self> {
        AbelianPGroup::new(p, Partition::from_unsorted(vec![1; r]))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// `p^{|λ|}`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.lambda.size())
    }

    /// Length of a maximal subgroup chain, `|λ|`.
    pub fn ell(&self) -> u32 {
        self.lambda.size()
    }

    /// Cyclic factor orders `p^{λ_i}`, or `None` if some factor does not fit a word.
    pub fn factor_orders(&self) -> Option<Vec<u64>> {
        self.lambda.parts().iter().map(|&e| self.p.checked_pow(e)).collect()
    }

    /// Element table, refusing groups above [`MAX_ENUMERATED_ORDER`].
    pub fn elements(&self) -> Result<ElementTable> {
        let too_large = || Error::GroupTooLarge { order: self.order().to_string(), limit: MAX_ENUMERATED_ORDER };
        if self.order() > BigUint::from(MAX_ENUMERATED_ORDER) {
            return Err(too_large());
        }
        let moduli = self.factor_orders().ok_or_else(too_large)?;
        Ok(ElementTable::new(self.p, moduli))
    }
}

impl fmt::Display for AbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lambda.is_empty() {
            return write!(f, "0");
        }
        for (i, e) in self.lambda.parts().iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *e == 1 {
                write!(f, "Z/{}", self.p)?;
            } else {
                write!(f, "Z/{}^{}", self.p, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}[p={}]", self.lambda, self.p)
    }
}

/// Mixed-radix indexing of the elements of a small `G_λ`.
///
/// Element `x` with coordinates `(x_1, ..., x_r)`, `0 <= x_i < p^{λ_i}`, has index
/// `x_1 + m_1 x_2 + m_1 m_2 x_3 + ...`. Index 0 is the identity.
#[derive(Clone, Debug)]
pub struct ElementTable {
    p: u64,
    moduli: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
    times_p: Vec<usize>,
}

impl ElementTable {
    fn new(p: u64, moduli: Vec<u64>) -> Self {
        let mut strides = Vec::with_capacity(moduli.len());
        let mut order = 1usize;
        for &m in &moduli {
            strides.push(order);
            order *= m as usize;
        }
        let mut table = ElementTable { p, moduli, strides, order, times_p: Vec::new() };
        table.times_p = (0..order).map(|x| table.scale(x, p as i64)).collect();
        table
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn coords(&self, x: usize) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&m, &s)| ((x / s) as u64) % m)
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&c, &m), &s)| (c % m) as usize * s)
            .sum()
    }

    /// Index of the `i`-th standard generator.
    pub fn generator(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let m = m as usize;
            out += ((a / s % m + b / s % m) % m) * s;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let m = m as usize;
            out += ((m - a / s % m) % m) * s;
        }
        out
    }

    /// `k * a` for any integer `k`.
    pub fn scale(&self, a: usize, k: i64) -> usize {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let c = (a / s) as u64 % m;
            let k = k.rem_euclid(m as i64) as u64;
            let v = (c as u128 * k as u128 % m as u128) as usize;
            out += v * s;
        }
        out
    }

    pub fn times_p(&self, a: usize) -> usize {
        self.times_p[a]
    }

    /// Additive order of `a`, a power of `p`.
    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut ord = 1;
        while x != 0 {
            x = self.times_p[x];
            ord *= self.p;
        }
        ord
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut bits = vec![0u64; self.order.div_ceil(64)];
        bits[0] = 1;
        Subgroup { bits, order: 1 }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let mut bits = vec![u64::MAX; self.order.div_ceil(64)];
        let tail = self.order % 64;
        if tail != 0 {
            *bits.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        Subgroup { bits, order: self.order }
    }

    /// `⟨h, g⟩` for a subgroup `h` and an element `g` with `p g ∈ h`.
    pub(crate) fn extend_by(&self, h: &Subgroup, g: usize) -> Subgroup {
        debug_assert!(h.contains(self.times_p(g)));
        let members: Vec<usize> = h.elements().collect();
        let mut out = h.clone();
        let mut shift = g;
        for _ in 1..self.p {
            for &x in &members {
                out.insert(self.add(x, shift));
            }
            shift = self.add(shift, g);
        }
        out
    }

    /// Subgroup generated by a list of elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut h = self.trivial_subgroup();
        for &g in gens {
            // Walk g's cyclic tower from the top so each step has p-th multiple inside h.
            let mut tower = vec![g];
            while !h.contains(*tower.last().unwrap()) {
                let next = self.times_p(*tower.last().unwrap());
                tower.push(next);
            }
            tower.pop();
            while let Some(x) = tower.pop() {
                h = self.extend_by(&h, x);
            }
        }
        h
    }
}

/// A subgroup stored as its full element set (bitset over element indices).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    bits: Vec<u64>,
    order: usize,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    fn insert(&mut self, x: usize) {
        let word = &mut self.bits[x / 64];
        let mask = 1u64 << (x % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.order += 1;
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order <= other.order && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Element indices in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }

    /// `log_p` of the order.
    pub fn log_order(&self, p: u64) -> u32 {
        let mut n = self.order;
        let mut e = 0;
        while n > 1 {
            n /= p as usize;
            e += 1;
        }
        e
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

/// `|Hom(G_λ, G_μ)| = p^{Σ_{i,j} min(λ_i, μ_j)}`.
pub fn hom_count(lambda: &Partition, mu: &Partition, p: u64) -> BigUint {
    let exponent: u64 = lambda
        .parts()
        .iter()
        .flat_map(|&a| mu.parts().iter().map(move |&b| u64::from(a.min(b))))
        .sum();
    if exponent == 0 {
        return BigUint::one();
    }
    BigUint::from(p).pow(exponent.to_u32().expect("hom exponent fits u32"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u64, parts: &[u32]) -> AbelianPGroup {
        AbelianPGroup::new(p, Partition::new(parts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn ell_and_order() {
        assert_eq!(group(2, &[3]).ell(), 3);
        assert_eq!(group(2, &[]).ell(), 0);
        assert_eq!(group(2, &[2, 1]).ell(), 3);
        assert_eq!(group(3, &[2, 1]).order(), BigUint::from(27u32));
        assert!(AbelianPGroup::new(4, Partition::empty()).is_err());
    }

    #[test]
    fn hom_examples() {
        let one = Partition::new(vec![1]).unwrap();
        assert_eq!(hom_count(&one, &one, 2), BigUint::from(2u32));
        assert_eq!(hom_count(&Partition::empty(), &Partition::new(vec![5]).unwrap(), 7), BigUint::one());
        assert_eq!(hom_count(&Partition::new(vec![2, 1]).unwrap(), &one, 3), BigUint::from(9u32));
    }

    #[test]
    fn element_arithmetic() {
        let t = group(2, &[2, 1]).elements().unwrap();
        assert_eq!(t.order(), 8);
        let g = t.index(&[3, 1]);
        assert_eq!(t.coords(t.add(g, g)), vec![2, 0]);
        assert_eq!(t.add(g, t.neg(g)), 0);
        assert_eq!(t.element_order(g), 4);
        assert_eq!(t.scale(g, -1), t.neg(g));
        assert_eq!(t.generated(&[g]).order(), 4);
        assert_eq!(t.generated(&[g, t.generator(1)]).order(), 8);
        assert!(group(2, &[13]).elements().is_err());
    }
}
