//! Residue arithmetic modulo `p^N`.
//!
//! Three backends share the [`ResidueRing`] interface: [`WordRing`] keeps residues in a
//! `u64` (masked arithmetic when `p = 2`, `u128` reduction otherwise), [`DoubleWordRing`]
//! keeps masked `u128` residues for `p = 2, N <= 128`, and [`BigRing`] falls back to
//! `BigUint` for everything larger.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring `Z/p^N` for a prime `p` and precision `N >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: u64,
    precision: u32,
}

impl Modulus {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !crate::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::Config("precision must be at least 1".into()));
        }
        Ok(Modulus { p, precision })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Modulus::new(self.p, precision)
    }

    /// `p^N` as an integer.
    pub fn value(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.precision as usize)
    }

    pub fn reduce(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from(self.value());
        x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
    }

    pub(crate) fn word_ring(&self) -> Option<WordRing> {
        WordRing::new(self.p, self.precision)
    }

    /// Only for `p = 2` with `64 < N <= 128`.
    pub(crate) fn double_word_ring(&self) -> Option<DoubleWordRing> {
        if self.word_ring().is_some() {
            return None;
        }
        DoubleWordRing::new(self.p, self.precision)
    }

    pub(crate) fn big_ring(&self) -> BigRing {
        BigRing::new(self.p, self.precision)
    }
}

pub(crate) trait ResidueRing: Sync {
    type Elem: Clone + Send + Sync + std::fmt::Debug;

    fn precision(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn reduce_i64(&self, x: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// p-adic valuation of the residue; `None` for zero.
    fn valuation(&self, a: &Self::Elem) -> Option<u32>;
    /// Inverse of a unit (valuation 0).
    fn inverse_unit(&self, a: &Self::Elem) -> Self::Elem;
    /// Exact division of the canonical representative by `p^v`, where `v <= valuation(a)`.
    fn shift_down(&self, a: &Self::Elem, v: u32) -> Self::Elem;

    /// `a - f * b`, the elimination kernel.
    #[inline]
    fn sub_mul(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(f, b))
    }
}

/// Word-sized residues. Used when `p = 2, N <= 64` (masking) or `p^N <= 2^63`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WordRing {
    p: u64,
    precision: u32,
    modulus: u64,
    mask: Option<u64>,
}

impl WordRing {
    pub(crate) fn new(p: u64, precision: u32) -> Option<Self> {
        if p == 2 {
            if precision > 64 {
                return None;
            }
            let mask = if precision == 64 { u64::MAX } else { (1u64 << precision) - 1 };
            return Some(WordRing { p, precision, modulus: mask.wrapping_add(1), mask: Some(mask) });
        }
        let mut m: u64 = 1;
        for _ in 0..precision {
            m = m.checked_mul(p)?;
        }
        if m > 1u64 << 63 {
            return None;
        }
        Some(WordRing { p, precision, modulus: m, mask: None })
    }
}

impl ResidueRing for WordRing {
    type Elem = u64;

    fn precision(&self) -> u32 {
        self.precision
    }

    #[inline]
    fn zero(&self) -> u64 {
        0
    }

    #[inline]
    fn one(&self) -> u64 {
        1 & self.mask.unwrap_or(u64::MAX)
    }

    #[inline]
    fn reduce_i64(&self, x: i64) -> u64 {
        match self.mask {
            Some(mask) => (x as u64) & mask,
            None => (x as i128).rem_euclid(self.modulus as i128) as u64,
        }
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        match self.mask {
            Some(mask) => a.wrapping_add(*b) & mask,
            None => {
                let s = a + b;
                if s >= self.modulus {
                    s - self.modulus
                } else {
                    s
                }
            }
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        match self.mask {
            Some(mask) => a.wrapping_sub(*b) & mask,
            None => {
                if a >= b {
                    a - b
                } else {
                    a + self.modulus - b
                }
            }
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        match self.mask {
            Some(mask) => a.wrapping_mul(*b) & mask,
            None => ((*a as u128 * *b as u128) % self.modulus as u128) as u64,
        }
    }

    #[inline]
    fn valuation(&self, a: &u64) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        if self.p == 2 {
            return Some(a.trailing_zeros());
        }
        let mut v = 0;
        let mut x = *a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    fn inverse_unit(&self, a: &u64) -> u64 {
        match self.mask {
            Some(mask) => {
                // Newton iteration doubles the number of correct bits: 3, 6, ..., 192.
                let mut x = *a;
                for _ in 0..6 {
                    x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
                }
                x & mask
            }
            None => {
                let (g, s, _) = ext_gcd(*a as i128, self.modulus as i128);
                debug_assert_eq!(g, 1, "inverse of a non-unit");
                s.rem_euclid(self.modulus as i128) as u64
            }
        }
    }

    #[inline]
    fn shift_down(&self, a: &u64, v: u32) -> u64 {
        if self.p == 2 {
            a >> v
        } else {
            a / self.p.pow(v)
        }
    }
}

/// Masked `u128` residues modulo `2^N`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DoubleWordRing {
    precision: u32,
    mask: u128,
}

impl DoubleWordRing {
    pub(crate) fn new(p: u64, precision: u32) -> Option<Self> {
        if p != 2 || precision == 0 || precision > 128 {
            return None;
        }
        let mask = if precision == 128 { u128::MAX } else { (1u128 << precision) - 1 };
        Some(DoubleWordRing { precision, mask })
    }
}

impl ResidueRing for DoubleWordRing {
    type Elem = u128;

    fn precision(&self) -> u32 {
        self.precision
    }

    #[inline]
    fn zero(&self) -> u128 {
        0
    }

    #[inline]
    fn one(&self) -> u128 {
        1 & self.mask
    }

    #[inline]
    fn reduce_i64(&self, x: i64) -> u128 {
        (x as i128 as u128) & self.mask
    }

    #[inline]
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        a.wrapping_add(*b) & self.mask
    }

    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        a.wrapping_sub(*b) & self.mask
    }

    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        a.wrapping_mul(*b) & self.mask
    }

    #[inline]
    fn valuation(&self, a: &u128) -> Option<u32> {
        (*a != 0).then(|| a.trailing_zeros())
    }

    fn inverse_unit(&self, a: &u128) -> u128 {
        // 3, 6, ..., 384 correct bits.
        let mut x = *a;
        for _ in 0..7 {
            x = x.wrapping_mul(2u128.wrapping_sub(a.wrapping_mul(x)));
        }
        x & self.mask
    }

    #[inline]
    fn shift_down(&self, a: &u128, v: u32) -> u128 {
        a >> v
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Arbitrary-precision residues.
#[derive(Clone, Debug)]
pub(crate) struct BigRing {
    p: u64,
    precision: u32,
    p_big: BigUint,
    modulus: BigUint,
}

impl BigRing {
    pub(crate) fn new(p: u64, precision: u32) -> Self {
        let p_big = BigUint::from(p);
        let modulus = num_traits::pow(p_big.clone(), precision as usize);
        BigRing { p, precision, p_big, modulus }
    }
}

impl ResidueRing for BigRing {
    type Elem = BigUint;

    fn precision(&self) -> u32 {
        self.precision
    }

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn reduce_i64(&self, x: i64) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        BigInt::from(x).mod_floor(&m).to_biguint().expect("nonnegative")
    }

    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }

    fn valuation(&self, a: &BigUint) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        if self.p == 2 {
            return a.trailing_zeros().map(|z| z as u32);
        }
        let mut v = 0;
        let mut x = a.clone();
        loop {
            let (q, r) = x.div_rem(&self.p_big);
            if !r.is_zero() {
                return Some(v);
            }
            x = q;
            v += 1;
        }
    }

    fn inverse_unit(&self, a: &BigUint) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        let ext = BigInt::from(a.clone()).extended_gcd(&m);
        debug_assert!(ext.gcd.is_one(), "inverse of a non-unit");
        ext.x.mod_floor(&m).to_biguint().expect("nonnegative")
    }

    fn shift_down(&self, a: &BigUint, v: u32) -> BigUint {
        if self.p == 2 {
            a >> v as usize
        } else {
            a / num_traits::pow(self.p_big.clone(), v as usize)
        }
    }
}

/// Residue storage: word-sized when the modulus allows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Residues {
    Word(Vec<u64>),
    DoubleWord(Vec<u128>),
    Wide(Vec<BigUint>),
}

impl Residues {
    pub(crate) fn get(&self, idx: usize) -> BigUint {
        match self {
            Residues::Word(v) => BigUint::from(v[idx]),
            Residues::DoubleWord(v) => BigUint::from(v[idx]),
            Residues::Wide(v) => v[idx].clone(),
        }
    }

    pub(crate) fn is_zero_at(&self, idx: usize) -> bool {
        match self {
            Residues::Word(v) => v[idx] == 0,
            Residues::DoubleWord(v) => v[idx] == 0,
            Residues::Wide(v) => v[idx].is_zero(),
        }
    }

    pub(crate) fn from_biguints(modulus: &Modulus, values: Vec<BigUint>) -> Residues {
        if modulus.word_ring().is_some() {
            Residues::Word(values.iter().map(|x| x.to_u64().expect("reduced residue fits")).collect())
        } else if modulus.double_word_ring().is_some() {
            Residues::DoubleWord(values.iter().map(|x| x.to_u128().expect("reduced residue fits")).collect())
        } else {
            Residues::Wide(values)
        }
    }

    pub(crate) fn from_i64(modulus: &Modulus, values: &[i64]) -> Residues {
        if let Some(ring) = modulus.word_ring() {
            Residues::Word(values.iter().map(|&x| ring.reduce_i64(x)).collect())
        } else if let Some(ring) = modulus.double_word_ring() {
            Residues::DoubleWord(values.iter().map(|&x| ring.reduce_i64(x)).collect())
        } else {
            let ring = modulus.big_ring();
            Residues::Wide(values.iter().map(|&x| ring.reduce_i64(x)).collect())
        }
    }

    pub(crate) fn as_word(&self) -> &[u64] {
        match self {
            Residues::Word(v) => v,
            _ => unreachable!("storage is determined by the modulus"),
        }
    }

    pub(crate) fn as_double_word(&self) -> &[u128] {
        match self {
            Residues::DoubleWord(v) => v,
            _ => unreachable!("storage is determined by the modulus"),
        }
    }

    pub(crate) fn as_wide(&self) -> &[BigUint] {
        match self {
            Residues::Wide(v) => v,
            _ => unreachable!("storage is determined by the modulus"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_ring<R: ResidueRing>(ring: &R, samples: &[i64]) {
        for &a in samples {
            for &b in samples {
                let (x, y) = (ring.reduce_i64(a), ring.reduce_i64(b));
                let sum = ring.reduce_i64(a.wrapping_add(b));
                assert_eq!(format!("{:?}", ring.add(&x, &y)), format!("{:?}", sum));
                let diff = ring.reduce_i64(a.wrapping_sub(b));
                assert_eq!(format!("{:?}", ring.sub(&x, &y)), format!("{:?}", diff));
            }
            let x = ring.reduce_i64(a);
            if ring.valuation(&x) == Some(0) {
                let inv = ring.inverse_unit(&x);
                assert_eq!(format!("{:?}", ring.mul(&x, &inv)), format!("{:?}", ring.one()));
            }
        }
    }

    #[test]
    fn word_and_big_rings_agree_on_small_arithmetic() {
        let samples = [-7i64, -1, 0, 1, 2, 3, 5, 9, 12, 1000, -1000, 81];
        for (p, n) in [(2u64, 5u32), (2, 64), (3, 4), (5, 3), (7, 20)] {
            let word = WordRing::new(p, n).unwrap();
            check_ring(&word, &samples);
            let big = BigRing::new(p, n);
            check_ring(&big, &samples);
            for &a in &samples {
                for &b in &samples {
                    let w = word.mul(&word.reduce_i64(a), &word.reduce_i64(b));
                    let g = big.mul(&big.reduce_i64(a), &big.reduce_i64(b));
                    assert_eq!(BigUint::from(w), g, "p={p} N={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn double_word_agrees_with_big() {
        let samples = [-7i64, -1, 0, 1, 2, 3, 5, 12, 1000, -1000, i64::MAX, i64::MIN];
        for n in [65u32, 100, 128] {
            let dw = DoubleWordRing::new(2, n).unwrap();
            check_ring(&dw, &samples[..10]);
            let big = BigRing::new(2, n);
            for &a in &samples {
                for &b in &samples {
                    let w = dw.mul(&dw.reduce_i64(a), &dw.reduce_i64(b));
                    let g = big.mul(&big.reduce_i64(a), &big.reduce_i64(b));
                    assert_eq!(BigUint::from(w), g, "N={n} a={a} b={b}");
                }
                let x = dw.reduce_i64(a);
                assert_eq!(dw.valuation(&x), big.valuation(&big.reduce_i64(a)));
            }
        }
        assert!(Modulus::new(2, 64).unwrap().double_word_ring().is_none());
        assert!(Modulus::new(2, 129).unwrap().double_word_ring().is_none());
        assert!(Modulus::new(3, 70).unwrap().double_word_ring().is_none());
    }

    #[test]
    fn valuations() {
        let word = WordRing::new(3, 6).unwrap();
        assert_eq!(word.valuation(&0), None);
        assert_eq!(word.valuation(&word.reduce_i64(54)), Some(3));
        assert_eq!(word.shift_down(&54, 3), 2);
        let big = BigRing::new(2, 200);
        assert_eq!(big.valuation(&big.reduce_i64(-8)), Some(3));
    }

    #[test]
    fn word_ring_capacity() {
        assert!(WordRing::new(2, 64).is_some());
        assert!(WordRing::new(2, 65).is_none());
        assert!(WordRing::new(3, 39).is_some());
        assert!(WordRing::new(3, 41).is_none());
        assert!(Modulus::new(4, 3).is_err());
        assert!(Modulus::new(5, 0).is_err());
    }
}
