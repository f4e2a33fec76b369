use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::ring::{Modulus, ResidueRing, Residues};
use super::IntMatrix;
use crate::error::{Error, Result};
use crate::pgroups::Partition;

/// Dense matrix of residues modulo `p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicMatrix {
    rows: usize,
    cols: usize,
    modulus: Modulus,
    pub(crate) residues: Residues,
}

impl PadicMatrix {
    /// Reduces integer entries modulo `p^N`.
    pub fn from_i64(rows: usize, cols: usize, modulus: Modulus, entries: &[i64]) -> Result<Self> {
        check_shape(rows, cols, entries.len())?;
        Ok(PadicMatrix { rows, cols, modulus, residues: Residues::from_i64(&modulus, entries) })
    }

    /// Takes already reduced residues; every entry must be below `p^N`.
    pub fn from_residues(rows: usize, cols: usize, modulus: Modulus, entries: Vec<BigUint>) -> Result<Self> {
        check_shape(rows, cols, entries.len())?;
        let m = modulus.value();
        if let Some(bad) = entries.iter().find(|x| **x >= m) {
            return Err(Error::UnreducedResidue { value: bad.to_string(), modulus: m.to_string() });
        }
        Ok(PadicMatrix { rows, cols, modulus, residues: Residues::from_biguints(&modulus, entries) })
    }

    /// Reduction of an integer matrix.
    pub fn reduce(m: &IntMatrix, modulus: Modulus) -> Self {
        let entries = m.entries().iter().map(|x| modulus.reduce(x)).collect();
        PadicMatrix {
            rows: m.rows(),
            cols: m.cols(),
            modulus,
            residues: Residues::from_biguints(&modulus, entries),
        }
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        let mut e = vec![0i64; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        PadicMatrix::from_i64(n, n, modulus, &e).expect("square identity")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn precision(&self) -> u32 {
        self.modulus.precision()
    }

    pub fn get(&self, r: usize, c: usize) -> BigUint {
        self.residues.get(r * self.cols + c)
    }

    pub fn entries(&self) -> Vec<BigUint> {
        (0..self.rows * self.cols).map(|i| self.residues.get(i)).collect()
    }

    /// Whether every entry is zero modulo `p^N`.
    pub fn is_zero(&self) -> bool {
        (0..self.rows * self.cols).all(|i| self.residues.is_zero_at(i))
    }

    /// Integer lift with entries in `[0, p^N)`.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.entries().into_iter().map(BigInt::from).collect())
            .expect("shape already validated")
    }

    pub fn mul(&self, other: &PadicMatrix) -> Result<PadicMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::Mismatch("matrices over different residue rings".into()));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let residues = match (&self.residues, &other.residues) {
            (Residues::Word(a), Residues::Word(b)) => {
                let ring = self.modulus.word_ring().expect("word storage implies word ring");
                Residues::Word(mat_mul(&ring, a, b, self.rows, self.cols, other.cols))
            }
            (Residues::DoubleWord(a), Residues::DoubleWord(b)) => {
                let ring = self.modulus.double_word_ring().expect("double-word storage implies double-word ring");
                Residues::DoubleWord(mat_mul(&ring, a, b, self.rows, self.cols, other.cols))
            }
            (Residues::Wide(a), Residues::Wide(b)) => {
                let ring = self.modulus.big_ring();
                Residues::Wide(mat_mul(&ring, a, b, self.rows, self.cols, other.cols))
            }
            _ => unreachable!("storage is determined by the modulus"),
        };
        Ok(PadicMatrix { rows: self.rows, cols: other.cols, modulus: self.modulus, residues })
    }
}

fn check_shape(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension(format!("matrix must be nonempty, got {rows}x{cols}")));
    }
    if len != rows * cols {
        return Err(Error::Dimension(format!("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)));
    }
    Ok(())
}

fn mat_mul<R: ResidueRing>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    n: usize,
    inner: usize,
    m: usize,
) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); n * m];
    for i in 0..n {
        let row = &mut out[i * m..(i + 1) * m];
        for l in 0..inner {
            let x = &a[i * inner + l];
            if ring.is_zero(x) {
                continue;
            }
            let brow = &b[l * m..(l + 1) * m];
            for (o, y) in row.iter_mut().zip(brow) {
                *o = ring.add(o, &ring.mul(x, y));
            }
        }
    }
    out
}

/// Elementary-divisor valuations found by elimination over `Z/p^N`.
///
/// `valuations` holds the positive valuations in descending order (a partition);
/// unit pivots are only counted. `saturated_count` positions vanished modulo `p^N`,
/// so their valuation is only known to be at least `precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorValuations {
    pub valuations: Vec<u32>,
    pub unit_count: usize,
    pub saturated_count: usize,
    pub precision: u32,
}

impl DivisorValuations {
    pub fn partition(&self) -> Partition {
        Partition::from_unsorted(self.valuations.clone())
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated_count > 0
    }

    pub(crate) fn merge_units(mut self, units: usize) -> Self {
        self.unit_count += units;
        self
    }
}

/// Valuation-aware elimination of a matrix over `Z/p^N`.
///
/// The pivot is always an entry of minimal valuation; its column is cleared with row
/// operations and the pivot row and column are dropped.
pub fn padic_valuations(m: &PadicMatrix) -> DivisorValuations {
    match &m.residues {
        Residues::Word(v) => {
            let ring = m.modulus.word_ring().expect("word storage implies word ring");
            eliminate_dense(&ring, m.rows, m.cols, v.clone())
        }
        Residues::DoubleWord(v) => {
            let ring = m.modulus.double_word_ring().expect("double-word storage implies double-word ring");
            eliminate_dense(&ring, m.rows, m.cols, v.clone())
        }
        Residues::Wide(v) => eliminate_dense(&m.modulus.big_ring(), m.rows, m.cols, v.clone()),
    }
}

pub(crate) fn eliminate_dense<R: ResidueRing>(
    ring: &R,
    rows: usize,
    cols: usize,
    mut a: Vec<R::Elem>,
) -> DivisorValuations {
    let mut live_rows: Vec<usize> = (0..rows).collect();
    let mut live_cols: Vec<usize> = (0..cols).collect();
    let mut valuations = Vec::new();
    let mut unit_count = 0;

    while !live_rows.is_empty() && !live_cols.is_empty() {
        let mut best: Option<(usize, usize, u32)> = None;
        'scan: for (ri, &r) in live_rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                if let Some(v) = ring.valuation(&a[r * cols + c]) {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((ri, ci, v));
                        if v == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((ri, ci, v)) = best else { break };
        let (r, c) = (live_rows[ri], live_cols[ci]);
        let unit = ring.shift_down(&a[r * cols + c], v);
        let inv = ring.inverse_unit(&unit);
        live_rows.swap_remove(ri);
        live_cols.swap_remove(ci);

        for &x in &live_rows {
            let head = &a[x * cols + c];
            if ring.is_zero(head) {
                continue;
            }
            let f = ring.mul(&ring.shift_down(head, v), &inv);
            for &y in &live_cols {
                let updated = ring.sub_mul(&a[x * cols + y], &f, &a[r * cols + y]);
                a[x * cols + y] = updated;
            }
        }
        if v == 0 {
            unit_count += 1;
        } else {
            valuations.push(v);
        }
    }

    valuations.sort_unstable_by(|a, b| b.cmp(a));
    let saturated_count = rows.min(cols) - unit_count - valuations.len();
    DivisorValuations { valuations, unit_count, saturated_count, precision: ring.precision() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    #[test]
    fn diagonal_examples() {
        let m = PadicMatrix::from_i64(2, 2, modulus(2, 16), &[2, 0, 0, 8]).unwrap();
        let v = padic_valuations(&m);
        assert_eq!((v.valuations.clone(), v.saturated_count), (vec![3, 1], 0));

        let m = PadicMatrix::from_i64(2, 2, modulus(2, 2), &[2, 0, 0, 8]).unwrap();
        let v = padic_valuations(&m);
        assert_eq!((v.valuations.clone(), v.saturated_count), (vec![1], 1));
    }

    #[test]
    fn unreduced_residue_rejected() {
        let m = modulus(3, 2);
        assert!(PadicMatrix::from_residues(1, 1, m, vec![BigUint::from(9u32)]).is_err());
        assert!(PadicMatrix::from_residues(1, 1, m, vec![BigUint::from(8u32)]).is_ok());
    }

    #[test]
    fn wide_storage_matches_word_storage() {
        let entries = [6i64, -4, 9, 12, 7, 3, -2, 18, 27];
        let word = PadicMatrix::from_i64(3, 3, modulus(3, 30), &entries).unwrap();
        let wide = PadicMatrix::from_i64(3, 3, modulus(3, 60), &entries).unwrap();
        assert!(matches!(wide.residues, Residues::Wide(_)));
        let (a, b) = (padic_valuations(&word), padic_valuations(&wide));
        assert_eq!(a.valuations, b.valuations);
        assert_eq!(a.unit_count, b.unit_count);
    }

    #[test]
    fn rank_mod_q() {
        let q = modulus((1 << 61) - 1, 1);
        let m = PadicMatrix::from_i64(3, 3, q, &[1, 2, 3, 2, 4, 6, 1, 0, 1]).unwrap();
        assert_eq!(padic_valuations(&m).unit_count, 2);
    }
}
