//! Smith normal form over the integers.
//!
//! Pivoting always moves the nonzero entry of smallest absolute value to the pivot
//! position and reduces its row and column by Euclidean division until both are clear.
//! A remaining entry not divisible by the pivot is folded into the pivot row, which
//! enforces the divisibility chain `d_1 | d_2 | ...`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;
use crate::pgroups::Partition;

/// Smith normal form diagonal `d_1 | d_2 | ... | d_r`, with `r = min(rows, cols)`.
///
/// Zero divisors (free summands) come last. `cok(m) = Z^cols / rowspan(m)` is
/// `(+) Z/d_i  (+)  Z^(cols - r)`.
pub fn snf_diagonal(m: &IntMatrix) -> Vec<BigUint> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let r_max = rows.min(cols);
    let mut diag = Vec::with_capacity(r_max);

    for t in 0..r_max {
        let Some((pr, pc)) = min_abs_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pr);
        swap_cols(&mut a, t, pc);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (head, tail) = a.split_at_mut(i);
                    for j in t..cols {
                        let delta = &q * &head[t][j];
                        tail[0][j] -= delta;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // Smaller remainders now sit in the pivot row or column.
                let (pr, pc) = min_abs_in_cross(&a, t, rows, cols);
                a.swap(t, pr);
                swap_cols(&mut a, t, pc);
                continue;
            }
            let pivot = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for j in t..cols {
                        head[t][j] += &tail[0][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].magnitude().clone());
    }
    diag.resize(r_max, BigUint::zero());
    diag
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &a[i][j];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &[Vec<BigInt>], t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..rows {
        if !a[i][t].is_zero() && a[i][t].magnitude() < a[best.0][best.1].magnitude() {
            best = (i, t);
        }
    }
    for j in t..cols {
        if !a[t][j].is_zero() && a[t][j].magnitude() < a[best.0][best.1].magnitude() {
            best = (t, j);
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], c1: usize, c2: usize) {
    if c1 != c2 {
        for row in a.iter_mut() {
            row.swap(c1, c2);
        }
    }
}

/// Sylow p-subgroup of the torsion of a cokernel, together with its free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SylowCokernel {
    pub partition: Partition,
    pub free_rank: usize,
}

/// Type of the Sylow p-subgroup of `cok(m)`: sorted p-valuations of the nonzero SNF
/// divisors. Zero divisors are counted in `free_rank` instead.
pub fn cokernel_partition(m: &IntMatrix, p: u64) -> SylowCokernel {
    let diag = snf_diagonal(m);
    sylow_from_divisors(&diag, m.cols(), p)
}

pub(crate) fn sylow_from_divisors(diag: &[BigUint], cols: usize, p: u64) -> SylowCokernel {
    let p_big = BigUint::from(p);
    let mut parts = Vec::new();
    let mut zeros = 0;
    for d in diag {
        if d.is_zero() {
            zeros += 1;
            continue;
        }
        let mut v = 0u32;
        let mut x = d.clone();
        loop {
            let (q, r) = x.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            x = q;
            v += 1;
        }
        if v > 0 {
            parts.push(v);
        }
    }
    SylowCokernel {
        partition: Partition::from_unsorted(parts),
        free_rank: zeros + cols - diag.len(),
    }
}

/// Nontrivial invariant factors (those different from 1), zeros included.
pub(crate) fn nontrivial_divisors(diag: &[BigUint]) -> Vec<BigUint> {
    diag.iter().filter(|d| d.to_u8() != Some(1)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[&[i64]]) -> Vec<u64> {
        let m = IntMatrix::from_rows(rows).unwrap();
        snf_diagonal(&m).iter().map(|d| d.to_u64().unwrap()).collect()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(snf(&[&[1, 0], &[0, 1]]), vec![1, 1]);
        assert_eq!(snf(&[&[2, 0], &[1, 3]]), vec![1, 6]);
        assert_eq!(snf(&[&[4, 2], &[2, 4]]), vec![2, 6]);
    }

    #[test]
    fn rectangular_and_singular() {
        assert_eq!(snf(&[&[2, 4, 6]]), vec![2]);
        assert_eq!(snf(&[&[0, 0], &[0, 0]]), vec![0, 0]);
        assert_eq!(snf(&[&[1, 2], &[2, 4]]), vec![1, 0]);
        assert_eq!(snf(&[&[6], &[4]]), vec![2]);
        // The classic example where divisibility needs the fold-in step.
        assert_eq!(snf(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[&[4, 0], &[0, 6]]), vec![2, 12]);
    }

    #[test]
    fn sylow_parts() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 8]]).unwrap();
        assert_eq!(cokernel_partition(&m, 2).partition.parts(), &[3, 1]);
        assert!(cokernel_partition(&m, 3).partition.is_empty());
        let m = IntMatrix::from_rows(&[[2, 0], [1, 3]]).unwrap();
        assert_eq!(cokernel_partition(&m, 2).partition.parts(), &[1]);
        let z = IntMatrix::from_rows(&[[0]]).unwrap();
        let s = cokernel_partition(&z, 2);
        assert_eq!((s.partition.len(), s.free_rank), (0, 1));
        let wide = IntMatrix::from_rows(&[[4, 0, 0]]).unwrap();
        let s = cokernel_partition(&wide, 2);
        assert_eq!((s.partition.parts(), s.free_rank), (&[2u32][..], 2));
    }
}
