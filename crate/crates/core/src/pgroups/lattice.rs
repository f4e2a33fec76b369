use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{AbelianPGroup, ElementTable, Subgroup};
use crate::error::{Error, Result};

/// Refuse lattices with more subgroups than this; pairwise inclusion work is quadratic.
pub const MAX_SUBGROUPS: usize = 10_000;

/// All subgroups of a small `G_λ`, sorted by order, with their covering relation.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: AbelianPGroup,
    table: ElementTable,
    subgroups: Vec<Subgroup>,
    /// `covers[j]`: indices `i` with `H_i ⊂ H_j` of index `p`.
    covers: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    pub fn group(&self) -> &AbelianPGroup {
        &self.group
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Index of the trivial subgroup (always 0).
    pub fn trivial(&self) -> usize {
        0
    }

    /// Index of the full group (always last).
    pub fn full(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Subgroups covered by `H_j`.
    pub fn covers(&self, j: usize) -> &[usize] {
        &self.covers[j]
    }

    /// `H_i ⊆ H_j`.
    pub fn includes(&self, i: usize, j: usize) -> bool {
        self.subgroups[i].is_subgroup_of(&self.subgroups[j])
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|s| s == h)
    }

    /// For every subgroup, the indices of its proper subgroups.
    pub fn strict_downsets(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|j| (0..j).filter(|&i| self.subgroups[i].order() < self.subgroups[j].order() && self.includes(i, j)).collect())
            .collect()
    }

    /// `c(G, i)` for `i = 0..=ℓ(G)`: strict chains `{0} ⊊ H_1 ⊊ ... ⊊ H_i`.
    pub fn chain_counts(&self) -> Vec<BigUint> {
        let ell = self.group.ell() as usize;
        let down = self.strict_downsets();
        // ending[j][i]: strict chains of length i from {0} ending at H_j.
        let mut ending: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); ell + 1]; self.len()];
        ending[0][0] = BigUint::from(1u32);
        for j in 1..self.len() {
            for &i in &down[j] {
                for len in 1..=ell {
                    if !ending[i][len - 1].is_zero() {
                        let add = ending[i][len - 1].clone();
                        ending[j][len] += add;
                    }
                }
            }
        }
        let mut totals = vec![BigUint::zero(); ell + 1];
        for row in &ending {
            for (t, x) in totals.iter_mut().zip(row) {
                *t += x;
            }
        }
        totals
    }
}

/// Every subgroup of `G`, built upward from `{0}` by adjoining elements whose
/// `p`-th multiple already lies in the current subgroup.
pub fn enumerate_subgroups(group: &AbelianPGroup) -> Result<SubgroupLattice> {
    let table = group.elements()?;
    let mut subgroups = vec![table.trivial_subgroup()];
    let mut covers: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<Subgroup, usize> = HashMap::from([(subgroups[0].clone(), 0)]);

    let mut layer = vec![0usize];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &hi in &layer {
            let h = subgroups[hi].clone();
            let mut reached: Vec<usize> = Vec::new();
            for g in 0..table.order() {
                if h.contains(g) || !h.contains(table.times_p(g)) {
                    continue;
                }
                if reached.iter().any(|&k| subgroups[k].contains(g)) {
                    continue;
                }
                let k = table.extend_by(&h, g);
                let ki = match index.get(&k) {
                    Some(&ki) => ki,
                    None => {
                        if subgroups.len() >= MAX_SUBGROUPS {
                            return Err(Error::LatticeTooLarge { limit: MAX_SUBGROUPS });
                        }
                        let ki = subgroups.len();
                        index.insert(k.clone(), ki);
                        subgroups.push(k);
                        covers.push(Vec::new());
                        next.push(ki);
                        ki
                    }
                };
                covers[ki].push(hi);
                reached.push(ki);
            }
        }
        layer = next;
    }

    // Layers were produced in increasing order already; keep a stable order by size.
    for c in &mut covers {
        c.sort_unstable();
    }
    Ok(SubgroupLattice { group: group.clone(), table, subgroups, covers })
}

/// `c(G, i)`, zero for `i > ℓ(G)`.
pub fn chain_count(group: &AbelianPGroup, i: usize) -> Result<BigUint> {
    let counts = enumerate_subgroups(group)?.chain_counts();
    Ok(counts.get(i).cloned().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::Partition;

    fn group(p: u64, parts: &[u32]) -> AbelianPGroup {
        AbelianPGroup::new(p, Partition::new(parts.to_vec()).unwrap()).unwrap()
    }

    fn counts(p: u64, parts: &[u32]) -> Vec<u64> {
        let l = enumerate_subgroups(&group(p, parts)).unwrap();
        l.chain_counts().iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(enumerate_subgroups(&group(2, &[1])).unwrap().len(), 2);
        assert_eq!(enumerate_subgroups(&group(2, &[1, 1])).unwrap().len(), 5);
        assert_eq!(enumerate_subgroups(&group(2, &[2])).unwrap().len(), 3);
        assert_eq!(enumerate_subgroups(&group(3, &[1, 1])).unwrap().len(), 6);
        assert_eq!(enumerate_subgroups(&group(2, &[])).unwrap().len(), 1);
        // Z/4 + Z/2 has 8 subgroups.
        assert_eq!(enumerate_subgroups(&group(2, &[2, 1])).unwrap().len(), 8);
    }

    #[test]
    fn chain_count_examples() {
        assert_eq!(counts(2, &[1]), vec![1, 1]);
        assert_eq!(counts(2, &[1, 1]), vec![1, 4, 3]);
        assert_eq!(counts(2, &[2]), vec![1, 2, 1]);
        assert_eq!(counts(2, &[]), vec![1]);
        assert_eq!(chain_count(&group(2, &[1]), 5).unwrap(), BigUint::zero());
    }

    #[test]
    fn lattice_is_ordered_and_closed() {
        let l = enumerate_subgroups(&group(2, &[2, 1])).unwrap();
        assert!(l.subgroups()[l.trivial()].is_trivial());
        assert_eq!(l.subgroups()[l.full()].order(), 8);
        for j in 0..l.len() {
            for &i in l.covers(j) {
                assert_eq!(l.subgroups()[i].order() * 2, l.subgroups()[j].order());
                assert!(l.includes(i, j));
            }
            assert!(l.includes(0, j) && l.includes(j, l.full()));
        }
    }

    #[test]
    fn guard_triggers() {
        assert!(matches!(
            enumerate_subgroups(&AbelianPGroup::elementary(2, 12).unwrap()),
            Err(Error::LatticeTooLarge { .. })
        ));
    }
}
