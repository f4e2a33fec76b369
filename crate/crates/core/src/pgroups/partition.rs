use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing tuple of positive integers. `()` is the empty partition.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let decreasing = parts.windows(2).all(|w| w[0] >= w[1]);
        if !decreasing || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts descending and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Part `i` (zero-based), zero beyond the last part.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `λ'_i = #{j : λ_j >= i}`.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        Partition((1..=width).map(|i| self.0.iter().take_while(|&&x| x >= i).count() as u32).collect())
    }

    /// The first `d` entries of the conjugate, zero-padded: `rank(p^{i-1} G_λ)` for `i = 1..=d`.
    pub fn conjugate_prefix(&self, d: usize) -> Vec<u32> {
        let c = self.conjugate();
        (0..d).map(|i| c.part(i)).collect()
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"3,1"`, `"(3,1)"`, `"()"` or `""`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = body
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Config(format!("bad partition {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for x in (1..=rest.min(max)).rev() {
            cur.push(x);
            rec(rest - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions with `|λ| <= max_size` and at most `max_parts` parts.
pub fn partitions_up_to(max_size: u32, max_parts: usize) -> Vec<Partition> {
    (0..=max_size)
        .flat_map(partitions_of)
        .filter(|p| p.len() <= max_parts)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(part(&[2, 2]).conjugate(), part(&[2, 2]));
        assert_eq!(part(&[3, 1]).conjugate_prefix(5), vec![2, 1, 1, 0, 0]);
    }

    #[test]
    fn validation_and_parsing() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!("(3,1)".parse::<Partition>().unwrap(), part(&[3, 1]));
        assert_eq!("2, 2".parse::<Partition>().unwrap(), part(&[2, 2]));
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,x".parse::<Partition>().is_err());
        assert_eq!(part(&[3, 1]).to_string(), "(3,1)");
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn serde_rejects_invalid() {
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert_eq!(serde_json::from_str::<Partition>("[2,1]").unwrap(), part(&[2, 1]));
    }
}
