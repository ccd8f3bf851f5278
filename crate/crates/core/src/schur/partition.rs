use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A weakly decreasing sequence of non-negative integers with trailing
/// zeros removed, so `(2,1)` and `(2,1,0,0)` compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts.iter().map(|&p| p as i64).collect()));
        }
        Ok(Self::trimmed(parts))
    }

    /// Builds from signed entries, rejecting negatives.
    pub fn from_signed(parts: &[i32]) -> Result<Self> {
        if parts.iter().any(|&p| p < 0) {
            return Err(Error::InvalidPartition(parts.iter().map(|&p| p as i64).collect()));
        }
        Self::new(parts.iter().map(|&p| p as u32).collect())
    }

    fn trimmed(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The integer being partitioned.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part `i`, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0) as usize;
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p as usize > j).count() as u32)
            .collect();
        Partition { parts }
    }

    pub fn fits_in_box(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// Entries padded with zeros to length `n`, as signed integers.
    pub fn padded(&self, n: usize) -> Vec<i32> {
        (0..n).map(|i| self.part(i) as i32).collect()
    }

    /// All partitions of `n` with at most `max_len` parts, in decreasing
    /// lexicographic order.
    pub fn all_of(n: u32, max_len: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(n, n, max_len, &mut cur, &mut out);
        out
    }

    /// All partitions fitting in a `rows` x `cols` box, ordered by size then
    /// decreasing lexicographic order.
    pub fn in_box(rows: usize, cols: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        for size in 0..=(rows as u32 * cols) {
            let mut cur = Vec::new();
            let mut level = Vec::new();
            fill(size, cols, rows, &mut cur, &mut level);
            out.extend(level);
        }
        out
    }
}

fn fill(rest: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, slots - 1, cur, out);
        cur.pop();
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_ignored() {
        let a = Partition::new(vec![2, 1, 0, 0]).unwrap();
        let b = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::from_signed(&[1, -1]).is_err());
    }

    #[test]
    fn conjugate_involution() {
        for p in Partition::all_of(7, 7) {
            assert_eq!(p.conjugate().conjugate(), p);
            assert_eq!(p.conjugate().size(), 7);
        }
    }

    #[test]
    fn counts() {
        assert_eq!(Partition::all_of(5, 5).len(), 7);
        assert_eq!(Partition::all_of(5, 2).len(), 3);
        // binomial(6, 2) partitions in a 2 x 4 box
        assert_eq!(Partition::in_box(2, 4).len(), 15);
    }
}
