use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::Partition;
use crate::{Error, Result};

/// An integral weight of GL(n); entries may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GLWeight(Vec<i32>);

impl GLWeight {
    pub fn new(entries: Vec<i32>) -> Self {
        GLWeight(entries)
    }

    pub fn zero(n: usize) -> Self {
        GLWeight(vec![0; n])
    }

    /// The partition padded with zeros to length `n`.
    pub fn from_partition(p: &Partition, n: usize) -> Result<Self> {
        if p.len() > n {
            return Err(Error::WeightLength { weight: p.padded(p.len()), len: p.len(), rank: n });
        }
        Ok(GLWeight(p.padded(n)))
    }

    /// Pads `entries` with zeros to length `n`.
    pub fn padded(entries: &[i32], n: usize) -> Result<Self> {
        if entries.len() > n {
            return Err(Error::WeightLength { weight: entries.to_vec(), len: entries.len(), rank: n });
        }
        let mut v = entries.to_vec();
        v.resize(n, 0);
        Ok(GLWeight(v))
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_dominant(&self) -> bool {
        is_dominant(&self.0)
    }

    /// Highest weight of the dual representation.
    pub fn dual(&self) -> GLWeight {
        GLWeight(self.0.iter().rev().map(|&x| -x).collect())
    }

    pub fn size(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    /// Dimension of the irreducible representation.
    pub fn dim(&self) -> Result<u64> {
        weyl_dim(self, self.len())
    }
}

impl fmt::Display for GLWeight {
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

pub(crate) fn is_dominant(w: &[i32]) -> bool {
    w.windows(2).all(|p| p[0] >= p[1])
}

/// Dimension of the GL(n) irreducible with highest weight `w` (padded with
/// zeros to length `n` when shorter), by the product formula
/// `prod_{i<j} (w_i - w_j + j - i) / (j - i)`.
pub fn weyl_dim(w: &GLWeight, n: usize) -> Result<u64> {
    let w = if w.len() == n { w.clone() } else { GLWeight::padded(w.entries(), n)? };
    if !w.is_dominant() {
        return Err(Error::NonDominant { weight: w.0 });
    }
    Ok(weyl_dim_unchecked(&w.0))
}

/// Weyl dimension of a weight already known to be dominant.
pub(crate) fn weyl_dim_unchecked(w: &[i32]) -> u64 {
    let n = w.len();
    // small cases stay in u128 to avoid big-integer traffic in hot loops
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let mut big = false;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let a = (w[i] - w[j]) as u128 + (j - i) as u128;
            match num.checked_mul(a) {
                Some(v) => num = v,
                None => {
                    big = true;
                    break 'outer;
                }
            }
            den *= (j - i) as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    if !big {
        debug_assert_eq!(den, 1);
        return u64::try_from(num).expect("representation dimension exceeds u64");
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from((w[i] - w[j]) as i64 + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    (num / den).to_u64().expect("representation dimension exceeds u64")
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(w: &[i32], n: usize) -> u64 {
        weyl_dim(&GLWeight::padded(w, n).unwrap(), n).unwrap()
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(dim(&[1, 1, 1], 9), 84);
        assert_eq!(dim(&[], 9), 1);
        assert_eq!(dim(&[1, 0, 0, 0, 0, 0, 0, 0, -1], 9), 80);
        assert_eq!(dim(&[2], 3), 6);
        assert_eq!(dim(&[2, 1], 3), 8);
    }

    #[test]
    fn determinant_twist_keeps_dimension() {
        assert_eq!(dim(&[3, 1, 0], 3), dim(&[5, 3, 2], 3));
        assert_eq!(dim(&[-1, -1], 2), 1);
    }

    #[test]
    fn non_dominant_is_rejected() {
        assert!(weyl_dim(&GLWeight::new(vec![0, 1]), 2).is_err());
        assert!(weyl_dim(&GLWeight::new(vec![-1]), 3).is_err());
    }

    #[test]
    fn dual_has_same_dimension() {
        let w = GLWeight::new(vec![4, 2, 2, -1]);
        assert_eq!(w.dim().unwrap(), w.dual().dim().unwrap());
    }
}
