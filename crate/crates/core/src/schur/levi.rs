use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::character::{levi_character, LaurentCharacter};
use super::weight::{is_dominant, weyl_dim_unchecked};
use super::GLWeight;
use crate::{Error, Result};

/// A representation of a product of general linear groups (the Levi factor
/// of the parabolic defining the ambient), stored as multiplicities of
/// irreducibles keyed by their concatenated highest weights.
///
/// Multiplicities are signed so that virtual representations can be formed
/// during straightening; genuine bundles have non-negative ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviRep {
    blocks: Vec<usize>,
    terms: BTreeMap<Vec<i32>, i64>,
}

/// One irreducible homogeneous bundle `⊗_i Σ_{α_i} Q_i ⊗ Σ_{β_i} R_i` with a
/// multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepSummand {
    /// `(α, β)` per Grassmannian factor: weights for `Q` and for `R`.
    pub factors: Vec<(GLWeight, GLWeight)>,
    pub multiplicity: u64,
}

impl IrrepSummand {
    /// Rank of one copy: the product of the Weyl dimensions.
    pub fn rank(&self) -> u64 {
        self.factors
            .iter()
            .map(|(a, b)| weyl_dim_unchecked(a.entries()) * weyl_dim_unchecked(b.entries()))
            .product()
    }

    /// Concatenated weight in block order.
    pub fn weight(&self) -> Vec<i32> {
        let mut w = Vec::new();
        for (a, b) in &self.factors {
            w.extend_from_slice(a.entries());
            w.extend_from_slice(b.entries());
        }
        w
    }

    pub fn blocks(&self) -> Vec<usize> {
        self.factors.iter().flat_map(|(a, b)| [a.len(), b.len()]).collect()
    }
}

impl fmt::Display for IrrepSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity != 1 {
            write!(f, "{}*", self.multiplicity)?;
        }
        for (i, (a, b)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊠ ")?;
            }
            write!(f, "S{a}Q{} ⊗ S{b}R{}", i + 1, i + 1)?;
        }
        Ok(())
    }
}

/// Sorts `exp + rho` inside each block. Returns `None` when some block has a
/// repeated entry, otherwise the dominant weight `sort(exp+rho)-rho` and the
/// sign of the sorting permutation.
pub fn straighten(exp: &[i32], blocks: &[usize]) -> Option<(Vec<i32>, i64)> {
    let mut out = Vec::with_capacity(exp.len());
    let mut sign = 1i64;
    let mut offset = 0;
    let mut buf: Vec<i32> = Vec::new();
    for &size in blocks {
        buf.clear();
        buf.extend((0..size).map(|i| exp[offset + i] + (size - 1 - i) as i32));
        // insertion sort, counting transpositions; blocks are short
        for i in 1..size {
            let mut j = i;
            while j > 0 && buf[j - 1] < buf[j] {
                buf.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && buf[j - 1] == buf[j] {
                return None;
            }
            if j < i && buf[j] == buf[j + 1] {
                return None;
            }
        }
        out.extend(buf.iter().enumerate().map(|(i, &x)| x - (size - 1 - i) as i32));
        offset += size;
    }
    Some((out, sign))
}

fn dominant_per_block(w: &[i32], blocks: &[usize]) -> bool {
    let mut offset = 0;
    for &size in blocks {
        if !is_dominant(&w[offset..offset + size]) {
            return false;
        }
        offset += size;
    }
    true
}

impl LeviRep {
    pub fn zero(blocks: &[usize]) -> Self {
        LeviRep { blocks: blocks.to_vec(), terms: BTreeMap::new() }
    }

    pub fn trivial(blocks: &[usize]) -> Self {
        let n = blocks.iter().sum();
        Self::irreducible(blocks, vec![0; n]).expect("zero weight is dominant")
    }

    pub fn irreducible(blocks: &[usize], weight: Vec<i32>) -> Result<Self> {
        if weight.len() != blocks.iter().sum::<usize>() || !dominant_per_block(&weight, blocks) {
            return Err(Error::NonDominant { weight });
        }
        let mut r = Self::zero(blocks);
        r.terms.insert(weight, 1);
        Ok(r)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_weight(&mut self, w: Vec<i32>, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.terms.entry(w).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn add_assign(&mut self, other: &LeviRep, scale: i64) {
        assert_eq!(self.blocks, other.blocks, "representations of different groups");
        for (w, &m) in &other.terms {
            *self.terms.entry(w.clone()).or_insert(0) += m * scale;
        }
        self.terms.retain(|_, v| *v != 0);
    }

    pub fn add(&self, other: &LeviRep) -> LeviRep {
        let mut out = self.clone();
        out.add_assign(other, 1);
        out
    }

    pub fn scale(&self, k: i64) -> LeviRep {
        let mut out = LeviRep::zero(&self.blocks);
        if k != 0 {
            out.terms = self.terms.iter().map(|(w, &m)| (w.clone(), m * k)).collect();
        }
        out
    }

    /// Rank, counting multiplicities.
    pub fn dim(&self) -> i64 {
        self.terms.iter().map(|(w, &m)| m * self.irrep_dim(w) as i64).sum()
    }

    pub fn irrep_dim(&self, w: &[i32]) -> u64 {
        let mut d = 1u64;
        let mut offset = 0;
        for &size in &self.blocks {
            d *= weyl_dim_unchecked(&w[offset..offset + size]);
            offset += size;
        }
        d
    }

    pub fn dual(&self) -> LeviRep {
        let mut out = LeviRep::zero(&self.blocks);
        for (w, &m) in &self.terms {
            let mut d = Vec::with_capacity(w.len());
            let mut offset = 0;
            for &size in &self.blocks {
                d.extend(w[offset..offset + size].iter().rev().map(|x| -x));
                offset += size;
            }
            out.terms.insert(d, m);
        }
        out
    }

    /// Adds a fixed vector to every highest weight; `shift` must be constant
    /// on each block (a twist by a character of the Levi group).
    pub fn shift(&self, shift: &[i32]) -> LeviRep {
        let terms = self
            .terms
            .iter()
            .map(|(w, &m)| (w.iter().zip(shift).map(|(a, b)| a + b).collect(), m))
            .collect();
        LeviRep { blocks: self.blocks.clone(), terms }
    }

    pub fn character(&self) -> LaurentCharacter {
        let mut out = LaurentCharacter::zero(&self.blocks);
        for (w, &m) in &self.terms {
            out.add_assign(&levi_character(&self.blocks, w), m);
        }
        out
    }

    /// Tensor product by the Brauer-Klimyk rule: the smaller factor is
    /// expanded into weights, each added to the highest weights of the other
    /// and straightened.
    pub fn tensor(&self, other: &LeviRep) -> LeviRep {
        assert_eq!(self.blocks, other.blocks, "representations of different groups");
        let (big, small) = if self.dim_abs() >= other.dim_abs() { (self, other) } else { (other, self) };
        let ch = small.character();
        let mut acc: BTreeMap<Vec<i32>, i64> = BTreeMap::new();
        let mut buf = Vec::new();
        for (lambda, &m) in &big.terms {
            for (mu, &c) in ch.iter() {
                buf.clear();
                buf.extend(lambda.iter().zip(mu).map(|(a, b)| a + b));
                if let Some((w, s)) = straighten(&buf, &self.blocks) {
                    *acc.entry(w).or_insert(0) += s * m * c;
                }
            }
        }
        acc.retain(|_, v| *v != 0);
        LeviRep { blocks: self.blocks.clone(), terms: acc }
    }

    fn dim_abs(&self) -> u64 {
        self.terms.iter().map(|(w, &m)| m.unsigned_abs() * self.irrep_dim(w)).sum()
    }

    pub fn wedge(&self, q: usize) -> Result<LeviRep> {
        Ok(decompose_levi(&self.character().wedge(q)?))
    }

    pub fn sym(&self, q: usize) -> Result<LeviRep> {
        Ok(decompose_levi(&self.character().sym(q)?))
    }

    /// Irreducible summands with their multiplicities; fails on virtual
    /// representations.
    pub fn summands(&self) -> Result<Vec<IrrepSummand>> {
        let pairs = self.blocks.len() / 2;
        let mut out = Vec::with_capacity(self.terms.len());
        for (w, &m) in &self.terms {
            if m < 0 {
                return Err(Error::NegativeMultiplicity { weight: w.clone(), mult: m });
            }
            let mut factors = Vec::with_capacity(pairs);
            let mut offset = 0;
            for f in 0..pairs {
                let a = self.blocks[2 * f];
                let b = self.blocks[2 * f + 1];
                factors.push((
                    GLWeight::new(w[offset..offset + a].to_vec()),
                    GLWeight::new(w[offset + a..offset + a + b].to_vec()),
                ));
                offset += a + b;
            }
            out.push(IrrepSummand { factors, multiplicity: m as u64 });
        }
        Ok(out)
    }

    pub fn from_summands(blocks: &[usize], summands: &[IrrepSummand]) -> Result<LeviRep> {
        let mut out = LeviRep::zero(blocks);
        for s in summands {
            if s.blocks() != blocks {
                return Err(Error::FactorCount { expected: blocks.len() / 2, got: s.factors.len() });
            }
            let w = s.weight();
            if !dominant_per_block(&w, blocks) {
                return Err(Error::NonDominant { weight: w });
            }
            out.add_weight(w, s.multiplicity as i64);
        }
        Ok(out)
    }
}

/// Decomposes a block-symmetric character into Levi irreducibles by
/// straightening every monomial (Brauer's formula). Linear in the number of
/// monomials; no symmetry check.
pub fn decompose_levi(chi: &LaurentCharacter) -> LeviRep {
    let blocks = chi.blocks().to_vec();
    let mut acc: BTreeMap<Vec<i32>, i64> = BTreeMap::new();
    for (e, &c) in chi.iter() {
        if let Some((w, s)) = straighten(e, &blocks) {
            *acc.entry(w).or_insert(0) += s * c;
        }
    }
    acc.retain(|_, v| *v != 0);
    LeviRep { blocks, terms: acc }
}

/// Decomposition by repeatedly removing the character of the irreducible
/// whose highest weight is the lexicographically largest monomial. Slower
/// than [`decompose_levi`]; kept as an independent algorithm.
pub fn decompose_by_peeling(chi: &LaurentCharacter) -> Result<LeviRep> {
    chi.check_symmetric()?;
    let blocks = chi.blocks().to_vec();
    let mut rest = chi.clone();
    let mut out = LeviRep::zero(&blocks);
    while !rest.is_zero() {
        let (top, c) = rest
            .iter()
            .max_by(|a, b| a.0.cmp(b.0))
            .map(|(e, &c)| (e.clone(), c))
            .expect("non-empty");
        if !dominant_per_block(&top, &blocks) {
            return Err(Error::NonDominant { weight: top });
        }
        rest.add_assign(&levi_character(&blocks, &top), -c);
        out.add_weight(top, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straighten_examples() {
        assert_eq!(straighten(&[0, 1], &[2]), None);
        assert_eq!(straighten(&[-1, 1], &[2]), Some((vec![0, 0], -1)));
        assert_eq!(straighten(&[2, 0, 5], &[2, 1]), Some((vec![2, 0, 5], 1)));
        assert_eq!(straighten(&[0, 3, 0], &[3]), Some((vec![2, 1, 0], -1)));
    }

    #[test]
    fn tensor_of_r_with_itself() {
        // R on Gr(2,n): R ⊗ R = Sym^2 R + ∧^2 R
        let blocks = [3, 2];
        let r = LeviRep::irreducible(&blocks, vec![0, 0, 0, 1, 0]).unwrap();
        let t = r.tensor(&r);
        assert_eq!(t.terms().len(), 2);
        assert_eq!(t.terms()[&vec![0, 0, 0, 2, 0]], 1);
        assert_eq!(t.terms()[&vec![0, 0, 0, 1, 1]], 1);
    }

    #[test]
    fn peeling_agrees_with_straightening() {
        let blocks = [3, 2];
        let a = LeviRep::irreducible(&blocks, vec![2, 1, 0, 0, -1]).unwrap();
        let b = LeviRep::irreducible(&blocks, vec![1, 1, 0, 1, 0]).unwrap();
        let ch = a.character().mul(&b.character());
        assert_eq!(decompose_levi(&ch), decompose_by_peeling(&ch).unwrap());
        assert_eq!(a.tensor(&b), decompose_levi(&ch));
    }

    #[test]
    fn dual_dims() {
        let blocks = [3, 2];
        let a = LeviRep::irreducible(&blocks, vec![2, 1, 0, 0, -1]).unwrap();
        assert_eq!(a.dual().dim(), a.dim());
        assert_eq!(a.dim(), 8 * 2);
    }
}
