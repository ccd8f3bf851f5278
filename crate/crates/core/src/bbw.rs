//! Borel-Weil-Bott cohomology of irreducible homogeneous bundles on
//! Grassmannians and their products.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bundle::{AmbientSpace, BundleExpr, Factor};
use crate::schur::{GLWeight, IrrepSummand, LeviRep};
use crate::{Error, Result};

/// Outcome of Borel-Weil-Bott on a single Grassmannian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BbwResult {
    Vanishes,
    /// All cohomology sits in `degree` and is the GL(n)-irreducible of
    /// highest weight `weight`.
    Nonzero { degree: usize, weight: GLWeight, dim: u64 },
}

/// Cohomology of `Σ_α Q ⊗ Σ_β R` on `Gr(k, n)`, where `α` has length `n-k`
/// and `β` has length `k` (both dominant, entries of any sign).
pub fn bbw_single(alpha: &GLWeight, beta: &GLWeight, factor: Factor) -> Result<BbwResult> {
    if alpha.len() != factor.q_rank() {
        return Err(Error::WeightLength { weight: alpha.entries().to_vec(), len: alpha.len(), rank: factor.q_rank() });
    }
    if beta.len() != factor.k {
        return Err(Error::WeightLength { weight: beta.entries().to_vec(), len: beta.len(), rank: factor.k });
    }
    for w in [alpha, beta] {
        if !w.is_dominant() {
            return Err(Error::NonDominant { weight: w.entries().to_vec() });
        }
    }
    let mut gamma = alpha.entries().to_vec();
    gamma.extend_from_slice(beta.entries());
    Ok(match bbw_concat(&gamma) {
        None => BbwResult::Vanishes,
        Some((degree, weight)) => {
            let dim = GLWeight::new(weight.clone()).dim()?;
            BbwResult::Nonzero { degree, weight: GLWeight::new(weight), dim }
        }
    })
}

/// Core of the algorithm on the concatenated weight `γ`: `None` if `γ+δ` has
/// a repeated entry, else the number of pairs `i<j` with `γ_i - i < γ_j - j`
/// and the weight `sort(γ+δ) - δ`.
pub(crate) fn bbw_concat(gamma: &[i32]) -> Option<(usize, Vec<i32>)> {
    let n = gamma.len();
    let shifted: Vec<i32> = gamma.iter().enumerate().map(|(i, &g)| g + (n - 1 - i) as i32).collect();
    let mut degree = 0;
    for i in 0..n {
        for j in i + 1..n {
            if shifted[i] == shifted[j] {
                return None;
            }
            if shifted[i] < shifted[j] {
                degree += 1;
            }
        }
    }
    let mut sorted = shifted;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let weight = sorted.iter().enumerate().map(|(i, &s)| s - (n - 1 - i) as i32).collect();
    Some((degree, weight))
}

/// One irreducible piece of a cohomology group: the GL(V_i)-weights per
/// factor, how many copies, and the dimension of one copy.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CohomologyPiece {
    pub weights: Vec<GLWeight>,
    pub multiplicity: u64,
    #[serde(with = "crate::json_int::u64")]
    pub dim: u64,
}

/// Cohomology of a direct sum of irreducible homogeneous bundles, degree by
/// degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<DegreeGroup>", from = "Vec<DegreeGroup>")]
pub struct CohomologyTable {
    pub entries: BTreeMap<usize, Vec<CohomologyPiece>>,
}

// JSON objects only have string keys, which do not survive buffering inside
// tagged enums; the wire form is a list instead.
#[derive(Serialize, Deserialize)]
struct DegreeGroup {
    degree: usize,
    pieces: Vec<CohomologyPiece>,
}

impl From<CohomologyTable> for Vec<DegreeGroup> {
    fn from(t: CohomologyTable) -> Self {
        t.entries.into_iter().map(|(degree, pieces)| DegreeGroup { degree, pieces }).collect()
    }
}

impl From<Vec<DegreeGroup>> for CohomologyTable {
    fn from(v: Vec<DegreeGroup>) -> Self {
        let mut entries: BTreeMap<usize, Vec<CohomologyPiece>> = BTreeMap::new();
        for g in v {
            entries.entry(g.degree).or_default().extend(g.pieces);
        }
        CohomologyTable { entries }
    }
}

impl CohomologyTable {
    /// Total dimension in each non-zero degree.
    pub fn dims(&self) -> BTreeMap<usize, u64> {
        self.entries
            .iter()
            .map(|(&d, v)| (d, v.iter().map(|p| p.multiplicity * p.dim).sum()))
            .filter(|(_, x)| *x > 0)
            .collect()
    }

    pub fn euler_char(&self) -> i64 {
        self.dims().iter().map(|(&d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
    }
}

/// Künneth assembly: per-factor Borel-Weil-Bott, degrees added, dimensions
/// multiplied. Returns `None` when some factor vanishes.
pub fn bbw_summand(summand: &IrrepSummand, ambient: &AmbientSpace) -> Result<Option<(usize, Vec<GLWeight>, u64)>> {
    if summand.factors.len() != ambient.len() {
        return Err(Error::FactorCount { expected: ambient.len(), got: summand.factors.len() });
    }
    let mut degree = 0;
    let mut weights = Vec::with_capacity(ambient.len());
    let mut dim = 1u64;
    for ((a, b), &f) in summand.factors.iter().zip(ambient.factors()) {
        match bbw_single(a, b, f)? {
            BbwResult::Vanishes => return Ok(None),
            BbwResult::Nonzero { degree: d, weight, dim: x } => {
                degree += d;
                dim = dim.checked_mul(x).ok_or(Error::Overflow("cohomology dimension"))?;
                weights.push(weight);
            }
        }
    }
    Ok(Some((degree, weights, dim)))
}

/// Cohomology table of a list of irreducible summands.
pub fn bbw_product(summands: &[IrrepSummand], ambient: &AmbientSpace) -> Result<CohomologyTable> {
    let mut table = CohomologyTable::default();
    for s in summands {
        if let Some((degree, weights, dim)) = bbw_summand(s, ambient)? {
            table.entries.entry(degree).or_default().push(CohomologyPiece { weights, multiplicity: s.multiplicity, dim });
        }
    }
    for v in table.entries.values_mut() {
        v.sort();
    }
    Ok(table)
}

/// Cohomology of a bundle expression on the ambient.
pub fn cohomology(expr: &BundleExpr, ambient: &AmbientSpace) -> Result<CohomologyTable> {
    bbw_product(&expr.rep(ambient)?.summands()?, ambient)
}

/// `Σ (-1)^i h^i` of a bundle expression, from Borel-Weil-Bott.
pub fn euler_char_bbw(expr: &BundleExpr, ambient: &AmbientSpace) -> Result<i64> {
    Ok(cohomology(expr, ambient)?.euler_char())
}

/// Dimensions per degree of a decomposed representation, without keeping
/// the GL(V)-weights. This is the hot path of the Koszul computations.
pub fn cohomology_dims(rep: &LeviRep, ambient: &AmbientSpace) -> Result<BTreeMap<usize, u64>> {
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    let factors = ambient.factors();
    for (w, &m) in rep.terms() {
        if m < 0 {
            return Err(Error::NegativeMultiplicity { weight: w.clone(), mult: m });
        }
        let mut degree = 0;
        let mut dim = m as u64;
        let mut offset = 0;
        let mut vanished = false;
        for f in factors {
            match bbw_concat(&w[offset..offset + f.n]) {
                None => {
                    vanished = true;
                    break;
                }
                Some((d, weight)) => {
                    degree += d;
                    let x = crate::schur::weyl_dim(&GLWeight::new(weight), f.n)?;
                    dim = dim.checked_mul(x).ok_or(Error::Overflow("cohomology dimension"))?;
                }
            }
            offset += f.n;
        }
        if !vanished {
            *out.entry(degree).or_insert(0) += dim;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(k: usize, n: usize) -> AmbientSpace {
        AmbientSpace::grassmannian(k, n).unwrap()
    }

    #[test]
    fn sections_of_q_dual_twisted() {
        let g = gr(2, 9);
        let e = BundleExpr::q(0).dual().twist(vec![1]);
        let t = cohomology(&e, &g).unwrap();
        assert_eq!(t.dims(), BTreeMap::from([(0, 84)]));
        assert_eq!(euler_char_bbw(&e, &g).unwrap(), 84);
    }

    #[test]
    fn cotangent_has_h11() {
        for (k, n) in [(2, 5), (3, 8), (1, 4)] {
            let g = gr(k, n);
            let t = cohomology(&g.cotangent(), &g).unwrap();
            assert_eq!(t.dims(), BTreeMap::from([(1, 1)]));
            assert_eq!(euler_char_bbw(&g.cotangent(), &g).unwrap(), -1);
        }
    }

    #[test]
    fn repeated_entry_vanishes() {
        // O(-1) on P^2
        let f = Factor::projective(2).unwrap();
        let r = bbw_single(&GLWeight::new(vec![0, 0]), &GLWeight::new(vec![1]), f).unwrap();
        assert_eq!(r, BbwResult::Vanishes);
    }

    #[test]
    fn canonical_bundle_of_projective_space() {
        // O(-3) on P^2 has H^2 = C
        let f = Factor::projective(2).unwrap();
        match bbw_single(&GLWeight::new(vec![0, 0]), &GLWeight::new(vec![3]), f).unwrap() {
            BbwResult::Nonzero { degree, dim, .. } => {
                assert_eq!(degree, 2);
                assert_eq!(dim, 1);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn degree_zero_iff_dominant() {
        let f = Factor::new(2, 5).unwrap();
        let a = GLWeight::new(vec![2, 1, 0]);
        let b = GLWeight::new(vec![0, -1]);
        match bbw_single(&a, &b, f).unwrap() {
            BbwResult::Nonzero { degree, .. } => assert_eq!(degree, 0),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn trivial_on_product() {
        let g = AmbientSpace::new(vec![Factor::new(2, 5).unwrap(), Factor::new(1, 7).unwrap()]).unwrap();
        let t = cohomology(&BundleExpr::trivial(2), &g).unwrap();
        assert_eq!(t.dims(), BTreeMap::from([(0, 1)]));
    }
}
