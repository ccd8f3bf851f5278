//! The numerical search for Fano varieties of K3 type: a divisor `X` in
//! `|-K_Y / t|` on a key variety `Y` of dimension `D = 2t + 1` and index `m`
//! is a candidate when `t` divides `m`, i.e. `2t + 1 = D` and `a t = m`.
//! Candidates are only candidates; the Hodge engine decides.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bundle::ZeroLocusSpec;
use crate::{Error, Result};

/// Families of key varieties, all realized as zero loci on `Gr(k, k+l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// The Grassmannian itself.
    Gr,
    /// Symplectic Grassmannian, zero locus of `∧²R^∨`.
    SGr,
    /// Bisymplectic Grassmannian, zero locus of `∧²R^∨ ⊕ ∧²R^∨`.
    Ml,
    /// Orthogonal Grassmannian, zero locus of `Sym²R^∨`.
    OGr,
    /// Zero locus of `Q^∨(1)`.
    Zq1,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Gr, Family::SGr, Family::Ml, Family::OGr, Family::Zq1];

    pub fn dimension(self, k: i64, l: i64) -> i64 {
        match self {
            Family::Gr => k * l,
            Family::SGr => k * l - k * (k - 1) / 2,
            Family::Ml => k * l - k * (k - 1),
            Family::OGr => k * l - k * (k + 1) / 2,
            Family::Zq1 => l * (k - 1),
        }
    }

    pub fn index(self, k: i64, l: i64) -> i64 {
        match self {
            Family::Gr => k + l,
            Family::SGr => l + 1,
            Family::Ml => l - k + 2,
            Family::OGr => l - 1,
            Family::Zq1 => k + 1,
        }
    }

    /// Parameters that describe a variety of the family at all.
    pub fn in_range(self, k: i64, l: i64) -> bool {
        match self {
            // Gr(k, k+l) = Gr(l, k+l): keep k ≤ l
            Family::Gr => 2 <= k && k <= l,
            Family::SGr | Family::Ml | Family::OGr => k >= 2 && l >= 1,
            Family::Zq1 => k >= 2 && l >= 2,
        }
    }

    /// Whether the variety is non-empty (a general section has a non-empty
    /// zero locus of the expected dimension).
    pub fn feasible(self, k: i64, l: i64) -> bool {
        match self {
            // a general form on C^{k+l} has isotropic k-planes iff
            // k ≤ ⌈(k+l)/2⌉
            Family::SGr => 2 * k <= k + l + (k + l) % 2,
            Family::OGr => k <= l,
            _ => true,
        }
    }

    /// Bundle cutting the key variety out of `Gr(k, k+l)`, in the text syntax.
    fn cut_text(self) -> &'static str {
        match self {
            Family::Gr => "",
            Family::SGr => "wedge2(dual(R1))",
            Family::Ml => "2*wedge2(dual(R1))",
            Family::OGr => "sym2(dual(R1))",
            Family::Zq1 => "dual(Q1)(1)",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gr => "Gr",
            Family::SGr => "SGr",
            Family::Ml => "Ml",
            Family::OGr => "OGr",
            Family::Zq1 => "Zq1",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A solution `(k, l, a)` of `2t + 1 = D(k,l)`, `a t = m(k,l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CandidateTriple {
    pub family: Family,
    pub k: i64,
    pub l: i64,
    pub a: i64,
    pub t: i64,
    /// Dimension `D` of the key variety.
    pub dim: i64,
    /// Index `m` of the key variety.
    pub index: i64,
    pub feasible: bool,
}

impl CandidateTriple {
    /// Builds the triple if `(k, l, a)` solves the equations.
    pub fn solve(family: Family, k: i64, l: i64, a: i64) -> Option<Self> {
        if !family.in_range(k, l) || a < 1 {
            return None;
        }
        let dim = family.dimension(k, l);
        let index = family.index(k, l);
        if dim < 3 || dim % 2 == 0 || index < 1 {
            return None;
        }
        let t = (dim - 1) / 2;
        (a * t == index).then_some(CandidateTriple { family, k, l, a, t, dim, index, feasible: family.feasible(k, l) })
    }

    /// `t ≥ 2`: the divisor has even dimension at least 4. `t = 1` gives K3
    /// surfaces.
    pub fn is_admissible(&self) -> bool {
        self.t >= 2 && self.feasible
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.k, self.l, self.a)
    }

    fn check(&self) -> bool {
        2 * self.t + 1 == self.family.dimension(self.k, self.l) && self.a * self.t == self.family.index(self.k, self.l)
    }
}

impl fmt::Display for CandidateTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({},{},{}): {}({},{}), D={}, index={}, t={}",
            self.family,
            self.k,
            self.l,
            self.a,
            self.family,
            self.k,
            self.k + self.l,
            self.dim,
            self.index,
            self.t
        )
    }
}

/// Every solution with `k ≤ k_max`, `l ≤ l_max` and `a ≤ max(k_max, l_max)`,
/// feasible or not, of any `t ≥ 1`, in lexicographic order.
pub fn solutions(family: Family, k_max: i64, l_max: i64) -> Vec<CandidateTriple> {
    let a_max = k_max.max(l_max);
    let mut out = Vec::new();
    for k in 1..=k_max {
        for l in 1..=l_max {
            let dim = family.dimension(k, l);
            let index = family.index(k, l);
            if !family.in_range(k, l) || dim < 3 || dim % 2 == 0 || index < 1 {
                continue;
            }
            let t = (dim - 1) / 2;
            if index % t == 0 && index / t <= a_max {
                let c = CandidateTriple::solve(family, k, l, index / t).expect("solves by construction");
                assert!(c.check());
                out.push(c);
            }
        }
    }
    out
}

/// Admissible candidates: feasible solutions with `t ≥ 2`.
pub fn enumerate(family: Family, k_max: i64, l_max: i64) -> Vec<CandidateTriple> {
    solutions(family, k_max, l_max).into_iter().filter(CandidateTriple::is_admissible).collect()
}

/// Feasible solutions with `t = 1`, i.e. K3 surfaces.
pub fn surfaces(family: Family, k_max: i64, l_max: i64) -> Vec<CandidateTriple> {
    solutions(family, k_max, l_max).into_iter().filter(|c| c.t == 1 && c.feasible).collect()
}

/// A divisor of multidegree `a` in a product of Grassmannians `Gr(k_i, k_i + l_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProductCandidate {
    /// `(k_i, l_i)` with `k_i ≤ l_i`, sorted
    pub factors: Vec<(i64, i64)>,
    pub a: Vec<i64>,
    pub t: i64,
    pub dim: i64,
}

impl ProductCandidate {
    /// At least one factor is a Grassmannian other than a projective space.
    pub fn has_grassmannian(&self) -> bool {
        self.factors.iter().any(|&(k, _)| k > 1)
    }

    fn check(&self) -> bool {
        let dim: i64 = self.factors.iter().map(|&(k, l)| k * l).sum();
        dim == 2 * self.t + 1 && self.factors.iter().zip(&self.a).all(|(&(k, l), &a)| a * self.t == k + l)
    }

    pub fn ambient_text(&self) -> String {
        self.factors
            .iter()
            .map(|&(k, l)| if k == 1 { format!("P{l}") } else { format!("Gr({k},{})", k + l) })
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

impl fmt::Display for ProductCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "{} with ({}), D={}, t={}", self.ambient_text(), a.join(","), self.dim, self.t)
    }
}

/// Products of `2..=max_factors` Grassmannians (`k ≤ l` per factor) carrying
/// a divisor `O(a_1, ..., a_s)` with `a_i t = k_i + l_i` and `2t + 1 = D`.
pub fn enumerate_products(max_factors: usize, k_max: i64, l_max: i64) -> Vec<ProductCandidate> {
    let kinds: Vec<(i64, i64)> =
        (1..=k_max).flat_map(|k| (k.max(1)..=l_max).map(move |l| (k, l))).filter(|&(k, l)| k <= l).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    fn go(
        kinds: &[(i64, i64)],
        start: usize,
        stack: &mut Vec<(i64, i64)>,
        dim: i64,
        g: i64,
        max_factors: usize,
        out: &mut Vec<ProductCandidate>,
    ) {
        if stack.len() >= 2 && dim % 2 == 1 {
            let t = (dim - 1) / 2;
            if t >= 2 && g % t == 0 {
                let a = stack.iter().map(|&(k, l)| (k + l) / t).collect();
                let c = ProductCandidate { factors: stack.clone(), a, t, dim };
                assert!(c.check());
                out.push(c);
            }
        }
        if stack.len() == max_factors {
            return;
        }
        for (i, &(k, l)) in kinds.iter().enumerate().skip(start) {
            let d2 = dim + k * l;
            let g2 = gcd(g, k + l);
            // t divides every index, so D = 2t + 1 ≤ 2 gcd + 1
            if d2 > 2 * g2 + 1 {
                continue;
            }
            stack.push((k, l));
            go(kinds, i, stack, d2, g2, max_factors, out);
            stack.pop();
        }
    }
    go(&kinds, 0, &mut stack, 0, 0, max_factors, &mut out);
    out.sort();
    out
}

/// The divisor as a zero-locus specification.
pub fn to_zero_locus(c: &CandidateTriple) -> Result<ZeroLocusSpec> {
    if !c.feasible {
        return Err(Error::Invalid(format!("{c}: the key variety is empty")));
    }
    if !c.check() {
        return Err(Error::Invalid(format!("{c}: not a solution")));
    }
    let cut = c.family.cut_text();
    let line = format!("O({})", c.a);
    let text = if cut.is_empty() { line } else { format!("{cut} + {line}") };
    Ok(crate::dsl::parse(&format!("Gr({},{}): {text}", c.k, c.k + c.l))?)
}

/// The divisor in a product as a zero-locus specification.
pub fn product_to_zero_locus(c: &ProductCandidate) -> Result<ZeroLocusSpec> {
    let a: Vec<String> = c.a.iter().map(|x| x.to_string()).collect();
    Ok(crate::dsl::parse(&format!("{}: O({})", c.ambient_text(), a.join(",")))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(v: &[CandidateTriple]) -> Vec<(i64, i64, i64)> {
        v.iter().map(CandidateTriple::triple).collect()
    }

    #[test]
    fn grassmannian() {
        assert_eq!(triples(&enumerate(Family::Gr, 12, 12)), vec![(3, 7, 1)]);
    }

    #[test]
    fn symplectic_before_and_after_feasibility() {
        let all = triples(&solutions(Family::SGr, 12, 12).into_iter().filter(|c| c.t >= 2).collect::<Vec<_>>());
        for t in [(2, 3, 2), (3, 6, 1), (5, 3, 2), (10, 6, 1)] {
            assert!(all.contains(&t), "{t:?}");
        }
        // the odd-dimensional case k > l + 1 is empty as well
        assert_eq!(all, vec![(2, 3, 2), (3, 6, 1), (5, 3, 2), (10, 5, 3), (10, 6, 1)]);
        assert_eq!(triples(&enumerate(Family::SGr, 12, 12)), vec![(2, 3, 2), (3, 6, 1)]);
    }

    #[test]
    fn brute_force_agrees() {
        for fam in Family::ALL {
            let mut brute = Vec::new();
            for k in 1..=12 {
                for l in 1..=12 {
                    for a in 1..=12 {
                        if let Some(c) = CandidateTriple::solve(fam, k, l, a) {
                            brute.push(c);
                        }
                    }
                }
            }
            assert_eq!(brute, solutions(fam, 12, 12), "{fam}");
        }
    }

    #[test]
    fn family_tags_parse() {
        assert_eq!("ogr".parse::<Family>().unwrap(), Family::OGr);
        assert!("flag".parse::<Family>().is_err());
    }

    #[test]
    fn zero_locus_encodings() {
        let c = CandidateTriple::solve(Family::Ml, 3, 5, 1).unwrap();
        let s = to_zero_locus(&c).unwrap();
        assert_eq!(s.to_string(), "Gr(3,8): 2*wedge2(dual(R1)) + O(1)");
        assert_eq!(s.expected_dim().unwrap(), 2 * c.t);
        let c = CandidateTriple::solve(Family::SGr, 5, 3, 2).unwrap();
        assert!(to_zero_locus(&c).is_err());
    }
}
