//! Ambient products of Grassmannians, bundle expressions over them and
//! zero-locus specifications.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::schur::{LaurentCharacter, LeviRep};
use crate::{Error, Result};

/// The Grassmannian `Gr(k, n)` of `k`-planes in an `n`-dimensional space.
/// Projective space `P^d` is `Gr(1, d+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub k: usize,
    pub n: usize,
}

impl Factor {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidFactor { k, n });
        }
        Ok(Factor { k, n })
    }

    pub fn projective(d: usize) -> Result<Self> {
        Factor::new(1, d + 1)
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// Rank of the quotient bundle.
    pub fn q_rank(&self) -> usize {
        self.n - self.k
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "P{}", self.n - 1)
        } else {
            write!(f, "Gr({},{})", self.k, self.n)
        }
    }
}

/// A product of Grassmannians. Chern roots are laid out factor by factor,
/// each factor contributing the `n-k` roots of `Q` followed by the `k` roots
/// of `R`; `O(1)` on a factor is `det R^∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSpace {
    factors: Vec<Factor>,
}

impl AmbientSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("an ambient needs at least one factor".into()));
        }
        for f in &factors {
            Factor::new(f.k, f.n)?;
        }
        Ok(AmbientSpace { factors })
    }

    /// Shorthand for a single Grassmannian.
    pub fn grassmannian(k: usize, n: usize) -> Result<Self> {
        Self::new(vec![Factor::new(k, n)?])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    /// Sizes of the root blocks: `[n1-k1, k1, n2-k2, k2, ...]`.
    pub fn blocks(&self) -> Vec<usize> {
        self.factors.iter().flat_map(|f| [f.q_rank(), f.k]).collect()
    }

    pub fn nvars(&self) -> usize {
        self.factors.iter().map(|f| f.n).sum()
    }

    /// Offset of factor `i` in the root layout.
    pub fn offset(&self, i: usize) -> usize {
        self.factors[..i].iter().map(|f| f.n).sum()
    }

    /// Weight of the line bundle `O(d_1, ..., d_m)`.
    pub fn line_weight(&self, d: &[i64]) -> Result<Vec<i32>> {
        if d.len() != self.len() {
            return Err(Error::TwistArity { got: d.len(), expected: self.len() });
        }
        let mut w = Vec::with_capacity(self.nvars());
        for (f, &di) in self.factors.iter().zip(d) {
            let di = i32::try_from(di).map_err(|_| Error::Overflow("line bundle degree"))?;
            w.extend(std::iter::repeat_n(0, f.q_rank()));
            w.extend(std::iter::repeat_n(-di, f.k));
        }
        Ok(w)
    }

    /// The cotangent bundle `⊕ R_i ⊗ Q_i^∨`.
    pub fn cotangent(&self) -> BundleExpr {
        BundleExpr::Sum(
            (0..self.len())
                .map(|i| BundleExpr::Tensor(vec![BundleExpr::r(i), BundleExpr::q(i).dual()]))
                .collect(),
        )
    }

    /// The tangent bundle `⊕ R_i^∨ ⊗ Q_i`.
    pub fn tangent(&self) -> BundleExpr {
        self.cotangent().dual()
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

/// Tautological bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Taut {
    /// The rank `k` subbundle.
    R,
    /// The rank `n-k` quotient bundle.
    Q,
}

/// Symbolic bundle built from tautological and line bundles. Factor indices
/// are 0-based here (the text syntax is 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BundleExpr {
    Line(Vec<i64>),
    Taut(Taut, usize),
    Dual(Box<BundleExpr>),
    Wedge(usize, Box<BundleExpr>),
    Sym(usize, Box<BundleExpr>),
    Twist(Box<BundleExpr>, Vec<i64>),
    Tensor(Vec<BundleExpr>),
    Sum(Vec<BundleExpr>),
    Multiple(u32, Box<BundleExpr>),
}

impl BundleExpr {
    pub fn r(factor: usize) -> Self {
        BundleExpr::Taut(Taut::R, factor)
    }

    pub fn q(factor: usize) -> Self {
        BundleExpr::Taut(Taut::Q, factor)
    }

    pub fn line(d: Vec<i64>) -> Self {
        BundleExpr::Line(d)
    }

    /// The trivial bundle on `m` factors.
    pub fn trivial(m: usize) -> Self {
        BundleExpr::Line(vec![0; m])
    }

    pub fn zero() -> Self {
        BundleExpr::Sum(Vec::new())
    }

    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    pub fn wedge(self, q: usize) -> Self {
        BundleExpr::Wedge(q, Box::new(self))
    }

    pub fn sym(self, q: usize) -> Self {
        BundleExpr::Sym(q, Box::new(self))
    }

    pub fn twist(self, d: Vec<i64>) -> Self {
        BundleExpr::Twist(Box::new(self), d)
    }

    pub fn times(self, k: u32) -> Self {
        BundleExpr::Multiple(k, Box::new(self))
    }

    pub fn tensor(self, other: BundleExpr) -> Self {
        BundleExpr::Tensor(vec![self, other])
    }

    pub fn plus(self, other: BundleExpr) -> Self {
        match self {
            BundleExpr::Sum(mut v) => {
                v.push(other);
                BundleExpr::Sum(v)
            }
            e => BundleExpr::Sum(vec![e, other]),
        }
    }

    /// Checks factor indices and twist arities against the ambient.
    pub fn validate(&self, ambient: &AmbientSpace) -> Result<()> {
        let m = ambient.len();
        match self {
            BundleExpr::Line(d) => {
                if d.len() != m {
                    return Err(Error::TwistArity { got: d.len(), expected: m });
                }
            }
            BundleExpr::Taut(_, i) => {
                if *i >= m {
                    return Err(Error::FactorIndex { index: i + 1, count: m });
                }
            }
            BundleExpr::Dual(e) | BundleExpr::Wedge(_, e) | BundleExpr::Sym(_, e) | BundleExpr::Multiple(_, e) => {
                e.validate(ambient)?
            }
            BundleExpr::Twist(e, d) => {
                if d.len() != m {
                    return Err(Error::TwistArity { got: d.len(), expected: m });
                }
                e.validate(ambient)?
            }
            BundleExpr::Tensor(v) | BundleExpr::Sum(v) => {
                for e in v {
                    e.validate(ambient)?;
                }
            }
        }
        Ok(())
    }

    /// Decomposition into irreducible homogeneous bundles.
    pub fn rep(&self, ambient: &AmbientSpace) -> Result<LeviRep> {
        self.validate(ambient)?;
        self.rep_inner(ambient)
    }

    fn rep_inner(&self, ambient: &AmbientSpace) -> Result<LeviRep> {
        let blocks = ambient.blocks();
        Ok(match self {
            BundleExpr::Line(d) => LeviRep::irreducible(&blocks, ambient.line_weight(d)?)?,
            BundleExpr::Taut(t, i) => {
                let mut w = vec![0; ambient.nvars()];
                let f = ambient.factors()[*i];
                let off = ambient.offset(*i);
                match t {
                    Taut::Q => w[off] = 1,
                    Taut::R => w[off + f.q_rank()] = 1,
                }
                LeviRep::irreducible(&blocks, w)?
            }
            BundleExpr::Dual(e) => e.rep_inner(ambient)?.dual(),
            BundleExpr::Wedge(q, e) => e.rep_inner(ambient)?.wedge(*q)?,
            BundleExpr::Sym(q, e) => e.rep_inner(ambient)?.sym(*q)?,
            BundleExpr::Twist(e, d) => e.rep_inner(ambient)?.shift(&ambient.line_weight(d)?),
            BundleExpr::Tensor(v) => {
                let mut acc = LeviRep::trivial(&blocks);
                for e in v {
                    acc = acc.tensor(&e.rep_inner(ambient)?);
                }
                acc
            }
            BundleExpr::Sum(v) => {
                let mut acc = LeviRep::zero(&blocks);
                for e in v {
                    acc.add_assign(&e.rep_inner(ambient)?, 1);
                }
                acc
            }
            BundleExpr::Multiple(k, e) => e.rep_inner(ambient)?.scale(*k as i64),
        })
    }

    /// Character on the Chern roots, evaluated directly on monomials.
    pub fn character(&self, ambient: &AmbientSpace) -> Result<LaurentCharacter> {
        self.validate(ambient)?;
        self.character_inner(ambient)
    }

    fn character_inner(&self, ambient: &AmbientSpace) -> Result<LaurentCharacter> {
        let blocks = ambient.blocks();
        let n = ambient.nvars();
        Ok(match self {
            BundleExpr::Line(d) => {
                let w = ambient.line_weight(d)?;
                // all R roots carry -d, which is the same monomial as the
                // determinant weight
                LaurentCharacter::monomial(&blocks, w, 1)
            }
            BundleExpr::Taut(t, i) => {
                let f = ambient.factors()[*i];
                let off = ambient.offset(*i);
                let range = match t {
                    Taut::Q => off..off + f.q_rank(),
                    Taut::R => off + f.q_rank()..off + f.n,
                };
                let mut c = LaurentCharacter::zero(&blocks);
                for j in range {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    c.add_term(e, 1);
                }
                c
            }
            BundleExpr::Dual(e) => e.character_inner(ambient)?.dual(),
            BundleExpr::Wedge(q, e) => e.character_inner(ambient)?.wedge(*q)?,
            BundleExpr::Sym(q, e) => e.character_inner(ambient)?.sym(*q)?,
            BundleExpr::Twist(e, d) => {
                let w = ambient.line_weight(d)?;
                e.character_inner(ambient)?.mul(&LaurentCharacter::monomial(&blocks, w, 1))
            }
            BundleExpr::Tensor(v) => {
                let mut acc = LaurentCharacter::one(&blocks);
                for e in v {
                    acc = acc.mul(&e.character_inner(ambient)?);
                }
                acc
            }
            BundleExpr::Sum(v) => {
                let mut acc = LaurentCharacter::zero(&blocks);
                for e in v {
                    acc.add_assign(&e.character_inner(ambient)?, 1);
                }
                acc
            }
            BundleExpr::Multiple(k, e) => e.character_inner(ambient)?.scale(*k as i64),
        })
    }

    pub fn rank(&self, ambient: &AmbientSpace) -> Result<usize> {
        Ok(self.rep(ambient)?.dim() as usize)
    }

    /// If the expression is a direct sum of line bundles, their degrees.
    pub fn line_summands(&self) -> Option<Vec<Vec<i64>>> {
        match self {
            BundleExpr::Line(d) => Some(vec![d.clone()]),
            BundleExpr::Twist(e, d) => {
                let inner = e.line_summands()?;
                Some(inner.into_iter().map(|x| x.iter().zip(d).map(|(a, b)| a + b).collect()).collect())
            }
            BundleExpr::Sum(v) => {
                let mut out = Vec::new();
                for e in v {
                    out.extend(e.line_summands()?);
                }
                Some(out)
            }
            BundleExpr::Multiple(k, e) => {
                let inner = e.line_summands()?;
                Some((0..*k).flat_map(|_| inner.clone()).collect())
            }
            BundleExpr::Tensor(v) => {
                let mut acc = vec![Vec::new()];
                for e in v {
                    let s = e.line_summands()?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &s {
                            if a.is_empty() {
                                next.push(b.clone());
                            } else {
                                next.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
                            }
                        }
                    }
                    acc = next;
                }
                if acc.iter().any(|a| a.is_empty()) {
                    return None;
                }
                Some(acc)
            }
            BundleExpr::Dual(e) => {
                let inner = e.line_summands()?;
                Some(inner.into_iter().map(|x| x.iter().map(|a| -a).collect()).collect())
            }
            _ => None,
        }
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_expr(self))
    }
}

/// The zero locus of a general section of `cut` (a globally generated
/// bundle) inside `ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroLocusSpec {
    pub ambient: AmbientSpace,
    pub cut: BundleExpr,
}

impl ZeroLocusSpec {
    pub fn new(ambient: AmbientSpace, cut: BundleExpr) -> Result<Self> {
        cut.validate(&ambient)?;
        Ok(ZeroLocusSpec { ambient, cut })
    }

    /// The whole ambient (empty cut).
    pub fn ambient_only(ambient: AmbientSpace) -> Self {
        ZeroLocusSpec { ambient, cut: BundleExpr::zero() }
    }

    pub fn cut_rank(&self) -> Result<usize> {
        self.cut.rank(&self.ambient)
    }

    pub fn expected_dim(&self) -> Result<i64> {
        Ok(self.ambient.dim() as i64 - self.cut_rank()? as i64)
    }

    /// True when the cut is a direct sum of ample line bundles (every degree
    /// positive on every factor); the empty cut counts.
    /// When the cut has ample line bundle summands, the zero locus `Y` of
    /// the remaining summands: the variety is then cut out of `Y` by ample
    /// divisors.
    pub fn ample_divisor_base(&self) -> Option<ZeroLocusSpec> {
        fn flatten(e: &BundleExpr, out: &mut Vec<BundleExpr>) {
            match e {
                BundleExpr::Sum(v) => v.iter().for_each(|x| flatten(x, out)),
                BundleExpr::Multiple(k, x) => (0..*k).for_each(|_| flatten(x, out)),
                _ => out.push(e.clone()),
            }
        }
        let mut parts = Vec::new();
        flatten(&self.cut, &mut parts);
        let (lines, rest): (Vec<_>, Vec<_>) = parts.into_iter().partition(|e| {
            matches!(e.line_summands().as_deref(), Some([d]) if d.iter().all(|&x| x > 0))
        });
        if lines.is_empty() {
            return None;
        }
        Some(ZeroLocusSpec { ambient: self.ambient.clone(), cut: BundleExpr::Sum(rest) })
    }

    pub fn is_ample_complete_intersection(&self) -> bool {
        match self.cut.line_summands() {
            Some(v) => v.iter().all(|d| d.iter().all(|&x| x > 0)),
            None => false,
        }
    }
}

impl fmt::Display for ZeroLocusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render(self))
    }
}
