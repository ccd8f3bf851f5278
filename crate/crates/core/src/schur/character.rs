use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::binomial;

use super::weight::is_dominant;
use crate::{Error, Result};

/// Exponent vector of a monomial in the Chern roots, one slot per root.
pub type Exponent = Vec<i32>;

/// A finite Laurent polynomial in the Chern roots with integer coefficients.
///
/// Roots are grouped into blocks (for a Grassmannian factor `Gr(k,n)`: the
/// `n-k` roots of `Q` followed by the `k` roots of `R`). Genuine characters
/// are symmetric within each block and have non-negative coefficients;
/// intermediate virtual characters may have negative ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCharacter {
    blocks: Vec<usize>,
    terms: HashMap<Exponent, i64>,
}

impl LaurentCharacter {
    pub fn zero(blocks: &[usize]) -> Self {
        LaurentCharacter { blocks: blocks.to_vec(), terms: HashMap::new() }
    }

    /// The trivial character `1`.
    pub fn one(blocks: &[usize]) -> Self {
        Self::monomial(blocks, vec![0; blocks.iter().sum()], 1)
    }

    pub fn monomial(blocks: &[usize], exp: Exponent, coeff: i64) -> Self {
        let mut c = Self::zero(blocks);
        c.add_term(exp, coeff);
        c
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn nvars(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: i64) {
        debug_assert_eq!(exp.len(), self.nvars());
        if coeff == 0 {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn coeff(&self, exp: &[i32]) -> i64 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the coefficients, i.e. the rank for a genuine character.
    pub fn dim(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &i64)> {
        self.terms.iter()
    }

    /// Terms in deterministic (lexicographic) order.
    pub fn sorted_terms(&self) -> BTreeMap<Exponent, i64> {
        self.terms.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other, 1);
        out
    }

    pub fn add_assign(&mut self, other: &Self, scale: i64) {
        assert_eq!(self.blocks, other.blocks, "characters over different root layouts");
        for (e, &c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert(0) += c * scale;
        }
        self.terms.retain(|_, v| *v != 0);
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.blocks);
        if k != 0 {
            out.terms = self.terms.iter().map(|(e, &c)| (e.clone(), c * k)).collect();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.blocks, other.blocks, "characters over different root layouts");
        let mut terms: HashMap<Exponent, i64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert(0) += ca * cb;
            }
        }
        terms.retain(|_, v| *v != 0);
        LaurentCharacter { blocks: self.blocks.clone(), terms }
    }

    /// Multiplies every monomial by `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.iter().zip(shift).map(|(x, y)| x + y).collect(), c))
            .collect();
        LaurentCharacter { blocks: self.blocks.clone(), terms }
    }

    /// Character of the dual bundle: all exponents negated.
    pub fn dual(&self) -> Self {
        let terms = self.terms.iter().map(|(e, &c)| (e.iter().map(|x| -x).collect(), c)).collect();
        LaurentCharacter { blocks: self.blocks.clone(), terms }
    }

    /// Exterior power; zero when `q` exceeds the rank.
    pub fn wedge(&self, q: usize) -> Result<Self> {
        self.power(q, |c, i| binomial(c as u64, i as u64) as i64)
    }

    /// Symmetric power.
    pub fn sym(&self, q: usize) -> Result<Self> {
        self.power(q, |c, i| binomial(c as u64 + i as u64 - 1, i as u64) as i64)
    }

    /// Generating-function evaluation of a power operation. For a weight of
    /// multiplicity `c` the contribution of degree `i` is `coeff(c, i) x^(i w)`.
    fn power(&self, q: usize, coeff: impl Fn(i64, usize) -> i64) -> Result<Self> {
        for (e, &c) in &self.terms {
            if c < 0 {
                return Err(Error::NegativeMultiplicity { weight: e.clone(), mult: c });
            }
        }
        let n = self.nvars();
        let mut levels: Vec<HashMap<Exponent, i64>> = vec![HashMap::new(); q + 1];
        levels[0].insert(vec![0; n], 1);
        let mut weights: Vec<(&Exponent, i64)> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        weights.sort();
        for (w, c) in weights {
            let mut next: Vec<HashMap<Exponent, i64>> = vec![HashMap::new(); q + 1];
            for (j, level) in levels.iter().enumerate() {
                for (e, &v) in level {
                    for i in 0..=(q - j) {
                        let k = coeff(c, i);
                        if k == 0 {
                            if i > 0 {
                                break;
                            }
                            continue;
                        }
                        let ex: Exponent = e.iter().zip(w).map(|(a, b)| a + b * i as i32).collect();
                        *next[j + i].entry(ex).or_insert(0) += v * k;
                    }
                }
            }
            levels = next;
        }
        let terms = std::mem::take(&mut levels[q]);
        Ok(LaurentCharacter { blocks: self.blocks.clone(), terms })
    }

    /// Checks that coefficients are invariant under swapping adjacent roots
    /// inside each block, reporting the first offending swap.
    pub fn check_symmetric(&self) -> Result<()> {
        let mut offset = 0;
        for (b, &size) in self.blocks.iter().enumerate() {
            for i in 0..size.saturating_sub(1) {
                for (e, &c) in &self.terms {
                    let mut s = e.clone();
                    s.swap(offset + i, offset + i + 1);
                    if self.coeff(&s) != c {
                        return Err(Error::NotSymmetric { block: b, i, j: i + 1, monomial: e.clone() });
                    }
                }
            }
            offset += size;
        }
        Ok(())
    }
}

type SchurTable = Mutex<HashMap<Vec<i32>, Arc<Vec<(Exponent, i64)>>>>;

fn schur_table() -> &'static SchurTable {
    static TABLE: OnceLock<SchurTable> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monomial expansion of the Schur polynomial of a dominant GL(m) weight
/// (entries may be negative), by the Gelfand-Tsetlin branching rule
/// `s_w(x_1..x_m) = sum_{v interlacing w} s_v(x_1..x_{m-1}) x_m^{|w|-|v|}`.
///
/// Results are cached; the cache only ever stores the unique value for a
/// key, so concurrent callers observe a pure function.
pub fn schur_polynomial(w: &[i32]) -> Arc<Vec<(Exponent, i64)>> {
    debug_assert!(is_dominant(w), "schur_polynomial needs a dominant weight");
    if let Some(hit) = schur_table().lock().unwrap().get(w) {
        return hit.clone();
    }
    let value = Arc::new(compute_schur(w));
    schur_table().lock().unwrap().entry(w.to_vec()).or_insert(value).clone()
}

fn compute_schur(w: &[i32]) -> Vec<(Exponent, i64)> {
    let m = w.len();
    if m == 0 {
        return vec![(Vec::new(), 1)];
    }
    if m == 1 {
        return vec![(vec![w[0]], 1)];
    }
    let total: i32 = w.iter().sum();
    let mut acc: HashMap<Exponent, i64> = HashMap::new();
    let mut v = vec![0i32; m - 1];
    interlacing(w, 0, &mut v, &mut |v| {
        let last = total - v.iter().sum::<i32>();
        for (e, c) in schur_polynomial(v).iter() {
            let mut ex = e.clone();
            ex.push(last);
            *acc.entry(ex).or_insert(0) += c;
        }
    });
    let mut out: Vec<(Exponent, i64)> = acc.into_iter().collect();
    out.sort();
    out
}

fn interlacing(w: &[i32], i: usize, v: &mut Vec<i32>, f: &mut impl FnMut(&[i32])) {
    if i == v.len() {
        f(v);
        return;
    }
    for x in w[i + 1]..=w[i] {
        v[i] = x;
        interlacing(w, i + 1, v, f);
    }
}

/// Character of the irreducible Levi representation whose highest weight is
/// the concatenation `w` of dominant block weights.
pub fn levi_character(blocks: &[usize], w: &[i32]) -> LaurentCharacter {
    let mut out = LaurentCharacter::one(blocks);
    let mut offset = 0;
    let n: usize = blocks.iter().sum();
    for &size in blocks {
        let sp = schur_polynomial(&w[offset..offset + size]);
        let mut block = LaurentCharacter::zero(blocks);
        for (e, c) in sp.iter() {
            let mut ex = vec![0; n];
            ex[offset..offset + size].copy_from_slice(e);
            block.terms.insert(ex, *c);
        }
        out = out.mul(&block);
        offset += size;
    }
    out
}
