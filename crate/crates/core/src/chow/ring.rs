use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bundle::{AmbientSpace, Factor};
use crate::schur::{lr_mult_bounded, Partition};

/// Schubert basis of one Grassmannian: `s_λ` of the Chern roots of `Q`, for
/// `λ` inside the `(n-k) x k` box. The point class is `s_{(k^{n-k})}`.
#[derive(Debug)]
struct SchubertFactor {
    basis: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `mult[i][j]` = structure constants of `s_i * s_j`.
    mult: Vec<Vec<Vec<(usize, i64)>>>,
}

impl SchubertFactor {
    fn new(f: Factor) -> Self {
        let rows = f.q_rank();
        let cols = f.k as u32;
        let basis = Partition::in_box(rows, cols);
        let index: HashMap<Partition, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let dim = f.dim() as u32;
        let mut mult = vec![vec![Vec::new(); basis.len()]; basis.len()];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if a.size() + b.size() > dim || j < i {
                    continue;
                }
                let prod: Vec<(usize, i64)> = lr_mult_bounded(a, b, rows, cols)
                    .into_iter()
                    .map(|(p, c)| (index[&p], c as i64))
                    .collect();
                mult[j][i] = prod.clone();
                mult[i][j] = prod;
            }
        }
        SchubertFactor { basis, index, mult }
    }
}

/// Chow ring (with rational coefficients) of a product of Grassmannians, as
/// the tensor product of the Schubert bases of the factors.
#[derive(Debug)]
pub struct ChowRing {
    ambient: AmbientSpace,
    factors: Vec<SchubertFactor>,
    strides: Vec<usize>,
    /// per basis element: the Schubert index in each factor
    split: Vec<Vec<usize>>,
    degree: Vec<usize>,
    top: usize,
}

type RingTable = Mutex<HashMap<AmbientSpace, Arc<ChowRing>>>;

impl ChowRing {
    /// The ring of `ambient`; rings are built once and shared.
    pub fn of(ambient: &AmbientSpace) -> Arc<ChowRing> {
        static TABLE: OnceLock<RingTable> = OnceLock::new();
        let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = table.lock().unwrap().get(ambient) {
            return r.clone();
        }
        let ring = Arc::new(ChowRing::build(ambient));
        table.lock().unwrap().entry(ambient.clone()).or_insert(ring).clone()
    }

    fn build(ambient: &AmbientSpace) -> ChowRing {
        let factors: Vec<SchubertFactor> = ambient.factors().iter().map(|&f| SchubertFactor::new(f)).collect();
        let mut strides = Vec::with_capacity(factors.len());
        let mut size = 1;
        for f in &factors {
            strides.push(size);
            size *= f.basis.len();
        }
        let mut split = Vec::with_capacity(size);
        let mut degree = Vec::with_capacity(size);
        for idx in 0..size {
            let parts: Vec<usize> =
                factors.iter().zip(&strides).map(|(f, &s)| (idx / s) % f.basis.len()).collect();
            degree.push(parts.iter().zip(&factors).map(|(&i, f)| f.basis[i].size() as usize).sum());
            split.push(parts);
        }
        let top = factors.iter().zip(&strides).map(|(f, &s)| (f.basis.len() - 1) * s).sum();
        ChowRing { ambient: ambient.clone(), factors, strides, split, degree, top }
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn size(&self) -> usize {
        self.split.len()
    }

    pub fn zero(self: &Arc<Self>) -> ChowClass {
        ChowClass { ring: self.clone(), coeffs: vec![BigRational::zero(); self.size()] }
    }

    pub fn one(self: &Arc<Self>) -> ChowClass {
        self.scalar(BigRational::one())
    }

    pub fn scalar(self: &Arc<Self>, c: BigRational) -> ChowClass {
        let mut z = self.zero();
        z.coeffs[0] = c;
        z
    }

    /// The Schubert class `s_λ` of the `Q`-roots of factor `f`.
    pub fn schubert(self: &Arc<Self>, f: usize, lambda: &Partition) -> ChowClass {
        let mut z = self.zero();
        if let Some(&i) = self.factors[f].index.get(lambda) {
            z.coeffs[i * self.strides[f]] = BigRational::one();
        }
        z
    }

    /// Hyperplane class `c_1(O(1))` of factor `f`.
    pub fn hyperplane(self: &Arc<Self>, f: usize) -> ChowClass {
        self.schubert(f, &Partition::new(vec![1]).unwrap())
    }

    fn mul(self: &Arc<Self>, a: &ChowClass, b: &ChowClass) -> ChowClass {
        let dim = self.dim();
        let na: Vec<usize> = (0..self.size()).filter(|&i| !a.coeffs[i].is_zero()).collect();
        let nb: Vec<usize> = (0..self.size()).filter(|&i| !b.coeffs[i].is_zero()).collect();
        // accumulate integer structure constants per (i, j) first, then scale
        let mut out: Vec<BigRational> = vec![BigRational::zero(); self.size()];
        let mut terms: Vec<(usize, i64)> = Vec::new();
        let mut next: Vec<(usize, i64)> = Vec::new();
        for &i in &na {
            for &j in &nb {
                if self.degree[i] + self.degree[j] > dim {
                    continue;
                }
                terms.clear();
                terms.push((0, 1));
                for (f, fac) in self.factors.iter().enumerate() {
                    let prod = &fac.mult[self.split[i][f]][self.split[j][f]];
                    next.clear();
                    for &(idx, c) in &terms {
                        for &(k, c2) in prod {
                            next.push((idx + k * self.strides[f], c * c2));
                        }
                    }
                    std::mem::swap(&mut terms, &mut next);
                    if terms.is_empty() {
                        break;
                    }
                }
                if terms.is_empty() {
                    continue;
                }
                let c = &a.coeffs[i] * &b.coeffs[j];
                for &(k, m) in &terms {
                    out[k] += &c * BigRational::from_integer(BigInt::from(m));
                }
            }
        }
        ChowClass { ring: self.clone(), coeffs: out }
    }
}

/// An element of the Chow ring with rational coefficients in the Schubert
/// basis. Classes of codimension above the dimension are zero by
/// construction.
#[derive(Clone)]
pub struct ChowClass {
    ring: Arc<ChowRing>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl ChowClass {
    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        ChowClass { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &ChowClass) -> ChowClass {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        ChowClass { ring: self.ring.clone(), coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> ChowClass {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        ChowClass { ring: self.ring.clone(), coeffs }
    }

    pub fn mul(&self, other: &ChowClass) -> ChowClass {
        self.ring.mul(self, other)
    }

    /// Component of codimension `d`.
    pub fn degree_part(&self, d: usize) -> ChowClass {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.ring.degree[i] == d { c.clone() } else { BigRational::zero() })
            .collect();
        ChowClass { ring: self.ring.clone(), coeffs }
    }

    /// Multiplies the codimension `d` component by `f(d)`.
    pub fn map_degrees(&self, f: impl Fn(usize) -> BigRational) -> ChowClass {
        let factors: Vec<BigRational> = (0..=self.ring.dim()).map(f).collect();
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| c * &factors[self.ring.degree[i]]).collect();
        ChowClass { ring: self.ring.clone(), coeffs }
    }

    /// Degree-0 coefficient.
    pub fn constant(&self) -> BigRational {
        self.coeffs[0].clone()
    }

    /// Coefficient of the point class: the degree of the top-dimensional part.
    pub fn integrate(&self) -> BigRational {
        self.coeffs[self.ring.top].clone()
    }

    /// Exponential of a class without constant term (nilpotent series).
    pub fn exp(&self) -> ChowClass {
        debug_assert!(self.constant().is_zero());
        let mut result = self.ring.one();
        let mut power = self.ring.one();
        for m in 1..=self.ring.dim() {
            power = power.mul(self).scale(&BigRational::new(BigInt::one(), BigInt::from(m)));
            if power.is_zero() {
                break;
            }
            result = result.add(&power);
        }
        result
    }

    /// Multiplicative inverse of a class with constant term 1.
    pub fn inverse_unipotent(&self) -> ChowClass {
        debug_assert!(self.constant().is_one());
        let n = self.sub(&self.ring.one());
        let mut result = self.ring.one();
        let mut power = self.ring.one();
        for m in 1..=self.ring.dim() {
            power = power.mul(&n);
            if power.is_zero() {
                break;
            }
            result = if m % 2 == 1 { result.sub(&power) } else { result.add(&power) };
        }
        result
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            write!(f, "{}", c.abs())?;
            for (fi, &j) in self.ring.split[i].iter().enumerate() {
                let p = &self.ring.factors[fi].basis[j];
                if !p.is_empty() {
                    write!(f, "*s{}{}", fi + 1, p)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_of_grassmannian() {
        // deg Gr(2,5) = 5
        let g = AmbientSpace::grassmannian(2, 5).unwrap();
        let r = ChowRing::of(&g);
        let h = r.hyperplane(0);
        let mut p = r.one();
        for _ in 0..6 {
            p = p.mul(&h);
        }
        assert_eq!(p.integrate(), BigRational::from_integer(5.into()));
    }

    #[test]
    fn point_class_integrates_to_one() {
        let g = AmbientSpace::grassmannian(3, 7).unwrap();
        let r = ChowRing::of(&g);
        let pt = r.schubert(0, &Partition::new(vec![3, 3, 3, 3]).unwrap());
        assert!(pt.integrate().is_one());
    }

    #[test]
    fn exp_and_inverse() {
        let g = AmbientSpace::grassmannian(2, 4).unwrap();
        let r = ChowRing::of(&g);
        let h = r.hyperplane(0);
        let e = h.exp();
        let inv = h.scale(&BigRational::from_integer((-1).into())).exp();
        assert_eq!(e.mul(&inv), r.one());
        assert_eq!(e.inverse_unipotent(), inv);
    }
}
