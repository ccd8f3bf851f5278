//! Intersection theory on products of Grassmannians: Chern characters, Chern
//! and Todd classes, Riemann-Roch on zero loci and Gauss-Bonnet.

mod ring;

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use ring::{ChowClass, ChowRing};

use crate::bundle::{AmbientSpace, BundleExpr, Taut, ZeroLocusSpec};
use crate::hodge::{DiamondEntry, HodgeDiamond, Provenance};
use crate::schur::Partition;
use crate::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn to_integer(x: BigRational, what: &'static str) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Consistency(format!("{what} is not an integer: {x}")));
    }
    x.to_integer().to_i64().ok_or(Error::Overflow(what))
}

/// Power sum `p_j` of the `Q`-roots of factor `f` in the Schubert basis:
/// the alternating sum of hook Schur functions.
fn q_power_sum(ring: &Arc<ChowRing>, f: usize, j: usize) -> ChowClass {
    let mut acc = ring.zero();
    for b in 0..j {
        let a = j - 1 - b;
        let mut parts = vec![a as u32 + 1];
        parts.extend(std::iter::repeat_n(1, b));
        let hook = ring.schubert(f, &Partition::new(parts).expect("hook is a partition"));
        acc = if b % 2 == 0 { acc.add(&hook) } else { acc.sub(&hook) };
    }
    acc
}

/// Chern character of a tautological bundle. `R = V - Q` in K-theory.
fn ch_taut(ring: &Arc<ChowRing>, t: Taut, f: usize) -> ChowClass {
    let fac = ring.ambient().factors()[f];
    let dim = ring.dim();
    let mut acc = ring.zero();
    for j in 1..=dim {
        let pj = q_power_sum(ring, f, j).scale(&BigRational::new(BigInt::one(), factorial(j)));
        acc = acc.add(&pj);
    }
    match t {
        Taut::Q => ring.scalar(rat(fac.q_rank() as i64)).add(&acc),
        Taut::R => ring.scalar(rat(fac.k as i64)).sub(&acc),
    }
}

fn ch_line(ring: &Arc<ChowRing>, d: &[i64]) -> ChowClass {
    let mut c1 = ring.zero();
    for (f, &di) in d.iter().enumerate() {
        c1 = c1.add(&ring.hyperplane(f).scale(&rat(di)));
    }
    c1.exp()
}

/// Adams operation `ψ^i` on a Chern character.
fn adams(ch: &ChowClass, i: i64) -> ChowClass {
    ch.map_degrees(|d| rat(i.pow(d as u32)))
}

/// Newton recursion for `λ^m` (`sign = -1`) or `σ^m` (`sign = +1`).
fn newton_power(ch: &ChowClass, m: usize, sign: i64) -> ChowClass {
    let ring = ch.ring();
    let psi: Vec<ChowClass> = (0..=m as i64).map(|i| adams(ch, i)).collect();
    let mut powers = vec![ring.one()];
    for j in 1..=m {
        let mut acc = ring.zero();
        for i in 1..=j {
            let term = psi[i].mul(&powers[j - i]);
            let s = if sign < 0 && i % 2 == 0 { -1 } else { 1 };
            acc = acc.add(&term.scale(&rat(s)));
        }
        powers.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(j))));
    }
    powers.pop().unwrap()
}

/// Chern character of a bundle expression in the Chow ring of `ambient`.
pub fn chern_character(expr: &BundleExpr, ambient: &AmbientSpace) -> Result<ChowClass> {
    expr.validate(ambient)?;
    let ring = ChowRing::of(ambient);
    Ok(ch_inner(expr, &ring))
}

fn ch_inner(expr: &BundleExpr, ring: &Arc<ChowRing>) -> ChowClass {
    match expr {
        BundleExpr::Line(d) => ch_line(ring, d),
        BundleExpr::Taut(t, f) => ch_taut(ring, *t, *f),
        BundleExpr::Dual(e) => adams(&ch_inner(e, ring), -1),
        BundleExpr::Wedge(q, e) => newton_power(&ch_inner(e, ring), *q, -1),
        BundleExpr::Sym(q, e) => newton_power(&ch_inner(e, ring), *q, 1),
        BundleExpr::Twist(e, d) => ch_inner(e, ring).mul(&ch_line(ring, d)),
        BundleExpr::Tensor(v) => v.iter().fold(ring.one(), |acc, e| acc.mul(&ch_inner(e, ring))),
        BundleExpr::Sum(v) => v.iter().fold(ring.zero(), |acc, e| acc.add(&ch_inner(e, ring))),
        BundleExpr::Multiple(k, e) => ch_inner(e, ring).scale(&rat(*k as i64)),
    }
}

/// `Σ_k coeff(k) · k! · ch_k`, i.e. a sum of `coeff(k) p_k` over the roots.
fn power_sum_series(ch: &ChowClass, coeff: impl Fn(usize) -> BigRational) -> ChowClass {
    ch.map_degrees(|d| if d == 0 { BigRational::zero() } else { coeff(d) * BigRational::from_integer(factorial(d)) })
}

/// Total Chern class from the Chern character.
pub fn chern_from_ch(ch: &ChowClass) -> ChowClass {
    // log c = Σ (-1)^{k-1} p_k / k
    power_sum_series(ch, |k| {
        let s = if k % 2 == 1 { 1 } else { -1 };
        BigRational::new(BigInt::from(s), BigInt::from(k))
    })
    .exp()
}

/// Coefficients of `log(x / (1 - e^{-x}))` up to degree `n`.
fn todd_log_coeffs(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(Vec::new()));
    let mut c = cache.lock().unwrap();
    if c.len() > n {
        return c[..=n].to_vec();
    }
    let m = n + 1;
    // g(x) = (1 - e^{-x}) / x = Σ (-1)^j x^j / (j+1)!
    let g: Vec<BigRational> = (0..=m)
        .map(|j| {
            let s = if j % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(s), factorial(j + 1))
        })
        .collect();
    // log(x/(1-e^{-x})) = -log g ; log g via l' = g'/g
    // h = 1/g as a power series
    let mut h = vec![BigRational::zero(); m + 1];
    h[0] = BigRational::one();
    for i in 1..=m {
        let mut s = BigRational::zero();
        for j in 1..=i {
            s += &g[j] * &h[i - j];
        }
        h[i] = -s;
    }
    // (log g)' = g' h; integrate
    let mut out = vec![BigRational::zero(); m + 1];
    for k in 1..=m {
        // coefficient of x^{k-1} in g' h
        let mut s = BigRational::zero();
        for j in 1..=k {
            s += &g[j] * rat(j as i64) * &h[k - j];
        }
        out[k] = -s / rat(k as i64);
    }
    *c = out;
    c[..=n].to_vec()
}

/// Todd class from the Chern character.
pub fn todd_from_ch(ch: &ChowClass) -> ChowClass {
    let t = todd_log_coeffs(ch.ring().dim());
    power_sum_series(ch, |k| t[k].clone()).exp()
}

/// Total Chern class of a bundle expression.
pub fn chern_class(expr: &BundleExpr, ambient: &AmbientSpace) -> Result<ChowClass> {
    Ok(chern_from_ch(&chern_character(expr, ambient)?))
}

/// Todd class of a bundle expression.
pub fn todd_class(expr: &BundleExpr, ambient: &AmbientSpace) -> Result<ChowClass> {
    Ok(todd_from_ch(&chern_character(expr, ambient)?))
}

struct Adjunction {
    ring: Arc<ChowRing>,
    /// `td(T_G) / td(N)`
    todd: ChowClass,
    /// `c_r(N)`, the class of the zero locus
    fundamental: ChowClass,
    /// `c(T_G) / c(N)`
    chern: ChowClass,
    dim: usize,
}

fn adjunction(spec: &ZeroLocusSpec) -> Result<Adjunction> {
    let d = spec.expected_dim()?;
    if d < 0 {
        return Err(Error::NegativeDimension(d));
    }
    let ambient = &spec.ambient;
    let ring = ChowRing::of(ambient);
    let r = spec.cut_rank()?;
    let ch_t = chern_character(&ambient.tangent(), ambient)?;
    let ch_n = chern_character(&spec.cut, ambient)?;
    let neg_n = ch_n.scale(&rat(-1));
    let todd = todd_from_ch(&ch_t).mul(&todd_from_ch(&neg_n));
    let c_n = chern_from_ch(&ch_n);
    let fundamental = c_n.degree_part(r);
    let chern = chern_from_ch(&ch_t).mul(&chern_from_ch(&neg_n));
    Ok(Adjunction { ring, todd, fundamental, chern, dim: d as usize })
}

/// Holomorphic Euler characteristic of `twist` restricted to the zero locus,
/// by Hirzebruch-Riemann-Roch pushed forward to the ambient.
pub fn hrr_chi(spec: &ZeroLocusSpec, twist: &BundleExpr) -> Result<i64> {
    let adj = adjunction(spec)?;
    let ch = chern_character(twist, &spec.ambient)?;
    let total = ch.mul(&adj.todd).mul(&adj.fundamental).integrate();
    debug_assert!(Arc::ptr_eq(&adj.ring, ch.ring()));
    to_integer(total, "Euler characteristic")
}

/// The terms `Sym^b F ⊗ Ω^{p-b}_G` (with sign `(-1)^b`) whose alternating
/// sum computes `χ(Ω^p)` of the zero locus, `F` the conormal bundle.
pub fn conormal_terms(spec: &ZeroLocusSpec, p: usize) -> Vec<(usize, BundleExpr)> {
    let conormal = spec.cut.clone().dual();
    let omega = spec.ambient.cotangent();
    (0..=p)
        .map(|b| {
            let e = BundleExpr::Tensor(vec![conormal.clone().sym(b), omega.clone().wedge(p - b)]);
            (b, e)
        })
        .collect()
}

/// `χ(Ω^p)` of the zero locus, from the conormal-power resolution.
pub fn hrr_chi_omega(spec: &ZeroLocusSpec, p: usize) -> Result<i64> {
    let adj = adjunction(spec)?;
    let ring = &adj.ring;
    let mut total = ring.zero();
    let conormal = chern_character(&spec.cut.clone().dual(), &spec.ambient)?;
    let omega = chern_character(&spec.ambient.cotangent(), &spec.ambient)?;
    for b in 0..=p {
        let term = newton_power(&conormal, b, 1).mul(&newton_power(&omega, p - b, -1));
        total = if b % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    to_integer(total.mul(&adj.todd).mul(&adj.fundamental).integrate(), "Euler characteristic")
}

/// Topological Euler characteristic of the zero locus (Gauss-Bonnet with
/// the adjunction `T_X = T_G - N`).
pub fn euler_top(spec: &ZeroLocusSpec) -> Result<i64> {
    let adj = adjunction(spec)?;
    to_integer(adj.chern.degree_part(adj.dim).mul(&adj.fundamental).integrate(), "Euler number")
}

/// Degree of a class on the ambient.
pub fn integrate(class: &ChowClass) -> Result<i64> {
    to_integer(class.integrate(), "intersection number")
}

/// First Chern class of the zero locus, as integer multiples of the
/// hyperplane classes of the factors (restricted from the ambient).
pub fn first_chern_class(spec: &ZeroLocusSpec) -> Result<Vec<i64>> {
    let adj = adjunction(spec)?;
    let c1 = adj.chern.degree_part(1);
    let mut out = Vec::new();
    for f in 0..spec.ambient.len() {
        let h = adj.ring.hyperplane(f);
        let idx = h.coeffs().iter().position(|c| !c.is_zero()).expect("hyperplane is nonzero");
        out.push(to_integer(c1.coeffs()[idx].clone(), "first Chern class")?);
    }
    Ok(out)
}

/// Number of partitions in the `rows x cols` box, by size.
fn box_counts(rows: usize, cols: usize) -> Vec<u64> {
    let mut counts = vec![0u64; rows * cols + 1];
    for p in Partition::in_box(rows, cols as u32) {
        counts[p.size() as usize] += 1;
    }
    counts
}

/// Hodge diamond of the ambient: only `h^{p,p}`, counting Schubert cells.
pub fn ambient_hodge(ambient: &AmbientSpace) -> HodgeDiamond {
    let mut diag = vec![1u64];
    for f in ambient.factors() {
        let c = box_counts(f.q_rank(), f.k);
        let mut next = vec![0u64; diag.len() + c.len() - 1];
        for (i, a) in diag.iter().enumerate() {
            for (j, b) in c.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        diag = next;
    }
    let n = ambient.dim();
    let mut d = HodgeDiamond::new(n);
    for p in 0..=n {
        for q in 0..=n {
            let v = if p == q { diag[p] as i64 } else { 0 };
            *d.entry_mut(p, q) = DiamondEntry::exact(v, Provenance::SchubertCells);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::Factor;
    use crate::dsl::parse;

    #[test]
    fn todd_series_start() {
        let t = todd_log_coeffs(4);
        assert_eq!(t[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(t[2], BigRational::new((-1).into(), 24.into()));
        assert!(t[3].is_zero());
        assert_eq!(t[4], BigRational::new(1.into(), 2880.into()));
    }

    #[test]
    fn chi_of_structure_sheaf_is_one() {
        for s in ["Gr(2,5)", "P3 x Gr(2,4)", "Gr(3,6)"] {
            let spec = parse(&format!("{s}:")).unwrap();
            let one = BundleExpr::trivial(spec.ambient.len());
            assert_eq!(hrr_chi(&spec, &one).unwrap(), 1, "{s}");
        }
    }

    #[test]
    fn euler_of_ambient_counts_cells() {
        let g = AmbientSpace::new(vec![Factor::new(2, 5).unwrap(), Factor::projective(2).unwrap()]).unwrap();
        assert_eq!(euler_top(&ZeroLocusSpec::ambient_only(g)).unwrap(), 30);
    }

    #[test]
    fn sections_of_line_bundles_on_projective_space() {
        let spec = parse("P3:").unwrap();
        assert_eq!(hrr_chi(&spec, &BundleExpr::line(vec![2])).unwrap(), 10);
        assert_eq!(hrr_chi(&spec, &BundleExpr::line(vec![-4])).unwrap(), -1);
    }

    #[test]
    fn quartic_k3() {
        let spec = parse("P3: O(4)").unwrap();
        assert_eq!(euler_top(&spec).unwrap(), 24);
        assert_eq!(hrr_chi(&spec, &BundleExpr::trivial(1)).unwrap(), 2);
        assert_eq!(hrr_chi_omega(&spec, 1).unwrap(), -20);
    }

    #[test]
    fn wedge_and_sym_ranks() {
        let g = AmbientSpace::grassmannian(2, 6).unwrap();
        let ch = chern_character(&BundleExpr::q(0).wedge(2), &g).unwrap();
        assert_eq!(ch.constant(), rat(6));
        let ch = chern_character(&BundleExpr::r(0).sym(3), &g).unwrap();
        assert_eq!(ch.constant(), rat(4));
    }

    #[test]
    fn ambient_diagonal() {
        let d = ambient_hodge(&AmbientSpace::grassmannian(2, 6).unwrap());
        let diag: Vec<i64> = (0..=8).map(|p| d.entry(p, p).lo).collect();
        assert_eq!(diag, vec![1, 1, 2, 2, 3, 2, 2, 1, 1]);
    }
}
