//! Random specifications and brute-force oracles shared by the property
//! tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use fk3_core::bbw::euler_char_bbw;
use fk3_core::chow::{chern_class, euler_top, hrr_chi, hrr_chi_omega};
use fk3_core::hodge::{hodge_numbers, HodgeOptions};
use fk3_core::schur::{lr_mult, Partition};
use fk3_core::{AmbientSpace, BundleExpr, Factor, ZeroLocusSpec};

pub fn ambients() -> Vec<AmbientSpace> {
    let f = |k, n| Factor::new(k, n).unwrap();
    [
        vec![f(1, 3)],
        vec![f(1, 4)],
        vec![f(1, 5)],
        vec![f(2, 4)],
        vec![f(2, 5)],
        vec![f(2, 6)],
        vec![f(3, 6)],
        vec![f(1, 2), f(1, 3)],
        vec![f(1, 3), f(1, 3)],
        vec![f(1, 2), f(2, 4)],
        vec![f(1, 3), f(2, 5)],
        vec![f(1, 2), f(1, 2), f(1, 2)],
    ]
    .into_iter()
    .map(|v| AmbientSpace::new(v).unwrap())
    .collect()
}

/// Globally generated atoms on factor `i` with non-empty zero loci, and
/// their ranks.
pub fn atom(amb: &AmbientSpace, i: usize, which: usize) -> (BundleExpr, usize) {
    let f = amb.factors()[i];
    let m = amb.len();
    let mut one = vec![0; m];
    one[i] = 1;
    let (k, q) = (f.k, f.q_rank());
    match which % 6 {
        0 => (BundleExpr::line(one), 1),
        1 => (BundleExpr::line(one.iter().map(|x| 2 * x).collect()), 1),
        2 => (BundleExpr::q(i), q),
        3 => (BundleExpr::r(i).dual(), k),
        // on projective space Q^∨(1) = Ω(2) has no zeros when q = 1 and
        // is uninteresting otherwise
        4 if k >= 2 && q >= 2 => (BundleExpr::q(i).dual().twist(one), q),
        4 => (BundleExpr::line(one), 1),
        _ => (BundleExpr::r(i).dual().twist(one), k),
    }
}

/// A random cut of rank at most `max_rank` leaving dimension at least 1.
/// Summands that would make the locus empty (vanishing top Chern class of a
/// globally generated bundle) are dropped.
pub fn random_spec(seed: &[usize], max_rank: usize) -> ZeroLocusSpec {
    let ambs = ambients();
    let amb = ambs[seed[0] % ambs.len()].clone();
    let dim = amb.dim();
    let mut parts = Vec::new();
    let mut rank = 0;
    for chunk in seed[1..].chunks(2) {
        let (e, r) = atom(&amb, chunk[0] % amb.len(), chunk.get(1).copied().unwrap_or(0));
        if rank + r > max_rank || rank + r >= dim {
            continue;
        }
        parts.push(e);
        let c = chern_class(&BundleExpr::Sum(parts.clone()), &amb).unwrap();
        if c.degree_part(rank + r).is_zero() {
            parts.pop();
            continue;
        }
        rank += r;
    }
    ZeroLocusSpec::new(amb, BundleExpr::Sum(parts)).unwrap()
}

pub fn twist_for(spec: &ZeroLocusSpec, d: &[i64]) -> BundleExpr {
    BundleExpr::line(d.iter().copied().cycle().take(spec.ambient.len()).collect())
}

/// `χ(X, H) = Σ_q (-1)^q χ(G, H ⊗ ∧^q F^∨)`, every term by Borel-Weil-Bott.
pub fn koszul_chi(spec: &ZeroLocusSpec, h: &BundleExpr) -> i64 {
    let r = spec.cut_rank().unwrap();
    (0..=r)
        .map(|q| {
            let t = h.clone().tensor(spec.cut.clone().dual().wedge(q));
            let e = euler_char_bbw(&t, &spec.ambient).unwrap();
            if q % 2 == 0 {
                e
            } else {
                -e
            }
        })
        .sum()
}

/// Koszul Euler characteristic against Riemann-Roch for `h` on `spec`.
pub fn check_chi(spec: &ZeroLocusSpec, h: &BundleExpr) -> Result<(), String> {
    let (a, b) = (koszul_chi(spec, h), hrr_chi(spec, h).map_err(|e| e.to_string())?);
    if a == b {
        Ok(())
    } else {
        Err(format!("{spec} twisted by {h}: Borel-Weil-Bott {a}, Riemann-Roch {b}"))
    }
}

/// Symmetry, Serre duality, the Euler characteristics and non-emptiness of
/// the Hodge diamond of `spec`.
pub fn check_hodge(spec: &ZeroLocusSpec, raw: bool) -> Result<(), String> {
    let opts = HodgeOptions { raw_intervals: raw, ..Default::default() };
    let res = hodge_numbers(spec, &opts).map_err(|e| format!("{spec}: {e}"))?;
    let d = &res.diamond;
    let n = d.dim();
    for p in 0..=n {
        for q in 0..=n {
            let e = d.entry(p, q);
            if e.lo < 0 || e.lo > e.hi {
                return Err(format!("{spec}: bad interval at ({p},{q})"));
            }
            for (p2, q2) in [(q, p), (n - p, n - q)] {
                let o = d.entry(p2, q2);
                if (e.lo, e.hi) != (o.lo, o.hi) {
                    return Err(format!("{spec}: h^{{{p},{q}}} and h^{{{p2},{q2}}} differ"));
                }
            }
        }
    }
    for p in 0..=n {
        let hrr = hrr_chi_omega(spec, p).map_err(|e| e.to_string())?;
        if res.chi[p] != hrr || d.chi_omega(p).is_some_and(|c| c != hrr) {
            return Err(format!("{spec}: chi(Omega^{p}) disagrees with Riemann-Roch {hrr}"));
        }
    }
    if let Some(e) = d.euler() {
        let top = euler_top(spec).map_err(|e| e.to_string())?;
        if e != top {
            return Err(format!("{spec}: diamond gives e = {e}, Gauss-Bonnet {top}"));
        }
    }
    // non-empty, possibly disconnected
    if d.entry(0, 0).lo < 1 {
        return Err(format!("{spec}: h^{{0,0}} = 0"));
    }
    Ok(())
}

/// All semistandard tableaux of shape `shape` with entries `< letters`,
/// counted by content.
pub fn ssyt_contents(shape: &[u32], letters: usize) -> HashMap<Vec<u32>, i64> {
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
    let mut grid = vec![vec![0usize; shape.first().copied().unwrap_or(0) as usize]; shape.len()];
    let mut out = HashMap::new();
    fn fill(
        i: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        letters: usize,
        out: &mut HashMap<Vec<u32>, i64>,
    ) {
        if i == cells.len() {
            let mut content = vec![0u32; letters];
            for &(r, c) in cells {
                content[grid[r][c]] += 1;
            }
            *out.entry(content).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[i];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 0 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..letters {
            grid[r][c] = v;
            fill(i + 1, cells, grid, letters, out);
        }
    }
    fill(0, &cells, &mut grid, letters, &mut out);
    out
}

pub fn partitions_of(n: u32, max_len: usize) -> Vec<Vec<u32>> {
    fn rec(n: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for p in (1..=max_part.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_len, &mut Vec::new(), &mut out);
    out
}

pub fn pad(p: &[u32], n: usize) -> Vec<u32> {
    let mut v = p.to_vec();
    v.resize(n, 0);
    v
}

/// `s_lambda * s_mu` in the Schur basis, by multiplying monomial expansions
/// and peeling off leading dominant monomials.
pub fn brute_lr(lambda: &[u32], mu: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let n = (lambda.len() + mu.len()).max(1);
    let a = ssyt_contents(lambda, n);
    let b = ssyt_contents(mu, n);
    let size = lambda.iter().sum::<u32>() + mu.iter().sum::<u32>();
    // shapes in decreasing lexicographic order
    let mut shapes = partitions_of(size, n);
    shapes.sort_by(|x, y| y.cmp(x));
    let mut product: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for nu in &shapes {
        let nu = pad(nu, n);
        let mut c = 0;
        for (ea, &ca) in &a {
            if ea.iter().zip(&nu).all(|(x, y)| x <= y) {
                let rest: Vec<u32> = nu.iter().zip(ea).map(|(y, x)| y - x).collect();
                c += ca * b.get(&rest).copied().unwrap_or(0);
            }
        }
        product.insert(nu, c);
    }
    let mut kostka: HashMap<Vec<u32>, HashMap<Vec<u32>, i64>> = HashMap::new();
    let mut out = BTreeMap::new();
    for nu in &shapes {
        let key = pad(nu, n);
        let c = product[&key];
        if c == 0 {
            continue;
        }
        let k = kostka.entry(nu.clone()).or_insert_with(|| ssyt_contents(nu, n));
        for rho in &shapes {
            let r = pad(rho, n);
            if let Some(&m) = k.get(&r) {
                *product.get_mut(&r).unwrap() -= c * m;
            }
        }
        out.insert(nu.clone(), c);
    }
    out
}

pub fn as_map(m: &BTreeMap<Partition, u64>) -> BTreeMap<Vec<u32>, i64> {
    m.iter().map(|(p, &c)| (p.parts().to_vec(), c as i64)).collect()
}

/// Littlewood-Richardson against the tableau oracle for all partitions of
/// size at most `max`.
pub fn check_lr_up_to(max: u32) -> Result<(), String> {
    let small: Vec<Vec<u32>> = (0..=max).flat_map(|n| partitions_of(n, max as usize)).collect();
    for l in &small {
        for m in &small {
            let got = as_map(&lr_mult(&Partition::new(l.clone()).unwrap(), &Partition::new(m.clone()).unwrap()));
            if got != brute_lr(l, m) {
                return Err(format!("{l:?} * {m:?}"));
            }
        }
    }
    Ok(())
}
