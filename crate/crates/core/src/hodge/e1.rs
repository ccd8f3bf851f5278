use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::solver::System;
use super::{DiamondEntry, HodgeDiamond, HodgeOptions, HodgeResult, Provenance};
use crate::bbw::cohomology_dims;
use crate::bundle::{BundleExpr, ZeroLocusSpec};
use crate::schur::LeviRep;
use crate::{Error, Result};

/// E1 terms `dim H^j(T ⊗ ∧^q F)` of one Koszul spectral sequence, keyed by
/// `(q, j)`. The term sits in total degree `j - q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TermE1 {
    pub entries: BTreeMap<(usize, usize), u64>,
}

impl TermE1 {
    /// Sum of all terms of total degree `m`.
    pub fn total(&self, m: i64) -> u64 {
        self.entries.iter().filter(|(&(q, j), _)| j as i64 - q as i64 == m).map(|(_, &d)| d).sum()
    }

    pub fn degrees(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for (&(q, j), &d) in &self.entries {
            *out.entry(j as i64 - q as i64).or_insert(0) += d;
        }
        out
    }

    /// Alternating sum over total degrees.
    pub fn euler(&self) -> i64 {
        self.entries.iter().map(|(&(q, j), &d)| if (q + j) % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// Koszul E1 data of every term `Sym^b F ⊗ Ω^a_G` with `a + b ≤ p_max`,
/// keyed by `(b, a)`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct E1Page {
    pub terms: BTreeMap<(usize, usize), TermE1>,
}

fn collect_e1(base: &LeviRep, wedges: &[LeviRep], spec: &ZeroLocusSpec) -> Result<TermE1> {
    let results: Vec<(usize, BTreeMap<usize, u64>)> = wedges
        .par_iter()
        .enumerate()
        .map(|(q, w)| Ok((q, cohomology_dims(&base.tensor(w), &spec.ambient)?)))
        .collect::<Result<_>>()?;
    let mut t = TermE1::default();
    for (q, dims) in results {
        for (j, d) in dims {
            if d > 0 {
                t.entries.insert((q, j), d);
            }
        }
    }
    Ok(t)
}

fn wedge_powers(f: &LeviRep, r: usize) -> Result<Vec<LeviRep>> {
    (0..=r).into_par_iter().map(|q| f.wedge(q)).collect()
}

/// E1 pages needed for rows `0..=p_max` of the Hodge diamond.
pub(crate) fn compute_page(spec: &ZeroLocusSpec, p_max: usize) -> Result<E1Page> {
    let amb = &spec.ambient;
    let r = spec.cut_rank()?;
    let f = spec.cut.clone().dual().rep(amb)?;
    let omega = amb.cotangent().rep(amb)?;
    let wedges = wedge_powers(&f, r)?;
    let syms: Vec<LeviRep> = (0..=p_max).into_par_iter().map(|b| f.sym(b)).collect::<Result<_>>()?;
    let omegas: Vec<LeviRep> = (0..=p_max).into_par_iter().map(|a| omega.wedge(a)).collect::<Result<_>>()?;
    // Sym^b F ⊗ ∧^q F is shared by every a
    let bq: Vec<(usize, usize)> = (0..=p_max).flat_map(|b| (0..=r).map(move |q| (b, q))).collect();
    let sym_wedge: HashMap<(usize, usize), LeviRep> =
        bq.par_iter().map(|&(b, q)| ((b, q), syms[b].tensor(&wedges[q]))).collect();
    let triples: Vec<(usize, usize, usize)> = (0..=p_max)
        .flat_map(|b| (0..=p_max - b).flat_map(move |a| (0..=r).map(move |q| (b, a, q))))
        .collect();
    let results: Vec<((usize, usize, usize), BTreeMap<usize, u64>)> = triples
        .par_iter()
        .map(|&(b, a, q)| {
            let rep = sym_wedge[&(b, q)].tensor(&omegas[a]);
            Ok(((b, a, q), cohomology_dims(&rep, amb)?))
        })
        .collect::<Result<_>>()?;
    let mut page = E1Page::default();
    for b in 0..=p_max {
        for a in 0..=p_max - b {
            page.terms.insert((b, a), TermE1::default());
        }
    }
    for ((b, a, q), dims) in results {
        let t = page.terms.get_mut(&(b, a)).expect("term allocated");
        for (j, d) in dims {
            if d > 0 {
                t.entries.insert((q, j), d);
            }
        }
    }
    Ok(page)
}

const MINIMAL_TRIES: usize = 64;
const WITNESS_BUDGET: usize = 200_000;

fn bound(d: u64) -> Result<i64> {
    i64::try_from(d).map_err(|_| Error::Overflow("E1 dimension"))
}

/// Unknowns of one Koszul spectral sequence inside a [`System`].
struct KoszulModel {
    /// `h^m` of the restricted term, per total degree with a non-zero E1
    u: BTreeMap<i64, usize>,
    /// total degrees touched by some possible differential
    touched: BTreeSet<i64>,
    /// d_1 differentials assumed of maximal rank: (variable, rank, description)
    generic: Vec<(usize, i64, String)>,
}

/// Adds the cancellation unknowns of `t`: one per pair of E1 terms that a
/// differential `d_r : E^{-q,j} → E^{-q+r, j-r+1}` could connect, bounded by
/// the capacities of both ends, and `u_m = K_m - (cancellations at m)`.
fn add_koszul(sys: &mut System, t: &TermE1, n: usize, name: &str) -> Result<KoszulModel> {
    let entries: Vec<((usize, usize), i64)> =
        t.entries.iter().map(|(&k, &d)| Ok((k, bound(d)?))).collect::<Result<_>>()?;
    let index: HashMap<(usize, usize), usize> = entries.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); entries.len()];
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut pair_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut touched = BTreeSet::new();
    for (i, &((q, j), d)) in entries.iter().enumerate() {
        let m = j as i64 - q as i64;
        by_degree.entry(m).or_default().push(i);
        for r in 1..=q {
            if j + 1 < r {
                break;
            }
            let target = (q - r, j + 1 - r);
            if let Some(&k) = index.get(&target) {
                let v = sys.var(0, d.min(entries[k].1));
                touching[i].push(v);
                touching[k].push(v);
                pair_of.insert((i, k), v);
                touched.insert(m);
                touched.insert(m + 1);
            }
        }
    }
    for (i, vars) in touching.iter().enumerate() {
        if !vars.is_empty() {
            sys.ge(vars.iter().map(|&v| (v, -1)).collect(), -entries[i].1);
        }
    }
    let mut u = BTreeMap::new();
    let mut alternating = Vec::new();
    for (&m, idx) in &by_degree {
        let k: i64 = idx.iter().map(|&i| entries[i].1).sum();
        let inside = m >= 0 && m <= n as i64;
        let var = sys.var(0, if inside { k } else { 0 });
        let mut terms = vec![(var, 1)];
        for &i in idx {
            terms.extend(touching[i].iter().map(|&v| (v, 1)));
        }
        sys.eq(terms, k);
        if inside {
            u.insert(m, var);
            alternating.push((var, if m % 2 == 0 { 1 } else { -1 }));
        }
    }
    // implied by the above, but bound propagation cannot see it
    sys.eq(alternating, t.euler());
    // generic maximal rank: an isolated pair of adjacent degrees holding one
    // term each, joined by a d_1
    let mut generic = Vec::new();
    for (&m, idx) in &by_degree {
        let (Some(next), false, false) = (by_degree.get(&(m + 1)), by_degree.contains_key(&(m - 1)), by_degree.contains_key(&(m + 2)))
        else {
            continue;
        };
        if idx.len() != 1 || next.len() != 1 {
            continue;
        }
        let (s, tg) = (idx[0], next[0]);
        let ((q, j), ds) = entries[s];
        let ((q2, j2), dt) = entries[tg];
        if q2 + 1 != q || j2 != j {
            continue;
        }
        let v = pair_of[&(s, tg)];
        let rank = ds.min(dt);
        generic.push((
            v,
            rank,
            format!("{name}: d1 H^{j}(∧^{q}F) -> H^{j}(∧^{q2}F) assumed of maximal rank {rank} ({ds} -> {dt})"),
        ));
    }
    Ok(KoszulModel { u, touched, generic })
}

#[derive(Clone)]
struct Stage {
    provenance: Provenance,
    name: String,
    eqs: Vec<(Vec<(usize, i64)>, i64)>,
    ges: Vec<(Vec<(usize, i64)>, i64)>,
    log: Vec<String>,
}

impl Stage {
    fn new(provenance: Provenance, name: impl Into<String>) -> Self {
        Stage { provenance, name: name.into(), eqs: Vec::new(), ges: Vec::new(), log: Vec::new() }
    }

    fn is_empty(&self) -> bool {
        self.eqs.is_empty() && self.ges.is_empty()
    }
}

/// Runs the base solve and then each stage, labelling entries by the first
/// stage at which they became exact. A stage that makes the system
/// infeasible is dropped and reported.
fn run_stages(
    mut sys: System,
    targets: &[usize],
    base: Provenance,
    stages: Vec<Stage>,
    budget: usize,
    log: &mut Vec<String>,
) -> Result<(Vec<i64>, Vec<i64>, HashMap<usize, Provenance>)> {
    let (lo, hi) = sys
        .tighten(targets, budget)
        .ok_or_else(|| Error::Consistency("E1 data admit no consistent cancellation pattern".into()))?;
    let mut prov = HashMap::new();
    for &t in targets {
        if lo[t] == hi[t] {
            prov.insert(t, base);
        }
    }
    let (mut lo, mut hi) = (lo, hi);
    for stage in stages {
        if stage.is_empty() {
            continue;
        }
        let mut trial = sys.clone();
        trial.lo = lo.clone();
        trial.hi = hi.clone();
        for (t, r) in &stage.eqs {
            trial.eq(t.clone(), *r);
        }
        for (t, r) in &stage.ges {
            trial.ge(t.clone(), *r);
        }
        match trial.tighten(targets, budget) {
            Some((l2, h2)) => {
                for &t in targets {
                    if l2[t] == h2[t] && !prov.contains_key(&t) {
                        prov.insert(t, stage.provenance);
                    }
                }
                lo = l2;
                hi = h2;
                log.extend(stage.log);
                sys = trial;
            }
            None => log.push(format!("{}: inconsistent with the other constraints, not applied", stage.name)),
        }
    }
    Ok((lo, hi, prov))
}

pub(crate) fn hodge_numbers(spec: &ZeroLocusSpec, opts: &HodgeOptions) -> Result<HodgeResult> {
    let n = spec.expected_dim()?;
    if n < 1 {
        return Err(if n < 0 { Error::NegativeDimension(n) } else { Error::TooSmall(n) });
    }
    let n = n as usize;
    let p_max = n / 2;
    let page = compute_page(spec, p_max)?;

    let mut chi = vec![0i64; n + 1];
    for p in 0..=p_max {
        let e1: i64 = (0..=p).map(|b| if b % 2 == 0 { 1 } else { -1 } * page.terms[&(b, p - b)].euler()).sum();
        let hrr = crate::chow::hrr_chi_omega(spec, p)?;
        if e1 != hrr {
            return Err(Error::Consistency(format!(
                "E1 alternating sum {e1} differs from Riemann-Roch {hrr} for Ω^{p}"
            )));
        }
        chi[p] = e1;
        chi[n - p] = if n.is_multiple_of(2) { e1 } else { -e1 };
    }

    let mut sys = System::default();
    let mut hvar: HashMap<(usize, usize), usize> = HashMap::new();
    let mut degenerate: HashMap<(usize, usize), bool> = HashMap::new();
    // one stage per assumption, so a false one is dropped on its own
    let mut generic = Vec::new();
    for p in 0..=p_max {
        let mut models = Vec::new();
        for b in 0..=p {
            let t = &page.terms[&(b, p - b)];
            let name = format!("Sym^{b}F ⊗ Ω^{}", p - b);
            let m = add_koszul(&mut sys, t, n, &name)?;
            for (v, rank, text) in &m.generic {
                let text = format!("row {p}, {text}");
                let mut st = Stage::new(Provenance::GenericRank, text.clone());
                st.eqs.push((vec![(*v, 1)], *rank));
                st.log.push(text);
                generic.push(st);
            }
            models.push(m);
        }
        // conormal-power spectral sequence: E1^{-b,m} = H^m(T_b|_X)
        let ub = |b: usize, m: i64| -> i64 { bound(page.terms[&(b, p - b)].total(m)).unwrap_or(i64::MAX) };
        let mut cap_terms: HashMap<(usize, i64), Vec<usize>> = HashMap::new();
        let mut deg_terms: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for b in 0..=p {
            for &m in models[b].u.keys() {
                for b2 in 0..b {
                    let m2 = m - (b - b2) as i64 + 1;
                    if models[b2].u.contains_key(&m2) {
                        let v = sys.var(0, ub(b, m).min(ub(b2, m2)));
                        cap_terms.entry((b, m)).or_default().push(v);
                        cap_terms.entry((b2, m2)).or_default().push(v);
                        deg_terms.entry(m - b as i64).or_default().push(v);
                        deg_terms.entry(m2 - b2 as i64).or_default().push(v);
                    }
                }
            }
        }
        for ((b, m), vars) in &cap_terms {
            let mut terms = vec![(models[*b].u[m], 1)];
            terms.extend(vars.iter().map(|&v| (v, -1)));
            sys.ge(terms, 0);
        }
        let mut row = Vec::new();
        for q in -(p as i64)..=n as i64 {
            let contrib: Vec<(usize, usize)> =
                (0..=p).filter_map(|b| models[b].u.get(&(q + b as i64)).map(|&v| (b, v))).collect();
            let upper: i64 = contrib.iter().map(|&(b, _)| ub(b, q + b as i64)).sum();
            let inside = q >= 0;
            let h = sys.var(0, if inside { upper } else { 0 });
            let mut terms = vec![(h, 1)];
            terms.extend(contrib.iter().map(|&(_, v)| (v, -1)));
            if let Some(ws) = deg_terms.get(&q) {
                terms.extend(ws.iter().map(|&v| (v, 1)));
            }
            sys.eq(terms, 0);
            if inside {
                let qq = q as usize;
                row.push((h, if q % 2 == 0 { 1 } else { -1 }));
                hvar.insert((p, qq), h);
                let local = !deg_terms.contains_key(&q)
                    && (0..=p).all(|b| {
                        let m = q + b as i64;
                        !models[b].touched.contains(&m)
                    });
                degenerate.insert((p, qq), local);
            }
        }
        sys.eq(row, chi[p]);
    }

    let var_of = |p: usize, q: usize| -> usize {
        if p <= p_max {
            hvar[&(p, q)]
        } else if q <= p_max {
            hvar[&(q, p)]
        } else {
            hvar[&(n - p, n - q)]
        }
    };

    let mut log = Vec::new();
    let mut symmetry = Stage::new(Provenance::Symmetry, "Hodge symmetry and Serre duality");
    for p in 0..=p_max {
        for q in 0..=n {
            for (p2, q2) in [(q, p), (n - p, n - q), (n - q, n - p)] {
                if p2 <= p_max && (p2, q2) != (p, q) {
                    symmetry.eqs.push((vec![(hvar[&(p, q)], 1), (hvar[&(p2, q2)], -1)], 0));
                }
            }
        }
    }
    let mut lefschetz_hard = Stage::new(Provenance::HardLefschetz, "Hard Lefschetz");
    for p in 1..=n {
        for q in 1..=n {
            if p + q <= n {
                lefschetz_hard.ges.push((vec![(var_of(p, q), 1), (var_of(p - 1, q - 1), -1)], 0));
            }
        }
    }
    let mut lefschetz = Stage::new(Provenance::Lefschetz, "Lefschetz hyperplane");
    if !opts.raw_intervals {
        if let Some(base) = spec.ample_divisor_base() {
            let (yd, name) = if base.cut_rank()? == 0 {
                (crate::chow::ambient_hodge(&base.ambient), base.ambient.to_string())
            } else {
                let y = hodge_numbers(&base, opts)?;
                log.extend(y.log.iter().map(|l| format!("for {base}: {l}")));
                (y.diamond, base.to_string())
            };
            for p in 0..=p_max {
                for q in 0..=n {
                    if p + q < n {
                        let e = yd.entry(p, q);
                        let v = hvar[&(p, q)];
                        if e.lo == e.hi {
                            lefschetz.eqs.push((vec![(v, 1)], e.lo));
                        } else {
                            lefschetz.ges.push((vec![(v, 1)], e.lo));
                            lefschetz.ges.push((vec![(v, -1)], -e.hi));
                        }
                    }
                }
            }
            lefschetz.log.push(format!("below the middle degree the cohomology is that of {name}"));
        }
    }

    // raw intervals are what each row's spectral sequences prove on their own
    // theorems before assumptions
    let stages = if opts.raw_intervals {
        Vec::new()
    } else {
        let mut v = vec![symmetry, lefschetz_hard, lefschetz];
        v.extend(generic);
        v
    };
    let mut targets: Vec<usize> = Vec::new();
    for p in 0..=p_max {
        for q in 0..=n {
            targets.push(hvar[&(p, q)]);
        }
    }
    let (mut lo, mut hi, mut prov) =
        run_stages(sys.clone(), &targets, Provenance::EulerPinned, stages.clone(), opts.probe_budget, &mut log)?;
    if !opts.raw_intervals && targets.iter().any(|&t| lo[t] < hi[t]) {
        // all differentials of maximal rank at once: the smallest total
        // cohomology the constraints allow
        let mut all = sys;
        for st in &stages {
            for (t, r) in &st.eqs {
                all.eq(t.clone(), *r);
            }
            for (t, r) in &st.ges {
                all.ge(t.clone(), *r);
            }
        }
        all.lo = lo.clone();
        all.hi = hi.clone();
        let upper: i64 = targets.iter().map(|&t| hi[t]).sum();
        let total = all.var(0, upper);
        let mut terms: Vec<(usize, i64)> = targets.iter().map(|&t| (t, 1)).collect();
        terms.push((total, -1));
        all.eq(terms, 0);
        let witness = all.tighten(&[total], opts.probe_budget).and_then(|(l2, h2)| {
            (l2[total]..=h2[total]).take(MINIMAL_TRIES).find_map(|v| {
                let mut trial = all.clone();
                trial.lo[total] = v;
                trial.hi[total] = v;
                let r = trial.feasible(WITNESS_BUDGET, true);
                match r {
                    Some(true) => Some(Some(v)),
                    Some(false) => None,
                    None => Some(None),
                }
            })?
        });
        if let Some(min) = witness {
            let mut minimal = Stage::new(Provenance::GenericRank, "maximal rank");
            minimal.eqs.push((vec![(total, 1)], min));
            minimal.log.push(format!(
                "all remaining differentials assumed of maximal rank (total of the computed rows {})",
                min
            ));
            let mut extra = Vec::new();
            let (l3, h3, p3) = run_stages(all, &targets, Provenance::EulerPinned, vec![minimal], opts.probe_budget, &mut extra)?;
            if extra.iter().any(|e| e.starts_with("all remaining")) {
                for &t in &targets {
                    if l3[t] == h3[t] && lo[t] < hi[t] {
                        prov.insert(t, p3.get(&t).copied().unwrap_or(Provenance::GenericRank));
                    }
                }
                lo = l3;
                hi = h3;
            }
            log.extend(extra);
        }
    }

    let mut diamond = HodgeDiamond::new(n);
    for p in 0..=n {
        for q in 0..=n {
            // representative in a computed row
            let (p0, q0) = [(p, q), (q, p), (n - p, n - q), (n - q, n - p)]
                .into_iter()
                .filter(|&(a, _)| a <= p_max)
                .min()
                .expect("some image lies in a computed row");
            let v = hvar[&(p0, q0)];
            let mut e = DiamondEntry::interval(lo[v], hi[v]);
            if lo[v] == hi[v] {
                let mut pr = prov.get(&v).copied().unwrap_or(Provenance::EulerPinned);
                if pr == Provenance::EulerPinned && degenerate[&(p0, q0)] {
                    pr = Provenance::E1Degenerate;
                }
                e.provenance = pr;
            }
            *diamond.entry_mut(p, q) = e;
        }
    }
    Ok(HodgeResult { diamond, chi, log })
}

pub(crate) fn restrict_cohomology(
    h: &BundleExpr,
    spec: &ZeroLocusSpec,
    opts: &HodgeOptions,
) -> Result<(Vec<DiamondEntry>, Vec<String>)> {
    let n = spec.expected_dim()?;
    if n < 0 {
        return Err(Error::NegativeDimension(n));
    }
    let n = n as usize;
    let amb = &spec.ambient;
    let base = h.rep(amb)?;
    let f = spec.cut.clone().dual().rep(amb)?;
    let wedges = wedge_powers(&f, spec.cut_rank()?)?;
    let t = collect_e1(&base, &wedges, spec)?;
    let mut sys = System::default();
    let model = add_koszul(&mut sys, &t, n, &h.to_string())?;
    let generic = model.generic.iter().map(|(v, rank, text)| {
        let mut st = Stage::new(Provenance::GenericRank, text.clone());
        st.eqs.push((vec![(*v, 1)], *rank));
        st.log.push(text.clone());
        st
    });
    let targets: Vec<usize> = model.u.values().copied().collect();
    let stages = if opts.raw_intervals { Vec::new() } else { generic.collect() };
    let mut log = Vec::new();
    let (lo, hi, prov) = run_stages(sys, &targets, Provenance::EulerPinned, stages, opts.probe_budget, &mut log)?;
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n as i64 {
        let e = match model.u.get(&m) {
            None => DiamondEntry::exact(0, Provenance::E1Degenerate),
            Some(&v) if lo[v] == hi[v] => {
                let mut pr = prov[&v];
                if pr == Provenance::EulerPinned && !model.touched.contains(&m) {
                    pr = Provenance::E1Degenerate;
                }
                DiamondEntry::exact(lo[v], pr)
            }
            Some(&v) => DiamondEntry::interval(lo[v], hi[v]),
        };
        out.push(e);
    }
    Ok((out, log))
}

/// E1 pages for rows `0..=⌊n/2⌋`; exposed for inspection and tests.
pub fn e1_page(spec: &ZeroLocusSpec) -> Result<E1Page> {
    let n = spec.expected_dim()?;
    if n < 0 {
        return Err(Error::NegativeDimension(n));
    }
    compute_page(spec, n as usize / 2)
}
