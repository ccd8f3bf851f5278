//! Hodge numbers of zero loci from Koszul spectral sequences and the
//! conormal-power resolution of `Ω^p`, with constraint propagation.
//!
//! Every cancellation a spectral sequence could perform becomes a
//! non-negative integer unknown; exact Euler characteristics, vanishing
//! outside `[0, dim]`, Hodge symmetry, Serre duality, Hard Lefschetz and
//! (for ample complete intersections) the Lefschetz hyperplane theorem then
//! cut the possibilities down. Entries are exact only when every solution of
//! the resulting integer system agrees.

mod e1;
mod solver;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::{AmbientSpace, ZeroLocusSpec};
use crate::{Error, Result};

pub use e1::{e1_page, E1Page, TermE1};

/// Which rule fixed an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// No differential can touch the contributing E1 terms.
    E1Degenerate,
    /// Forced by the exact Euler characteristics and the shape of the
    /// spectral sequences.
    EulerPinned,
    /// Needed the assumption that a generic section gives maximal rank
    /// differentials.
    GenericRank,
    /// Hodge symmetry or Serre duality.
    Symmetry,
    /// Hard Lefschetz inequalities.
    HardLefschetz,
    /// Lefschetz hyperplane theorem below the middle degree.
    Lefschetz,
    /// Cell decomposition of the ambient.
    SchubertCells,
    Undetermined,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("provenance serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// A Hodge number, exact or known to lie in `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiamondEntry {
    pub lo: i64,
    pub hi: i64,
    pub provenance: Provenance,
}

impl DiamondEntry {
    pub fn exact(v: i64, provenance: Provenance) -> Self {
        DiamondEntry { lo: v, hi: v, provenance }
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        DiamondEntry { lo, hi, provenance: Provenance::Undetermined }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<i64> {
        self.is_exact().then_some(self.lo)
    }
}

impl fmt::Display for DiamondEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

/// The `(n+1) x (n+1)` grid of Hodge numbers `h^{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDiamond {
    n: usize,
    entries: Vec<DiamondEntry>,
}

impl HodgeDiamond {
    pub fn new(n: usize) -> Self {
        HodgeDiamond { n, entries: vec![DiamondEntry::interval(0, 0); (n + 1) * (n + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, p: usize, q: usize) -> &DiamondEntry {
        &self.entries[p * (self.n + 1) + q]
    }

    pub fn entry_mut(&mut self, p: usize, q: usize) -> &mut DiamondEntry {
        &mut self.entries[p * (self.n + 1) + q]
    }

    /// Exact value of `h^{p,q}`, if pinned.
    pub fn value(&self, p: usize, q: usize) -> Option<i64> {
        self.entry(p, q).value()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(DiamondEntry::is_exact)
    }

    /// Entries that are still intervals.
    pub fn undetermined(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..=self.n {
            for q in 0..=self.n {
                if !self.entry(p, q).is_exact() {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// `Σ (-1)^{p+q} h^{p,q}` when every entry is exact.
    pub fn euler(&self) -> Option<i64> {
        let mut e = 0;
        for p in 0..=self.n {
            for q in 0..=self.n {
                let v = self.value(p, q)?;
                e += if (p + q) % 2 == 0 { v } else { -v };
            }
        }
        Some(e)
    }

    /// `χ(Ω^p) = Σ_q (-1)^q h^{p,q}` when row `p` is exact.
    pub fn chi_omega(&self, p: usize) -> Option<i64> {
        (0..=self.n).map(|q| self.value(p, q).map(|v| if q % 2 == 0 { v } else { -v })).sum()
    }

    /// The entries of weight `j`, as `(p, q)` pairs with `p + q = j` and `p`
    /// decreasing.
    pub fn weight(&self, j: usize) -> Vec<(usize, usize)> {
        (0..=self.n).rev().filter(|&p| j >= p && j - p <= self.n).map(|p| (p, j - p)).collect()
    }

    /// Text layout with one centred row per weight, `h^{0,0}` on top and
    /// `h^{j,0}` leftmost in row `j`.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> =
            (0..=2 * self.n).map(|j| self.weight(j).iter().map(|&(p, q)| self.entry(p, q).to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(1);
        let rows: Vec<String> = cells
            .iter()
            .map(|r| r.iter().map(|c| format!("{c:^width$}")).collect::<Vec<_>>().join(" "))
            .collect();
        let total = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &rows {
            let pad = (total - r.chars().count()) / 2;
            out.push_str(&" ".repeat(pad));
            out.push_str(r.trim_end());
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct WireEntry {
    p: usize,
    q: usize,
    #[serde(with = "crate::json_int::i64")]
    lo: i64,
    #[serde(with = "crate::json_int::i64")]
    hi: i64,
    determined: bool,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct WireDiamond {
    n: usize,
    entries: Vec<WireEntry>,
}

impl Serialize for HodgeDiamond {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for p in 0..=self.n {
            for q in 0..=self.n {
                let e = self.entry(p, q);
                entries.push(WireEntry { p, q, lo: e.lo, hi: e.hi, determined: e.is_exact(), provenance: e.provenance });
            }
        }
        WireDiamond { n: self.n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HodgeDiamond {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = WireDiamond::deserialize(d)?;
        let mut out = HodgeDiamond::new(w.n);
        let mut seen = vec![false; (w.n + 1) * (w.n + 1)];
        for e in w.entries {
            if e.p > w.n || e.q > w.n {
                return Err(D::Error::custom(format!("entry ({},{}) outside the diamond", e.p, e.q)));
            }
            if e.lo > e.hi || e.determined != (e.lo == e.hi) {
                return Err(D::Error::custom(format!("inconsistent entry ({},{})", e.p, e.q)));
            }
            seen[e.p * (w.n + 1) + e.q] = true;
            *out.entry_mut(e.p, e.q) = DiamondEntry { lo: e.lo, hi: e.hi, provenance: e.provenance };
        }
        if seen.iter().any(|x| !x) {
            return Err(D::Error::custom("missing diamond entries"));
        }
        Ok(out)
    }
}

/// The Calabi-Yau type data of one weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub weight: usize,
    /// Largest `|p - q|` with `h^{p,q} ≠ 0`, `None` while undetermined.
    pub level: Option<usize>,
    /// `Some(k)` when the weight is of `k` Calabi-Yau type: level `k ≥ 1`
    /// and the outermost Hodge number equal to 1.
    pub cy_k: Option<usize>,
}

fn weight_structure(d: &HodgeDiamond, j: usize) -> std::result::Result<Structure, Vec<(usize, usize)>> {
    let cells = d.weight(j);
    let blocking: Vec<(usize, usize)> = cells.iter().copied().filter(|&(p, q)| !d.entry(p, q).is_exact()).collect();
    if !blocking.is_empty() {
        return Err(blocking);
    }
    let level = cells.iter().filter(|&&(p, q)| d.value(p, q) != Some(0)).map(|&(p, q)| p.abs_diff(q)).max().unwrap_or(0);
    let cy_k = if level >= 1 {
        let p = (j + level) / 2;
        (d.value(p, j - p) == Some(1)).then_some(level)
    } else {
        None
    };
    Ok(Structure { weight: j, level: Some(level), cy_k })
}

/// Level and Calabi-Yau type of every weight; refuses when any entry is
/// still an interval.
pub fn classify(d: &HodgeDiamond) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    let mut blocking = Vec::new();
    for j in 0..=2 * d.dim() {
        match weight_structure(d, j) {
            Ok(s) => out.push(s),
            Err(b) => blocking.extend(b),
        }
    }
    if !blocking.is_empty() {
        return Err(Error::Undetermined(blocking));
    }
    Ok(out)
}

/// Like [`classify`], but weights with undetermined entries are reported
/// with an unknown level instead of failing.
pub fn classify_partial(d: &HodgeDiamond) -> Vec<Structure> {
    (0..=2 * d.dim())
        .map(|j| weight_structure(d, j).unwrap_or(Structure { weight: j, level: None, cy_k: None }))
        .collect()
}

/// Middle diagonal Hodge number minus that of the ambient.
pub fn vanishing_middle(d: &HodgeDiamond, ambient: &AmbientSpace) -> Result<i64> {
    if !d.dim().is_multiple_of(2) {
        return Err(Error::Invalid(format!("dimension {} has no middle diagonal entry", d.dim())));
    }
    let mid = d.dim() / 2;
    let x = d.value(mid, mid).ok_or_else(|| Error::Undetermined(vec![(mid, mid)]))?;
    let amb = crate::chow::ambient_hodge(ambient);
    Ok(x - amb.value(mid, mid).unwrap_or(0))
}

/// Knobs of the Hodge engine.
#[derive(Clone, Copy, Debug)]
pub struct HodgeOptions {
    /// Disable the generic maximal-rank assumption for differentials.
    pub raw_intervals: bool,
    /// Search nodes per feasibility probe.
    pub probe_budget: usize,
}

impl Default for HodgeOptions {
    fn default() -> Self {
        HodgeOptions { raw_intervals: false, probe_budget: 400 }
    }
}

/// A diamond together with the data it was derived from.
#[derive(Clone, Debug)]
pub struct HodgeResult {
    pub diamond: HodgeDiamond,
    /// `χ(Ω^p)` for `p = 0..=n`.
    pub chi: Vec<i64>,
    /// Assumptions used and stages reverted.
    pub log: Vec<String>,
}

/// Hodge diamond of the zero locus of a general section.
pub fn hodge_numbers(spec: &ZeroLocusSpec, opts: &HodgeOptions) -> Result<HodgeResult> {
    e1::hodge_numbers(spec, opts)
}

/// Cohomology of `h|_X` degree by degree (`0..=dim X`), exact where the
/// Koszul spectral sequence allows.
pub fn restrict_cohomology(
    h: &crate::BundleExpr,
    spec: &ZeroLocusSpec,
    opts: &HodgeOptions,
) -> Result<(Vec<DiamondEntry>, Vec<String>)> {
    e1::restrict_cohomology(h, spec, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[&[i64]]) -> HodgeDiamond {
        let n = values.len() - 1;
        let mut d = HodgeDiamond::new(n);
        for (p, row) in values.iter().enumerate() {
            for (q, &v) in row.iter().enumerate() {
                *d.entry_mut(p, q) = DiamondEntry::exact(v, Provenance::EulerPinned);
            }
        }
        d
    }

    #[test]
    fn k3_surface_classification() {
        let d = diag(&[&[1, 0, 1], &[0, 20, 0], &[1, 0, 1]]);
        let s = classify(&d).unwrap();
        assert_eq!(s[2], Structure { weight: 2, level: Some(2), cy_k: Some(2) });
        assert_eq!(s[1].level, Some(0));
        assert_eq!(d.euler(), Some(24));
    }

    #[test]
    fn central_diamond_has_level_zero() {
        let d = diag(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
        assert!(classify(&d).unwrap().iter().all(|s| s.level == Some(0) && s.cy_k.is_none()));
    }

    #[test]
    fn undetermined_blocks_classification() {
        let mut d = diag(&[&[1, 0, 1], &[0, 20, 0], &[1, 0, 1]]);
        *d.entry_mut(1, 1) = DiamondEntry::interval(19, 20);
        match classify(&d) {
            Err(Error::Undetermined(v)) => assert_eq!(v, vec![(1, 1)]),
            r => panic!("{r:?}"),
        }
        assert_eq!(classify_partial(&d)[2].level, None);
    }

    #[test]
    fn json_round_trip() {
        let mut d = diag(&[&[1, 0, 1], &[0, 20, 0], &[1, 0, 1]]);
        *d.entry_mut(1, 1) = DiamondEntry::interval(0, 1 << 60);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<HodgeDiamond>(&s).unwrap(), d);
    }

    #[test]
    fn render_layout() {
        let d = diag(&[&[1, 0, 1], &[0, 20, 0], &[1, 0, 1]]);
        let r = d.render();
        let lines: Vec<&str> = r.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[2].split_whitespace().collect::<Vec<_>>(), vec!["1", "20", "1"]);
        assert_eq!(lines[0].trim(), "1");
    }
}
