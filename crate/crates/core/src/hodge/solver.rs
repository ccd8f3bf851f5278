//! Bounded integer feasibility over small linear systems: bound propagation
//! plus budgeted depth-first probes. A probe that runs out of budget counts
//! as feasible, so every tightening is justified by a proof of infeasibility.

#[derive(Clone, Debug)]
pub(crate) struct Lin {
    pub terms: Vec<(usize, i64)>,
    pub rhs: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Eq,
    Ge,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct System {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    cons: Vec<(Kind, Lin)>,
    watch: Vec<Vec<usize>>,
}

const PROPAGATION_CAP: usize = 200_000;

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

impl System {
    pub fn var(&mut self, lo: i64, hi: i64) -> usize {
        self.lo.push(lo);
        self.hi.push(hi);
        self.watch.push(Vec::new());
        self.lo.len() - 1
    }

    fn push(&mut self, kind: Kind, terms: Vec<(usize, i64)>, rhs: i64) {
        let terms: Vec<(usize, i64)> = terms.into_iter().filter(|t| t.1 != 0).collect();
        let id = self.cons.len();
        for &(v, _) in &terms {
            if self.watch[v].last() != Some(&id) {
                self.watch[v].push(id);
            }
        }
        self.cons.push((kind, Lin { terms, rhs }));
    }

    /// `Σ a_i x_i = rhs`
    pub fn eq(&mut self, terms: Vec<(usize, i64)>, rhs: i64) {
        self.push(Kind::Eq, terms, rhs);
    }

    /// `Σ a_i x_i ≥ rhs`
    pub fn ge(&mut self, terms: Vec<(usize, i64)>, rhs: i64) {
        self.push(Kind::Ge, terms, rhs);
    }

    /// Tightens `lo`/`hi` to a fixpoint (or until the work cap); `false` when
    /// a contradiction is found.
    fn propagate(&self, lo: &mut [i64], hi: &mut [i64], seed: Option<&[usize]>) -> bool {
        let mut queued = vec![false; self.cons.len()];
        let mut queue: std::collections::VecDeque<usize> = match seed {
            Some(vars) => {
                let mut q = std::collections::VecDeque::new();
                for &v in vars {
                    for &c in &self.watch[v] {
                        if !queued[c] {
                            queued[c] = true;
                            q.push_back(c);
                        }
                    }
                }
                q
            }
            None => {
                queued.iter_mut().for_each(|x| *x = true);
                (0..self.cons.len()).collect()
            }
        };
        let mut work = 0;
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            work += 1;
            if work > PROPAGATION_CAP {
                break;
            }
            let (kind, lin) = &self.cons[c];
            let mut smin: i128 = 0;
            let mut smax: i128 = 0;
            for &(v, a) in &lin.terms {
                let (l, h) = (lo[v] as i128, hi[v] as i128);
                let a = a as i128;
                if a > 0 {
                    smin += a * l;
                    smax += a * h;
                } else {
                    smin += a * h;
                    smax += a * l;
                }
            }
            let rhs = lin.rhs as i128;
            if smax < rhs || (*kind == Kind::Eq && smin > rhs) {
                return false;
            }
            for &(v, a) in &lin.terms {
                let (l, h) = (lo[v] as i128, hi[v] as i128);
                let a128 = a as i128;
                let (tmin, tmax) = if a > 0 { (a128 * l, a128 * h) } else { (a128 * h, a128 * l) };
                // bounds on a*x from the rest of the constraint
                let lower = rhs - (smax - tmax);
                let upper = if *kind == Kind::Eq { Some(rhs - (smin - tmin)) } else { None };
                let (mut nl, mut nh) = (l, h);
                if a > 0 {
                    nl = nl.max(div_ceil(lower, a128));
                    if let Some(u) = upper {
                        nh = nh.min(div_floor(u, a128));
                    }
                } else {
                    nh = nh.min(div_floor(lower, a128));
                    if let Some(u) = upper {
                        nl = nl.max(div_ceil(u, a128));
                    }
                }
                if nl > nh {
                    return false;
                }
                if nl != l || nh != h {
                    lo[v] = nl as i64;
                    hi[v] = nh as i64;
                    for &c2 in &self.watch[v] {
                        if c2 != c && !queued[c2] {
                            queued[c2] = true;
                            queue.push_back(c2);
                        }
                    }
                }
            }
        }
        true
    }

    fn satisfied(&self, x: &[i64]) -> bool {
        self.cons.iter().all(|(kind, lin)| {
            let s: i128 = lin.terms.iter().map(|&(v, a)| a as i128 * x[v] as i128).sum();
            match kind {
                Kind::Eq => s == lin.rhs as i128,
                Kind::Ge => s >= lin.rhs as i128,
            }
        })
    }

    /// `Some(true)` feasible, `Some(false)` proven infeasible, `None` unknown.
    fn search(&self, lo: &mut Vec<i64>, hi: &mut Vec<i64>, changed: Option<&[usize]>, budget: &mut usize) -> Option<bool> {
        self.search_ordered(lo, hi, changed, budget, false)
    }

    fn search_ordered(
        &self,
        lo: &mut Vec<i64>,
        hi: &mut Vec<i64>,
        changed: Option<&[usize]>,
        budget: &mut usize,
        high_first: bool,
    ) -> Option<bool> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if !self.propagate(lo, hi, changed) {
            return Some(false);
        }
        // branch on the unfixed variable with the smallest domain
        let pick = (0..lo.len()).filter(|&v| lo[v] < hi[v]).min_by_key(|&v| (hi[v] - lo[v], v));
        let Some(v) = pick else {
            return Some(self.satisfied(lo));
        };
        let mid = lo[v] + (hi[v] - lo[v]) / 2;
        let mut unknown = false;
        for half in 0..2 {
            let (mut l2, mut h2) = (lo.clone(), hi.clone());
            if (half == 0) != high_first {
                h2[v] = mid;
            } else {
                l2[v] = mid + 1;
            }
            match self.search_ordered(&mut l2, &mut h2, Some(&[v]), budget, high_first) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => unknown = true,
            }
        }
        if unknown {
            None
        } else {
            Some(false)
        }
    }

    fn maybe_feasible(&self, lo: &[i64], hi: &[i64], changed: &[usize], budget: usize) -> bool {
        let mut budget = budget;
        let (mut l, mut h) = (lo.to_vec(), hi.to_vec());
        self.search(&mut l, &mut h, Some(changed), &mut budget) != Some(false)
    }

    /// Looks for an actual solution: `Some(true)` found, `Some(false)`
    /// proven impossible, `None` when the budget ran out.
    pub fn feasible(&self, budget: usize, high_first: bool) -> Option<bool> {
        let mut budget = budget;
        let (mut l, mut h) = (self.lo.clone(), self.hi.clone());
        self.search_ordered(&mut l, &mut h, None, &mut budget, high_first)
    }

    /// Sound bounds for the `targets`, or `None` when the whole system is
    /// proven infeasible.
    pub fn tighten(&self, targets: &[usize], budget: usize) -> Option<(Vec<i64>, Vec<i64>)> {
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        if !self.propagate(&mut lo, &mut hi, None) {
            return None;
        }
        {
            let mut b = budget;
            let (mut l, mut h) = (lo.clone(), hi.clone());
            if self.search(&mut l, &mut h, None, &mut b) == Some(false) {
                return None;
            }
        }
        loop {
            let mut changed = false;
            for &x in targets {
                if lo[x] == hi[x] {
                    continue;
                }
                // smallest feasible value
                let (mut a, mut b) = (lo[x], hi[x]);
                while a < b {
                    let mid = a + (b - a) / 2;
                    let mut h2 = hi.clone();
                    h2[x] = mid;
                    if self.maybe_feasible(&lo, &h2, &[x], budget) {
                        b = mid;
                    } else {
                        a = mid + 1;
                    }
                }
                if a != lo[x] {
                    lo[x] = a;
                    changed = true;
                }
                let (mut a, mut b) = (lo[x], hi[x]);
                while a < b {
                    let mid = a + (b - a + 1) / 2;
                    let mut l2 = lo.clone();
                    l2[x] = mid;
                    if self.maybe_feasible(&l2, &hi, &[x], budget) {
                        a = mid;
                    } else {
                        b = mid - 1;
                    }
                }
                if b != hi[x] {
                    hi[x] = b;
                    changed = true;
                }
                if changed && !self.propagate(&mut lo, &mut hi, Some(&[x])) {
                    return None;
                }
            }
            if !changed {
                break;
            }
        }
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagation_solves_chain() {
        let mut s = System::default();
        let x = s.var(0, 10);
        let y = s.var(0, 10);
        s.eq(vec![(x, 1), (y, 1)], 7);
        s.eq(vec![(x, 1), (y, -1)], 1);
        let (lo, hi) = s.tighten(&[x, y], 100).unwrap();
        assert_eq!((lo[x], hi[x], lo[y], hi[y]), (4, 4, 3, 3));
    }

    #[test]
    fn search_finds_parity() {
        // 2x + 2y = 5 has no integer solution
        let mut s = System::default();
        let x = s.var(0, 5);
        let y = s.var(0, 5);
        s.eq(vec![(x, 2), (y, 2)], 5);
        assert!(s.tighten(&[x], 1000).is_none());
    }

    #[test]
    fn shaving_needs_search() {
        let mut s = System::default();
        let x = s.var(0, 4);
        let y = s.var(0, 4);
        let z = s.var(0, 4);
        s.eq(vec![(x, 1), (y, 1)], 3);
        s.eq(vec![(x, 1), (y, -1), (z, -2)], 0);
        // x + y = 3 makes x - y odd, so x - y = 2z has no solution
        assert!(s.tighten(&[x], 1000).is_none());
    }

    #[test]
    fn inequalities() {
        let mut s = System::default();
        let x = s.var(0, 10);
        let y = s.var(0, 10);
        s.ge(vec![(x, 1), (y, -1)], 0);
        s.eq(vec![(y, 1)], 6);
        let (lo, hi) = s.tighten(&[x], 100).unwrap();
        assert_eq!((lo[x], hi[x]), (6, 10));
    }
}
