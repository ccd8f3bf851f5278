use std::collections::BTreeMap;

use super::Partition;

/// Littlewood-Richardson decomposition of `s_lambda * s_mu`.
pub fn lr_mult(lambda: &Partition, mu: &Partition) -> BTreeMap<Partition, u64> {
    lr_mult_bounded(lambda, mu, usize::MAX, u32::MAX)
}

/// Same as [`lr_mult`] but only keeps shapes inside a `max_rows` x `max_cols`
/// box. Shapes leaving the box are pruned during the search, which is what
/// Schubert calculus and GL(n) tensor products need.
pub fn lr_mult_bounded(
    lambda: &Partition,
    mu: &Partition,
    max_rows: usize,
    max_cols: u32,
) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    if !lambda.fits_in_box(max_rows, max_cols) {
        return out;
    }
    if mu.is_empty() {
        out.insert(lambda.clone(), 1);
        return out;
    }
    let rows = (lambda.len() + mu.len()).min(max_rows);
    let mut shape: Vec<u32> = (0..rows).map(|i| lambda.part(i)).collect();
    let mut counts: Vec<Vec<u32>> = Vec::with_capacity(mu.len());
    let mut search = Search { mu: mu.parts(), max_cols, rows, out: &mut out };
    search.label(0, &mut shape, &mut counts);
    out
}

struct Search<'a> {
    mu: &'a [u32],
    max_cols: u32,
    rows: usize,
    out: &'a mut BTreeMap<Partition, u64>,
}

impl Search<'_> {
    /// Places the horizontal strip of `mu[label]` copies of `label`.
    fn label(&mut self, label: usize, shape: &mut Vec<u32>, counts: &mut Vec<Vec<u32>>) {
        if label == self.mu.len() {
            let p = Partition::new(shape.clone()).expect("LR search keeps shapes partitions");
            *self.out.entry(p).or_insert(0) += 1;
            return;
        }
        counts.push(vec![0; self.rows]);
        let old = shape.clone();
        self.row(label, 0, self.mu[label], 0, &old, shape, counts);
        counts.pop();
    }

    #[allow(clippy::too_many_arguments)]
    fn row(
        &mut self,
        label: usize,
        r: usize,
        remaining: u32,
        placed_so_far: u32,
        old: &[u32],
        shape: &mut Vec<u32>,
        counts: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            self.label(label + 1, shape, counts);
            return;
        }
        if r == self.rows {
            return;
        }
        // horizontal strip: new boxes in row r stay weakly right of the old
        // end of row r-1
        let cap_strip = if r == 0 { self.max_cols } else { old[r - 1] } - old[r];
        let cap_cols = self.max_cols - old[r];
        // lattice word: the number of `label`s in rows <= r is bounded by the
        // number of `label-1`s in rows < r
        let cap_lattice = if label == 0 {
            u32::MAX
        } else {
            let prev: u32 = counts[label - 1][..r].iter().sum();
            prev.saturating_sub(placed_so_far)
        };
        let cap = cap_strip.min(cap_cols).min(cap_lattice).min(remaining);
        for x in (0..=cap).rev() {
            shape[r] = old[r] + x;
            counts[label][r] = x;
            self.row(label, r + 1, remaining - x, placed_so_far + x, old, shape, counts);
        }
        shape[r] = old[r];
        counts[label][r] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pieri_one_one() {
        let r = lr_mult(&p(&[1]), &p(&[1]));
        assert_eq!(r.len(), 2);
        assert_eq!(r[&p(&[2])], 1);
        assert_eq!(r[&p(&[1, 1])], 1);
    }

    #[test]
    fn identity() {
        let l = p(&[3, 1]);
        let r = lr_mult(&l, &Partition::empty());
        assert_eq!(r.len(), 1);
        assert_eq!(r[&l], 1);
        let r = lr_mult(&Partition::empty(), &l);
        assert_eq!(r[&l], 1);
    }

    #[test]
    fn s21_squared() {
        let r = lr_mult(&p(&[2, 1]), &p(&[2, 1]));
        assert_eq!(r[&p(&[3, 2, 1])], 2);
        assert_eq!(r[&p(&[4, 2])], 1);
        assert_eq!(r[&p(&[2, 2, 1, 1])], 1);
        let total: u64 = r.values().sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn box_truncation() {
        let r = lr_mult_bounded(&p(&[1]), &p(&[1]), 1, 5);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&p(&[2])], 1);
    }
}
