//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::rat::Rat;

/// A sparse row: column index to nonzero entry.
pub type SparseRow = BTreeMap<usize, Rat>;

/// Incremental row echelon form. Rows are reduced as they arrive, so the rank
/// of a stream of vectors is available without materializing the matrix.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    pivots: FxHashMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and returns the remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, v)| (*c, v.clone()));
            let Some((col, coef)) = next else { break };
            let piv = &self.pivots[&col];
            for (c, v) in piv {
                let e = row.entry(*c).or_default();
                *e -= &(&coef * v);
                if e.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
        row
    }

    /// Inserts a row; returns `true` when it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&col, lead)) = row.iter().next() else { return false };
        let inv = lead.recip();
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        // keep earlier pivots reduced in this column so `reduce` only needs one pass
        for p in self.pivots.values_mut() {
            if let Some(f) = p.get(&col).cloned() {
                for (c, v) in &row {
                    let e = p.entry(*c).or_default();
                    *e -= &(&f * v);
                    if e.is_zero() {
                        p.remove(c);
                    }
                }
            }
        }
        self.pivots.insert(col, row);
        true
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Rank of a dense matrix.
pub fn dense_rank(m: &[Vec<Rat>]) -> usize {
    rank(m.iter().map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect()))
}

/// Dense matrix product.
pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate().take(k) {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &(&a[i][l] * &bl[j]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(v: &[i64]) -> SparseRow {
        v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, Rat::from_int(*x))).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(vec![row(&[1, 2]), row(&[2, 4])]), 1);
        assert_eq!(rank(vec![row(&[1, 2, 3]), row(&[0, 1, 1]), row(&[1, 3, 4])]), 2);
        assert_eq!(rank(vec![row(&[0, 0])]), 0);
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 4)) {
            let mr: Vec<Vec<Rat>> = m.iter().map(|r| r.iter().map(|x| Rat::from_int(*x)).collect()).collect();
            let t: Vec<Vec<Rat>> = (0..5).map(|j| (0..4).map(|i| mr[i][j].clone()).collect()).collect();
            prop_assert_eq!(dense_rank(&mr), dense_rank(&t));
        }
    }
}
