//! Exact dense linear algebra: Gaussian elimination and vertex enumeration
//! for small polytopes given by equalities and `≥` inequalities.

use std::collections::BTreeSet;

use crate::rational::Rational;

/// Reduces `[rows | rhs]` to reduced row echelon form in place and returns
/// the pivot column of each nonzero row.
fn rref(aug: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == aug.len() {
            break;
        }
        let Some(p) = (r..aug.len()).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for v in aug[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..aug.len() {
            if i == r || aug[i][c].is_zero() {
                continue;
            }
            let f = aug[i][c].clone();
            let (pivot_row, row) = if i < r {
                let (lo, hi) = aug.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = aug.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (v, p) in row.iter_mut().zip(pivot_row) {
                if !p.is_zero() {
                    *v -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a set of row vectors of length `ncols`.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut aug: Vec<Vec<Rational>> = rows.to_vec();
    rref(&mut aug, ncols).len()
}

/// Solves `M z = b` (possibly non-square). Returns `Some(z)` only when the
/// system is consistent and the solution is unique.
pub fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    debug_assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug, ncols);
    if pivots.len() != ncols {
        return None;
    }
    // Rows past the rank must read 0 = 0.
    if aug[pivots.len()..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    Some(aug[..ncols].iter().map(|row| row[ncols].clone()).collect())
}

/// `{ z : E z = e, G z ≥ g }` in `dim` variables.
#[derive(Debug, Clone, Default)]
pub struct Polytope {
    pub dim: usize,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Polytope { dim, ..Default::default() }
    }

    pub fn equal(&mut self, row: Vec<Rational>, rhs: Rational) {
        debug_assert_eq!(row.len(), self.dim);
        self.equalities.push((row, rhs));
    }

    pub fn at_least(&mut self, row: Vec<Rational>, rhs: Rational) {
        debug_assert_eq!(row.len(), self.dim);
        self.inequalities.push((row, rhs));
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        let lhs = |row: &[Rational]| crate::matrix::dot(row, z);
        self.equalities.iter().all(|(r, b)| &lhs(r) == b) && self.inequalities.iter().all(|(r, b)| &lhs(r) >= b)
    }

    /// All vertices, sorted and deduplicated, found by trying every subset
    /// of inequalities that could complete the equalities to a full-rank
    /// active set. Empty when the polytope is empty or has no vertex.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let eq_rows: Vec<Vec<Rational>> = self.equalities.iter().map(|(r, _)| r.clone()).collect();
        let eq_rank = rank(&eq_rows, self.dim);
        let need = self.dim - eq_rank;
        let mut found = BTreeSet::new();
        if need > self.inequalities.len() {
            return Vec::new();
        }
        for subset in Combinations::new(self.inequalities.len(), need) {
            let mut rows = eq_rows.clone();
            let mut rhs: Vec<Rational> = self.equalities.iter().map(|(_, b)| b.clone()).collect();
            for &i in &subset {
                rows.push(self.inequalities[i].0.clone());
                rhs.push(self.inequalities[i].1.clone());
            }
            if let Some(z) = solve_unique(&rows, &rhs, self.dim) {
                if self.contains(&z) {
                    found.insert(z);
                }
            }
        }
        found.into_iter().collect()
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
