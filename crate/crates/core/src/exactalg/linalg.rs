//! Exact linear algebra over the rationals.
//!
//! Elimination runs on integer rows (denominators cleared once up front) and
//! divides every updated row by the gcd of its entries, so intermediate sizes
//! stay bounded by the data rather than by the elimination history.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Reduced row echelon data of a rational matrix.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    /// Nonzero rows of the reduced echelon form, normalized to pivot 1.
    pub rows: Vec<Vec<Rat>>,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right nullspace, one vector per free column in increasing
    /// column order.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    v[p] = -&row[free];
                }
            }
            basis.push(v);
        }
        basis
    }
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    if !g.is_zero() && !g.is_one() {
        for a in row.iter_mut() {
            *a = &*a / &g;
        }
    }
}

/// Fraction-free Gauss-Jordan elimination to reduced row echelon form.
pub fn row_echelon(rows: &[Vec<Rat>], cols: usize) -> RowEchelon {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            let l = Rat::denominator_lcm(r.iter());
            let mut ints: Vec<BigInt> = r.iter().map(|a| a.numer() * (&l / a.denom())).collect();
            primitive(&mut ints);
            ints
        })
        .filter(|r| r.iter().any(|a| !a.is_zero()))
        .collect();

    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == m.len() {
            break;
        }
        // Smallest nonzero entry as pivot keeps the integers small; ties go to
        // the lowest row index so the result is deterministic.
        let Some(p) = (top..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()).then(a.cmp(&b)))
        else {
            continue;
        };
        m.swap(top, p);
        let pivot_row = m[top].clone();
        let pv = pivot_row[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == top || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            let g = pv.gcd(&a);
            let (mp, ma) = (&pv / &g, &a / &g);
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = &*x * &mp - y * &ma;
            }
            primitive(row);
        }
        pivots.push(col);
        top += 1;
    }
    m.truncate(top);

    let rows = m
        .into_iter()
        .zip(&pivots)
        .map(|(r, &p)| {
            let pv = r[p].clone();
            r.into_iter().map(|a| Rat::new(a, pv.clone())).collect()
        })
        .collect();
    RowEchelon { rows, pivots, cols }
}

/// Basis of `{v : m v = 0}` in reduced echelon form, ordered by free column.
pub fn q_nullspace(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    row_echelon(rows, cols).nullspace()
}

pub fn rank(rows: &[Vec<Rat>], cols: usize) -> usize {
    row_echelon(rows, cols).rank()
}

pub fn transpose(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    (0..cols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

pub fn mat_vec(rows: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    rows.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Determinant of a square rational matrix by fraction-free elimination.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pv = a[k][k].clone();
        det *= &pv;
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &pv;
            for c in k..n {
                let d = &f * &a[k][c];
                a[r][c] -= &d;
            }
        }
    }
    det
}

/// A ℚ-subspace of `ℚ^cols` grown one vector at a time, kept in echelon
/// form with one normalized row per pivot column.
#[derive(Debug, Clone)]
pub struct IncrementalSpan {
    cols: usize,
    rows: Vec<Option<Vec<Rat>>>,
    dim: usize,
}

impl IncrementalSpan {
    pub fn new(cols: usize) -> IncrementalSpan {
        IncrementalSpan {
            cols,
            rows: vec![None; cols],
            dim: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &mut [Rat]) -> Option<usize> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        for k in 0..self.cols {
            if v[k].is_zero() {
                continue;
            }
            let Some(row) = &self.rows[k] else {
                return Some(k);
            };
            let c = v[k].clone();
            for (x, a) in v.iter_mut().zip(row).skip(k) {
                if !a.is_zero() {
                    *x -= &(&c * a);
                }
            }
        }
        None
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        let Some(k) = self.reduce(&mut w) else {
            return false;
        };
        let inv = w[k].recip();
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows[k] = Some(w);
        self.dim += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&a| Rat::int(a)).collect())
            .collect()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(q_nullspace(&m(&[&[1, 0], &[0, 1]]), 2).is_empty());
    }

    #[test]
    fn single_row() {
        let basis = q_nullspace(&m(&[&[1, 1]]), 2);
        assert_eq!(basis, vec![vec![Rat::int(-1), Rat::int(1)]]);
    }

    #[test]
    fn rank_three_by_five() {
        let a = m(&[&[2, -1, 3, 0, 5], &[1, 4, -2, 7, 1], &[0, 3, 1, -1, 2]]);
        let basis = q_nullspace(&a, 5);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(mat_vec(&a, v).iter().all(Rat::is_zero));
        }
        assert_eq!(rank(&transpose(&a, 5), 3), 3);
    }

    #[test]
    fn incremental_span() {
        let mut s = IncrementalSpan::new(3);
        assert!(s.insert(&[Rat::int(1), Rat::int(2), Rat::int(0)]));
        assert!(s.insert(&[Rat::int(2), Rat::int(4), Rat::int(1)]));
        assert!(s.contains(&[Rat::int(0), Rat::int(0), Rat::int(5)]));
        assert!(!s.insert(&[Rat::int(3), Rat::int(6), Rat::int(-1)]));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn determinant() {
        assert_eq!(det_rat(&m(&[&[2, 1], &[7, 4]])), Rat::int(1));
        assert_eq!(det_rat(&m(&[&[0, 1], &[1, 0]])), Rat::int(-1));
        assert_eq!(det_rat(&m(&[&[1, 2], &[2, 4]])), Rat::zero());
    }
}
