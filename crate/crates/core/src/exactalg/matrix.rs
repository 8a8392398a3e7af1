use std::fmt;

use super::{ExactError, MPoly, Rat};

/// Rectangular matrix of polynomials sharing one variable context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MPoly>) -> PolyMatrix {
        assert!(rows > 0 && cols > 0, "empty matrix");
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        for e in &entries[1..] {
            assert!(e.same_vars(&entries[0]), "mixed variable contexts");
        }
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<MPoly>>) -> PolyMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        PolyMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, vars: &[String]) -> PolyMatrix {
        PolyMatrix::scalar(n, &MPoly::one(vars))
    }

    /// `p * Id_n`.
    pub fn scalar(n: usize, p: &MPoly) -> PolyMatrix {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    p.clone()
                } else {
                    p.zero_like()
                }
            })
            .collect();
        PolyMatrix::new(n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn vars(&self) -> &[String] {
        self.entries[0].vars()
    }

    pub fn get(&self, r: usize, c: usize) -> &MPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: MPoly) {
        assert!(p.same_vars(&self.entries[0]));
        self.entries[r * self.cols + c] = p;
    }

    pub fn entries(&self) -> &[MPoly] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<MPoly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vec(&self, r: usize) -> Vec<MPoly> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<MPoly>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> PolyMatrix {
        let entries: Vec<MPoly> = self.entries.iter().map(f).collect();
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        PolyMatrix::new(self.cols, self.rows, entries)
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, c: &Rat) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = self.get(0, 0).zero_like();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(r, k).mul(other.get(k, c)));
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MPoly::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is
    /// exact.
    pub fn det(&self) -> Result<MPoly, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(bareiss_det(self.to_rows()))
    }

    pub fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let rows = (0..self.rows)
            .filter(|&r| r != skip_row)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| c != skip_col)
                    .map(|c| self.get(r, c).clone())
                    .collect()
            })
            .collect();
        PolyMatrix::from_rows(rows)
    }

    /// Transposed cofactor matrix, so that `m * adj(m) = adj(m) * m = det(m) Id`.
    pub fn adjugate(&self) -> Result<PolyMatrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(PolyMatrix::identity(1, self.vars()));
        }
        let mut entries = vec![self.get(0, 0).zero_like(); n * n];
        for r in 0..n {
            for c in 0..n {
                let cof = self.minor(r, c).det()?;
                let cof = if (r + c) % 2 == 1 { cof.neg() } else { cof };
                entries[c * n + r] = cof;
            }
        }
        Ok(PolyMatrix::new(n, n, entries))
    }

    /// Checks `m * adj = adj * m = det * Id` exactly.
    pub fn check_adjugate(&self, adj: &PolyMatrix, det: &MPoly) -> bool {
        let target = PolyMatrix::scalar(self.rows, det);
        self.mul(adj) == target && adj.mul(self) == target
    }

    pub fn embed(&self, vars: &[String]) -> PolyMatrix {
        self.map(|p| p.embed(vars))
    }
}

fn pivot_cost(p: &MPoly) -> (usize, u32) {
    (p.num_terms(), p.total_degree().unwrap_or(0))
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<MPoly>>) -> MPoly {
    let n = a.len();
    let zero = a[0][0].zero_like();
    let mut negate = false;
    let mut prev = a[0][0].constant_like(Rat::one());
    for k in 0..n {
        // Cheapest nonzero pivot in column k.
        let Some(p) = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| (pivot_cost(&a[r][k]), r))
        else {
            return zero;
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            a[i][k] = zero.clone();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row_vec(r).iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
