//! Integer matrices and Smith normal form with unimodular transforms.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl From<Vec<Vec<i64>>> for IntMatrix {
    fn from(rows: Vec<Vec<i64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows, cols)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<i64>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged integer matrix");
            data.extend(row);
        }
        Self { rows: r, cols, data }
    }

    pub fn from_columns(columns: &[Vec<i64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "integer matrix product shape");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                    return 0;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for c in 0..self.cols {
            let v = self.get(dst, c) + k * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for r in 0..self.rows {
            let v = self.get(r, dst) + k * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

/// `left * a * right == diagonal`, with `left` and `right` unimodular and the
/// nonzero diagonal entries `d_1 | d_2 | ...` positive and listed first.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    /// Inverse of `left`, tracked alongside so callers never need to invert.
    pub left_inverse: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries in order.
    pub fn invariants(&self) -> Vec<i64> {
        let n = self.diagonal.rows.min(self.diagonal.cols);
        (0..n).map(|i| self.diagonal.get(i, i)).take_while(|&d| d != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    // Row operations are mirrored on u (left) and, inverted, on u_inv (right).
    let mut k = 0;
    while k < m.min(n) {
        // smallest |entry| in the trailing block
        let pivot = (k..m)
            .flat_map(|r| (k..n).map(move |c| (r, c)))
            .filter(|&(r, c)| s.get(r, c) != 0)
            .min_by_key(|&(r, c)| s.get(r, c).abs());
        let Some((pr, pc)) = pivot else {
            break;
        };
        if pr != k {
            s.swap_rows(k, pr);
            u.swap_rows(k, pr);
            u_inv.swap_cols(k, pr);
        }
        if pc != k {
            s.swap_cols(k, pc);
            v.swap_cols(k, pc);
        }
        loop {
            let p = s.get(k, k);
            let mut dirty = false;
            for r in k + 1..m {
                let q = s.get(r, k).div_euclid(p);
                if q != 0 {
                    s.add_row(r, k, -q);
                    u.add_row(r, k, -q);
                    u_inv.add_col(k, r, q);
                }
                if s.get(r, k) != 0 {
                    dirty = true;
                }
            }
            for c in k + 1..n {
                let q = s.get(k, c).div_euclid(p);
                if q != 0 {
                    s.add_col(c, k, -q);
                    v.add_col(c, k, -q);
                }
                if s.get(k, c) != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the trailing block by the pivot
                let bad = (k + 1..m).find(|&r| (k + 1..n).any(|c| s.get(r, c) % p != 0));
                match bad {
                    None => break,
                    Some(r) => {
                        s.add_row(k, r, 1);
                        u.add_row(k, r, 1);
                        u_inv.add_col(r, k, -1);
                        continue;
                    }
                }
            }
            // a remainder became the new smallest entry: move it to (k, k)
            let (pr, pc) = (k..m)
                .flat_map(|r| (k..n).map(move |c| (r, c)))
                .filter(|&(r, c)| (r == k || c == k) && s.get(r, c) != 0)
                .min_by_key(|&(r, c)| s.get(r, c).abs())
                .expect("pivot row or column is nonzero");
            if pr != k {
                s.swap_rows(k, pr);
                u.swap_rows(k, pr);
                u_inv.swap_cols(k, pr);
            }
            if pc != k {
                s.swap_cols(k, pc);
                v.swap_cols(k, pc);
            }
        }
        if s.get(k, k) < 0 {
            s.negate_row(k);
            u.negate_row(k);
            for r in 0..m {
                let x = -u_inv.get(r, k);
                u_inv.set(r, k, x);
            }
        }
        k += 1;
    }
    SmithForm { left: u, diagonal: s, right: v, left_inverse: u_inv }
}
