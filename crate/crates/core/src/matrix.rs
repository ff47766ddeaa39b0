//! Dense matrices over a [`Field`] and the row-reduction routines the rest of
//! the crate leans on (rank, span membership, row-space intersection).

use serde::{Deserialize, Serialize};

use crate::gf::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|&r| self.row(r).to_vec()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, field: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Fe::ZERO; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = field.add(*o, field.mul(coef, g));
            }
        }
        out
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.row_reduce(field).len()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn row_reduce(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                self.set(r, j, field.mul(self.get(r, j), inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = field.sub(self.get(i, j), field.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Indices of a maximal independent subset of rows, chosen greedily in order.
    pub fn independent_rows(&self, field: &Field) -> Vec<usize> {
        let mut basis: Vec<(usize, Vec<Fe>)> = Vec::new();
        let mut keep = Vec::new();
        for r in 0..self.rows {
            let mut v = self.row(r).to_vec();
            for (pc, b) in &basis {
                let f = v[*pc];
                if !f.is_zero() {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = field.sub(*x, field.mul(f, y));
                    }
                }
            }
            if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
                let inv = field.inv(v[pc]).expect("nonzero");
                for x in v.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                for (_, b) in basis.iter_mut() {
                    let f = b[pc];
                    if !f.is_zero() {
                        for (x, &y) in b.iter_mut().zip(&v) {
                            *x = field.sub(*x, field.mul(f, y));
                        }
                    }
                }
                basis.push((pc, v));
                keep.push(r);
            }
        }
        keep
    }

    /// Basis (as rows) of the intersection of the row spaces of `a` and `b`.
    pub fn row_space_intersection(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.cols, b.cols);
        let n = a.cols;
        let ra = a.rows;
        let total = a.rows + b.rows;
        // Rows [a_i | e_i] and [b_j | 0]; a left-kernel vector (alpha, beta)
        // with alpha*A + beta*B = 0 shows up as a zero left block, and then
        // alpha*A lies in both spaces.
        let mut aug = Matrix::zeros(total, n + ra);
        for i in 0..a.rows {
            for c in 0..n {
                aug.set(i, c, a.get(i, c));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        for j in 0..b.rows {
            for c in 0..n {
                aug.set(ra + j, c, b.get(j, c));
            }
        }
        aug.row_reduce_left_block(field, n);
        let mut out = Vec::new();
        for r in 0..total {
            if (0..n).all(|c| aug.get(r, c).is_zero()) {
                let alpha: Vec<Fe> = (0..ra).map(|i| aug.get(r, n + i)).collect();
                if alpha.iter().any(|x| !x.is_zero()) {
                    out.push(a.left_mul(field, &alpha));
                }
            }
        }
        let m = Matrix::from_rows_or_empty(out, n);
        let keep = m.independent_rows(field);
        m.select_rows_or_empty(&keep, n)
    }

    fn from_rows_or_empty(rows: Vec<Vec<Fe>>, cols: usize) -> Matrix {
        if rows.is_empty() {
            Matrix::zeros(0, cols)
        } else {
            Matrix::from_rows(rows)
        }
    }

    fn select_rows_or_empty(&self, rows: &[usize], cols: usize) -> Matrix {
        if rows.is_empty() {
            Matrix::zeros(0, cols)
        } else {
            self.select_rows(rows)
        }
    }

    /// Gaussian elimination choosing pivots only among the first `limit` columns.
    fn row_reduce_left_block(&mut self, field: &Field, limit: usize) {
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                self.set(r, j, field.mul(self.get(r, j), inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = field.sub(self.get(i, j), field.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            r += 1;
        }
    }
}

/// Whether column `target` lies in the span of columns `helpers`.
pub fn column_in_span(field: &Field, g: &Matrix, target: usize, helpers: &[usize]) -> bool {
    let base = g.select_columns(helpers).rank(field);
    let mut with = helpers.to_vec();
    with.push(target);
    g.select_columns(&with).rank(field) == base
}
