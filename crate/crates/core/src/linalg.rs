//! Dense linear algebra over [`Scalar`] entries.
//!
//! All spans, ranks and memberships in the Lie-algebra layer go through exact
//! Gauss-Jordan elimination here; nothing is decided by a tolerance unless the
//! matrix genuinely carries float entries, in which case pivots below a
//! relative threshold are treated as zero.

use crate::scalar::{Realization, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_float(&self) -> bool {
        self.data
            .iter()
            .any(|s| s.realization() == Realization::Float)
    }

    fn pivot_threshold(&self) -> f64 {
        if !self.is_float() {
            return 0.0;
        }
        let scale = self.data.iter().map(|s| s.abs_f64()).fold(0.0f64, f64::max);
        1e-12 * scale.max(1.0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &add;
                }
            }
        }
        out
    }

    /// Row-reduce in place. Returns the pivot columns.
    pub fn reduce(&mut self) -> Vec<usize> {
        let tol = self.pivot_threshold();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            // choose pivot: first structurally nonzero entry (exact), or the
            // largest modulus above threshold (float)
            let mut pivot = None;
            if tol == 0.0 {
                pivot = (r..self.rows).find(|&i| !self[(i, c)].is_zero());
            } else {
                let mut best = tol;
                for i in r..self.rows {
                    let m = self[(i, c)].abs_f64();
                    if m > best {
                        best = m;
                        pivot = Some(i);
                    }
                }
            }
            let Some(p) = pivot else { continue };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for k in c..self.cols {
                self[(r, k)] = &self[(r, k)] * &inv;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for k in c..self.cols {
                    let sub = &f * &self[(r, k)];
                    self[(i, k)] = &self[(i, k)] - &sub;
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce().len()
    }

    /// One solution of `A x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.reduce();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -&m[(row, free)];
            }
            basis.push(v);
        }
        basis
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let tol = self.pivot_threshold();
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..m.cols {
            let pivot = if tol == 0.0 {
                (c..m.rows).find(|&i| !m[(i, c)].is_zero())
            } else {
                let mut best = tol;
                let mut p = None;
                for i in c..m.rows {
                    let v = m[(i, c)].abs_f64();
                    if v > best {
                        best = v;
                        p = Some(i);
                    }
                }
                p
            };
            let Some(p) = pivot else { return Scalar::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inv().expect("pivot nonzero");
            for i in (c + 1)..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for k in c..m.cols {
                    let sub = &f * &m[(c, k)];
                    m[(i, k)] = &m[(i, k)] - &sub;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of a list of coordinate vectors.
pub fn span_rank(vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_rows(vectors.to_vec()).rank()
}

/// Coordinates of `target` in the span of `vectors`, if it lies there.
pub fn coords_in_span(vectors: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    if vectors.is_empty() {
        return if target.iter().all(|s| s.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    // columns of A are the spanning vectors
    let a = Mat::from_rows(vectors.to_vec()).transpose();
    a.solve(target)
}

/// Basis of the intersection of two row spans, as coordinate vectors.
///
/// Solves `A^T u = B^T v` by taking the null space of `[A^T | -B^T]`.
pub fn span_intersection(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let dim = a[0].len();
    let cols = a.len() + b.len();
    let mut m = Mat::zero(dim, cols);
    for (j, row) in a.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = row[i].clone();
        }
    }
    for (j, row) in b.iter().enumerate() {
        for i in 0..dim {
            m[(i, a.len() + j)] = -&row[i];
        }
    }
    let kernel = m.nullspace();
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    for k in kernel {
        let mut v = vec![Scalar::zero(); dim];
        for (j, row) in a.iter().enumerate() {
            if k[j].is_zero() {
                continue;
            }
            for i in 0..dim {
                let add = &k[j] * &row[i];
                v[i] = &v[i] + &add;
            }
        }
        if v.iter().any(|c| !c.is_zero()) {
            vectors.push(v);
        }
    }
    let kept = independent_subset(&vectors);
    kept.into_iter().map(|i| vectors[i].clone()).collect()
}

/// Extract a linearly independent sub-list spanning the same space,
/// keeping the first occurrence order.
pub fn independent_subset(vectors: &[Vec<Scalar>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        rows.push(v.clone());
        if span_rank(&rows) == rows.len() {
            kept.push(i);
        } else {
            rows.pop();
        }
    }
    kept
}
