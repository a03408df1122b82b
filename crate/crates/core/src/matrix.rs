//! Dense matrices over the rationals and an incremental row-space reducer.
//!
//! All elimination uses one deterministic pivot rule: scan columns left to
//! right, take the first row with a nonzero entry in the current column,
//! scale it monic, and eliminate above and below.  The resulting reduced
//! echelon form is the canonical basis of the row space, so any two
//! computations that span the same subspace produce identical bases — the
//! property every determinism guarantee in this crate leans on.

use crate::scalar::{int, Scalar};
use crate::sparse::{sv_add_scaled, SparseVec};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        let cur = &out[(i, j)] + prod;
                        out[(i, j)] = cur;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            if lead >= self.rows {
                break;
            }
            let pivot_row = (lead..self.rows).find(|&r| !self[(r, col)].is_zero());
            let Some(pr) = pivot_row else { continue };
            self.swap_rows(lead, pr);
            let inv = {
                let p = self[(lead, col)].clone();
                Scalar::one() / p
            };
            for j in col..self.cols {
                let v = &self[(lead, j)] * &inv;
                self[(lead, j)] = v;
            }
            for r in 0..self.rows {
                if r != lead && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let v = &self[(r, j)] - &factor * &self[(lead, j)];
                        self[(r, j)] = v;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Canonical basis of the null space `{x : self * x = 0}`.
    ///
    /// One basis vector per free column, ordered by ascending free column,
    /// with a 1 in the free coordinate.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row_idx, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(row_idx, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = rhs` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, rhs.len(), "dimension mismatch in solve");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row_idx, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(row_idx, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

/// Incrementally maintained canonical reduced row echelon basis.
///
/// Rows are sparse, kept sorted by pivot column, each monic with zeros at
/// every other pivot column.  Insertion order never affects the final basis:
/// it is the reduced echelon form of the span.
#[derive(Clone, Debug)]
pub struct Reducer {
    ambient: usize,
    /// parallel arrays: `pivots[k]` is the pivot column of `rows[k]`
    pivots: Vec<usize>,
    rows: Vec<SparseVec>,
}

impl Reducer {
    pub fn new(ambient: usize) -> Self {
        Reducer {
            ambient,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after subtracting its projection onto the span.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_tracked(v).0
    }

    /// Residual plus the coefficients used against each stored row.
    pub fn reduce_tracked(&self, mut v: SparseVec) -> (SparseVec, Vec<(usize, Scalar)>) {
        let mut used = Vec::new();
        loop {
            let Some(&(lead, _)) = v.first() else { break };
            match self.pivots.binary_search(&lead) {
                Ok(k) => {
                    let c = v[0].1.clone();
                    v = sv_add_scaled(&v, &self.rows[k], &(-c.clone()));
                    used.push((k, c));
                }
                Err(_) => break,
            }
        }
        // `v` may still have nonzero entries at non-leading pivot columns;
        // clear them so membership coefficients are exact.
        let mut i = 0;
        while i < v.len() {
            let (col, _) = v[i];
            if let Ok(k) = self.pivots.binary_search(&col) {
                let c = v[i].1.clone();
                v = sv_add_scaled(&v, &self.rows[k], &(-c.clone()));
                used.push((k, c));
                // restart scan from the current position; support shrank at `col`
                i = 0;
            } else {
                i += 1;
            }
        }
        (v, used)
    }

    /// Inserts `v`; returns `true` when the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(i, _)| *i < self.ambient));
        debug_assert!(
            v.windows(2).all(|w| w[0].0 < w[1].0),
            "reducer input must be sorted with unique indices"
        );
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].0;
        let inv = Scalar::one() / r[0].1.clone();
        let monic: SparseVec = r.iter().map(|(i, c)| (*i, c * &inv)).collect();
        // back-eliminate the new pivot from existing rows
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&lead, |(i, _)| *i) {
                let c = row[pos].1.clone();
                *row = sv_add_scaled(row, &monic, &(-c));
            }
        }
        let at = self.pivots.binary_search(&lead).unwrap_err();
        self.pivots.insert(at, lead);
        self.rows.insert(at, monic);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Coefficients expressing `v` in the stored basis, or `None` when `v`
    /// is outside the span.
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let (res, used) = self.reduce_tracked(v.clone());
        if !res.is_empty() {
            return None;
        }
        let mut out = vec![Scalar::zero(); self.rows.len()];
        for (k, c) in used {
            out[k] += c;
        }
        Some(out)
    }

    /// Canonical basis of `{x : x ⟂ all stored rows}` in the sense of the
    /// linear system `rows * x = 0` (rows as equations).
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let pivot_set: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ambient {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v: SparseVec = Vec::new();
            for (k, &pc) in self.pivots.iter().enumerate() {
                let c = crate::sparse::sv_get(&self.rows[k], free);
                if !c.is_zero() {
                    v.push((pc, -c));
                }
            }
            v.push((free, int(1)));
            v.sort_by_key(|(i, _)| *i);
            basis.push(v);
        }
        basis
    }
}
