//! Linear operators on `Q^n`, stored column-sparse.

use crate::matrix::Mat;
use crate::scalar::Scalar;
use crate::sparse::{sv_add_scaled, sv_from_dense, sv_to_dense, sv_unit, SparseVec};
use num_traits::Zero;

/// `cols[j]` is the image of the j-th standard basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LinOp {
    pub n: usize,
    pub cols: Vec<SparseVec>,
}

impl LinOp {
    pub fn identity(n: usize) -> Self {
        LinOp {
            n,
            cols: (0..n).map(sv_unit).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        LinOp {
            n,
            cols: vec![Vec::new(); n],
        }
    }

    pub fn from_columns(n: usize, cols: Vec<SparseVec>) -> Self {
        assert_eq!(cols.len(), n);
        LinOp { n, cols }
    }

    /// Diagonal 0/1 projection onto the given coordinate set.
    pub fn coordinate_projection(n: usize, keep: &[bool]) -> Self {
        assert_eq!(keep.len(), n);
        LinOp {
            n,
            cols: (0..n)
                .map(|j| if keep[j] { sv_unit(j) } else { Vec::new() })
                .collect(),
        }
    }

    pub fn from_mat(m: &Mat) -> Self {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        LinOp { n, cols }
    }

    pub fn to_mat(&self) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m[(*i, j)] = c.clone();
            }
        }
        m
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v {
            out = sv_add_scaled(&out, &self.cols[*j], c);
        }
        out
    }

    pub fn apply_dense(&self, v: &[Scalar]) -> Vec<Scalar> {
        sv_to_dense(self.n, &self.apply_sparse(&sv_from_dense(v)))
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LinOp) -> LinOp {
        assert_eq!(self.n, other.n);
        LinOp {
            n: self.n,
            cols: other.cols.iter().map(|c| self.apply_sparse(c)).collect(),
        }
    }

    /// Flattens to a vector over `n*n` coordinates, entry `(i, j)` at `i*n + j`.
    pub fn flatten(&self) -> SparseVec {
        let mut out: SparseVec = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                out.push((i * self.n + j, c.clone()));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == LinOp::identity(self.n)
    }
}
