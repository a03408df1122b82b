//! Subspaces of a coordinate space, held in canonical reduced echelon form.

use crate::matrix::Reducer;
use crate::scalar::Scalar;
use crate::sparse::{sv_from_dense, SparseVec};

/// A linear subspace of `Q^ambient`.
///
/// The basis is the reduced row echelon form of any spanning set, so two
/// `Subspace` values are equal (as `PartialEq`) exactly when they are equal
/// as subspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_sparse(ambient, (0..ambient).map(crate::sparse::sv_unit))
    }

    pub fn from_reducer(r: Reducer) -> Self {
        Subspace {
            ambient: r.ambient(),
            pivots: r.pivots().to_vec(),
            rows: r.rows().to_vec(),
        }
    }

    pub fn from_sparse<I: IntoIterator<Item = SparseVec>>(ambient: usize, vecs: I) -> Self {
        let mut red = Reducer::new(ambient);
        for v in vecs {
            red.insert(v);
        }
        Self::from_reducer(red)
    }

    pub fn from_dense<I: IntoIterator<Item = Vec<Scalar>>>(ambient: usize, vecs: I) -> Self {
        Self::from_sparse(ambient, vecs.into_iter().map(|v| sv_from_dense(&v)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical basis rows (sparse, sorted by pivot column).
    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| crate::sparse::sv_to_dense(self.ambient, r))
            .collect()
    }

    pub fn to_reducer(&self) -> Reducer {
        let mut red = Reducer::new(self.ambient);
        for r in &self.rows {
            red.insert(r.clone());
        }
        red
    }

    pub fn contains_sparse(&self, v: &SparseVec) -> bool {
        self.to_reducer().contains(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.contains_sparse(&sv_from_dense(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let red = self.to_reducer();
        other.rows.iter().all(|r| red.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let mut red = self.to_reducer();
        for r in &other.rows {
            red.insert(r.clone());
        }
        Subspace::from_reducer(red)
    }

    /// dim(self ∩ other), via dim U + dim V − dim (U + V).
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn canonical_equality() {
        let u = Subspace::from_dense(
            3,
            vec![
                vec![int(1), int(1), int(0)],
                vec![int(0), int(2), int(0)],
            ],
        );
        let v = Subspace::from_dense(
            3,
            vec![
                vec![int(3), int(0), int(0)],
                vec![int(5), int(7), int(0)],
            ],
        );
        assert_eq!(u, v);
        assert_eq!(u.dim(), 2);
        assert!(u.contains(&[int(-1), int(4), int(0)]));
        assert!(!u.contains(&[int(0), int(0), int(1)]));
    }

    #[test]
    fn sums_and_intersections() {
        let u = Subspace::from_dense(3, vec![vec![int(1), int(0), int(0)]]);
        let v = Subspace::from_dense(3, vec![vec![int(0), int(1), int(0)]]);
        let s = u.sum(&v);
        assert_eq!(s.dim(), 2);
        assert_eq!(u.intersection_dim(&v), 0);
        assert_eq!(s.intersection_dim(&s), 2);
        assert!(s.contains_subspace(&u));
        assert!(!u.contains_subspace(&s));
        assert!(Subspace::zero(3).is_zero());
        assert_eq!(Subspace::full(3).dim(), 3);
    }
}
