//! Finite-dimensional associative algebras presented by structure constants.
//!
//! An algebra of dimension `d` over the rationals is a basis `e_0 … e_{d-1}`
//! (with human-readable labels) and a sparse table of structure constants
//! `e_i · e_j = Σ_k γ_{ij}^k e_k`.  Nothing about the presentation assumes
//! associativity; `validate` checks it exhaustively and reports the first
//! violating triple.  All other operations assume a validated table.

use crate::linop::LinOp;
use crate::matrix::{Mat, Reducer};
use crate::scalar::{format_scalar, Scalar};
use crate::sparse::{
    sv_add_scaled, sv_from_dense, sv_is_zero, sv_scale, sv_to_dense, sv_unit, SparseVec,
};
use crate::subspace::Subspace;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Malformed presentation data (bad indices, label counts, unit length).
#[derive(Debug, Clone, thiserror::Error)]
pub enum TableError {
    #[error("dimension must be positive")]
    ZeroDim,
    #[error("structure constant ({i},{j})->{k} out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("expected {dim} basis labels, got {got}")]
    LabelCount { got: usize, dim: usize },
    #[error("unit vector has length {got}, expected {dim}")]
    UnitLength { got: usize, dim: usize },
}

/// A witness that the presentation is not an algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationError {
    /// `(e_i e_j) e_k != e_i (e_j e_k)`; both triple products included.
    Associativity {
        i: usize,
        j: usize,
        k: usize,
        left: SparseVec,
        right: SparseVec,
    },
    /// The declared unit fails on basis element `index` (`side` is "left"
    /// or "right"); `got` is the offending product.
    Unit {
        index: usize,
        side: &'static str,
        got: SparseVec,
    },
}

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn sv(v: &SparseVec) -> String {
            if v.is_empty() {
                return "0".into();
            }
            v.iter()
                .map(|(i, c)| format!("{}*e{}", format_scalar(c), i))
                .collect::<Vec<_>>()
                .join(" + ")
        }
        match self {
            ValidationError::Associativity { i, j, k, left, right } => write!(
                f,
                "associativity fails at basis triple ({i},{j},{k}): (e{i}e{j})e{k} = {} but e{i}(e{j}e{k}) = {}",
                sv(left),
                sv(right)
            ),
            ValidationError::Unit { index, side, got } => write!(
                f,
                "declared unit is not a {side} identity on basis element {index}: product = {}",
                sv(got)
            ),
        }
    }
}

impl std::error::Error for ValidationError {}

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    dim: usize,
    labels: Vec<String>,
    /// `table[i * dim + j]` holds `e_i · e_j`.
    table: Vec<SparseVec>,
    unit: Option<Vec<Scalar>>,
}

impl Algebra {
    /// Builds an algebra from sparse structure constants.  Repeated
    /// `(i, j, k)` entries are summed; zero coefficients are dropped.
    pub fn new(
        dim: usize,
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unit: Option<Vec<Scalar>>,
    ) -> Result<Algebra, TableError> {
        if dim == 0 {
            return Err(TableError::ZeroDim);
        }
        if labels.len() != dim {
            return Err(TableError::LabelCount { got: labels.len(), dim });
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(TableError::UnitLength { got: u.len(), dim });
            }
        }
        let mut table = vec![SparseVec::new(); dim * dim];
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(TableError::IndexOutOfRange { i, j, k, dim });
            }
            if c.is_zero() {
                continue;
            }
            let cell = &mut table[i * dim + j];
            match cell.binary_search_by_key(&k, |(t, _)| *t) {
                Ok(pos) => {
                    cell[pos].1 += c;
                    if cell[pos].1.is_zero() {
                        cell.remove(pos);
                    }
                }
                Err(pos) => cell.insert(pos, (k, c)),
            }
        }
        Ok(Algebra { dim, labels, table, unit })
    }

    /// Builds the table by evaluating `prod(i, j)` on every basis pair.
    pub fn from_products(
        dim: usize,
        labels: Vec<String>,
        mut prod: impl FnMut(usize, usize) -> SparseVec,
        unit: Option<Vec<Scalar>>,
    ) -> Algebra {
        assert!(dim > 0, "dimension must be positive");
        assert_eq!(labels.len(), dim);
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut v = prod(i, j);
                v.retain(|(_, c)| !c.is_zero());
                v.sort_by_key(|(k, _)| *k);
                table.push(v);
            }
        }
        Algebra { dim, labels, table, unit }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> Option<&Vec<Scalar>> {
        self.unit.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    /// Iterates the nonzero structure constants in canonical `(i, j, k)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (0..self.dim).flat_map(move |j| {
                self.table[i * self.dim + j]
                    .iter()
                    .map(move |(k, c)| (i, j, *k, c))
            })
        })
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    /// Product of two elements in sparse coordinates.
    pub fn mul_sparse(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, ca) in a {
            for (j, cb) in b {
                let cell = self.basis_product(*i, *j);
                if !cell.is_empty() {
                    out = sv_add_scaled(&out, cell, &(ca * cb));
                }
            }
        }
        out
    }

    /// Bilinear product of dense coordinate vectors.
    ///
    /// Panics on a dimension mismatch; callers must present elements of
    /// this algebra.
    pub fn mul_dense(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(a.len(), self.dim, "left factor has wrong dimension");
        assert_eq!(b.len(), self.dim, "right factor has wrong dimension");
        sv_to_dense(
            self.dim,
            &self.mul_sparse(&sv_from_dense(a), &sv_from_dense(b)),
        )
    }

    /// Exhaustive associativity and unit check.  Returns the first
    /// violation in lexicographic `(i, j, k)` order.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let d = self.dim;
        let violation = (0..d)
            .into_par_iter()
            .find_map_first(|i| {
                for j in 0..d {
                    let ij = self.basis_product(i, j);
                    for k in 0..d {
                        let left = self.mul_sparse(ij, &sv_unit(k));
                        let right = self.mul_sparse(&sv_unit(i), self.basis_product(j, k));
                        if left != right {
                            return Some(ValidationError::Associativity { i, j, k, left, right });
                        }
                    }
                }
                None
            });
        if let Some(v) = violation {
            return Err(v);
        }
        if let Some(u) = &self.unit {
            let us = sv_from_dense(u);
            for i in 0..d {
                let e = sv_unit(i);
                let left = self.mul_sparse(&us, &e);
                if left != e {
                    return Err(ValidationError::Unit { index: i, side: "left", got: left });
                }
                let right = self.mul_sparse(&e, &us);
                if right != e {
                    return Err(ValidationError::Unit { index: i, side: "right", got: right });
                }
            }
        }
        Ok(())
    }

    /// The center `{x : xa = ax for all a}` as a subspace.
    pub fn center(&self) -> Subspace {
        let d = self.dim;
        // Equations over x_i: for each (j, k): Σ_i x_i (γ_{ij}^k − γ_{ji}^k) = 0.
        let mut eqs: std::collections::BTreeMap<(usize, usize), SparseVec> =
            std::collections::BTreeMap::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.basis_product(i, j) {
                    let e = eqs.entry((j, *k)).or_default();
                    *e = sv_add_scaled(e, &sv_unit(i), c);
                }
                for (k, c) in self.basis_product(j, i) {
                    let e = eqs.entry((j, *k)).or_default();
                    *e = sv_add_scaled(e, &sv_unit(i), &(-c));
                }
            }
        }
        let mut red = Reducer::new(d);
        for (_, eq) in eqs {
            if !sv_is_zero(&eq) {
                red.insert(eq);
            }
        }
        Subspace::from_sparse(d, red.kernel_basis())
    }

    /// Adjoins a unit as the last basis vector.  Unital input is returned
    /// unchanged.
    pub fn unitization(&self) -> Algebra {
        if self.is_unital() {
            return self.clone();
        }
        let d = self.dim;
        let mut labels = self.labels.clone();
        labels.push("1".into());
        let alg = Algebra::from_products(
            d + 1,
            labels,
            |i, j| {
                if i == d && j == d {
                    sv_unit(d)
                } else if i == d {
                    sv_unit(j)
                } else if j == d {
                    sv_unit(i)
                } else {
                    self.basis_product(i, j).clone()
                }
            },
            None,
        );
        let mut unit = vec![Scalar::zero(); d + 1];
        unit[d] = Scalar::one();
        Algebra { unit: Some(unit), ..alg }
    }

    /// Span of all pairwise products of basis vectors of `u` and `v`.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Subspace {
        assert_eq!(u.ambient(), self.dim, "left subspace has wrong ambient dimension");
        assert_eq!(v.ambient(), self.dim, "right subspace has wrong ambient dimension");
        let mut red = Reducer::new(self.dim);
        for a in u.basis() {
            for b in v.basis() {
                let p = self.mul_sparse(a, b);
                if !p.is_empty() {
                    red.insert(p);
                }
            }
        }
        Subspace::from_reducer(red)
    }

    /// Left multiplication by `v` as an operator.
    pub fn left_mul(&self, v: &SparseVec) -> LinOp {
        LinOp::from_columns(
            self.dim,
            (0..self.dim).map(|j| self.mul_sparse(v, &sv_unit(j))).collect(),
        )
    }

    /// Right multiplication by `v` as an operator.
    pub fn right_mul(&self, v: &SparseVec) -> LinOp {
        LinOp::from_columns(
            self.dim,
            (0..self.dim).map(|j| self.mul_sparse(&sv_unit(j), v)).collect(),
        )
    }

    /// `trace_vec[t] = tr(L_{e_t})`; the trace of left multiplication by an
    /// element `x` is then the dot product of `x` with this vector.
    pub fn left_trace_vector(&self) -> Vec<Scalar> {
        (0..self.dim)
            .map(|t| {
                let mut acc = Scalar::zero();
                for k in 0..self.dim {
                    let c = crate::sparse::sv_get(self.basis_product(t, k), k);
                    if !c.is_zero() {
                        acc += c;
                    }
                }
                acc
            })
            .collect()
    }

    /// Quotient by a two-sided ideal.  The quotient basis is the image of
    /// the standard basis vectors at the non-pivot coordinates of the
    /// ideal, so labels carry over.
    pub fn quotient(&self, ideal: &Subspace) -> (Algebra, QuotientMap) {
        assert_eq!(ideal.ambient(), self.dim);
        let qm = QuotientMap::new(self.dim, ideal);
        let labels: Vec<String> = qm
            .complement_coords
            .iter()
            .map(|&c| self.labels[c].clone())
            .collect();
        let q = qm.complement_coords.len();
        assert!(q > 0, "quotient by the whole algebra has dimension zero");
        let mut products: Vec<SparseVec> = Vec::with_capacity(q * q);
        for &a in &qm.complement_coords {
            for &b in &qm.complement_coords {
                products.push(qm.project_sparse(self.basis_product(a, b).clone()));
            }
        }
        let mut it = products.into_iter();
        let alg = Algebra::from_products(q, labels, |_, _| it.next().unwrap(), None);
        let unit = self
            .unit
            .as_ref()
            .map(|u| sv_to_dense(q, &qm.project_sparse(sv_from_dense(u))));
        (Algebra { unit, ..alg }, qm)
    }

    /// Span of `{ e · a · e : a over the basis }` for an idempotent `e`:
    /// the corner subspace `eAe`.
    pub fn corner(&self, e: &SparseVec) -> Subspace {
        let mut red = Reducer::new(self.dim);
        for i in 0..self.dim {
            let p = self.mul_sparse(&self.mul_sparse(e, &sv_unit(i)), e);
            if !p.is_empty() {
                red.insert(p);
            }
        }
        Subspace::from_reducer(red)
    }

    /// The same algebra expressed in the basis `f_i = Σ_j p[i][j] e_j`.
    /// `p` must be invertible.
    pub fn change_basis(&self, p: &Mat) -> Algebra {
        assert_eq!(p.rows, self.dim);
        assert_eq!(p.cols, self.dim);
        let pt = p.transpose();
        let pt_inv = pt.inverse().expect("change of basis must be invertible");
        let to_new = |w: &[Scalar]| pt_inv.mul_vec(w);
        let labels: Vec<String> = (0..self.dim).map(|i| format!("f{}", i + 1)).collect();
        let alg = Algebra::from_products(
            self.dim,
            labels,
            |i, j| {
                let w = self.mul_dense(&p.row_vec(i), &p.row_vec(j));
                sv_from_dense(&to_new(&w))
            },
            None,
        );
        let unit = self.unit.as_ref().map(|u| to_new(u));
        Algebra { unit, ..alg }
    }

    /// The multiplication table of a subspace closed under products, in the
    /// subspace's canonical basis.  Returns `None` when some product of
    /// basis vectors escapes the subspace.  Basis vectors that are plain
    /// ambient basis elements keep their labels.
    pub fn restrict(&self, s: &Subspace) -> Option<Algebra> {
        let red = s.to_reducer();
        let rows = s.basis();
        let k = rows.len();
        let mut cells: Vec<SparseVec> = Vec::with_capacity(k * k);
        for a in rows {
            for b in rows {
                let p = self.mul_sparse(a, b);
                cells.push(sv_from_dense(&red.coords(&p)?));
            }
        }
        let labels = rows
            .iter()
            .enumerate()
            .map(|(t, r)| {
                if r.len() == 1 && r[0].1.is_one() {
                    self.labels[r[0].0].clone()
                } else {
                    format!("v{}", t + 1)
                }
            })
            .collect();
        let alg = Algebra::from_products(k, labels, |i, j| cells[i * k + j].clone(), None);
        Some(alg)
    }

    /// Opposite algebra: same space, reversed multiplication.
    pub fn opposite(&self) -> Algebra {
        let alg = Algebra::from_products(
            self.dim,
            self.labels.clone(),
            |i, j| self.basis_product(j, i).clone(),
            None,
        );
        Algebra { unit: self.unit.clone(), ..alg }
    }

    /// Renders an element as a combination of basis labels.
    pub fn render_sparse(&self, v: &SparseVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| {
                if c.is_one() {
                    self.labels[*i].clone()
                } else {
                    format!("{}*{}", format_scalar(c), self.labels[*i])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn render_dense(&self, v: &[Scalar]) -> String {
        self.render_sparse(&sv_from_dense(v))
    }
}

/// Projection data for a quotient `A / I`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub ambient: usize,
    ideal: Reducer,
    /// Ambient coordinates that survive into the quotient, ascending.
    pub complement_coords: Vec<usize>,
}

impl QuotientMap {
    fn new(ambient: usize, ideal: &Subspace) -> Self {
        let red = ideal.to_reducer();
        let pivots: std::collections::HashSet<usize> = red.pivots().iter().copied().collect();
        let complement_coords = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        QuotientMap { ambient, ideal: red, complement_coords }
    }

    /// Image of an ambient vector in quotient coordinates (sparse).
    pub fn project_sparse(&self, v: SparseVec) -> SparseVec {
        let r = self.ideal.reduce(v);
        // residual support lies in the complement coordinates; relabel
        r.into_iter()
            .map(|(i, c)| {
                let pos = self
                    .complement_coords
                    .binary_search(&i)
                    .expect("reduced vector must be supported on complement coordinates");
                (pos, c)
            })
            .collect()
    }

    pub fn project_dense(&self, v: &[Scalar]) -> Vec<Scalar> {
        sv_to_dense(
            self.complement_coords.len(),
            &self.project_sparse(sv_from_dense(v)),
        )
    }

    /// Canonical section: quotient coordinates back to ambient coordinates.
    pub fn lift_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut out: SparseVec = v
            .iter()
            .map(|(i, c)| (self.complement_coords[*i], c.clone()))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn lift_dense(&self, v: &[Scalar]) -> Vec<Scalar> {
        sv_to_dense(self.ambient, &self.lift_sparse(&sv_from_dense(v)))
    }
}

/// Scales a sparse vector; re-exported here because element arithmetic
/// usually happens next to an `Algebra`.
pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    sv_scale(v, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    /// 2x2 upper triangular matrices: e0 = e11, e1 = e12, e2 = e22.
    pub fn ut2() -> Algebra {
        Algebra::new(
            3,
            vec!["e11".into(), "e12".into(), "e22".into()],
            vec![
                (0, 0, 0, int(1)),
                (0, 1, 1, int(1)),
                (1, 2, 1, int(1)),
                (2, 2, 2, int(1)),
            ],
            Some(vec![int(1), int(0), int(1)]),
        )
        .unwrap()
    }

    #[test]
    fn ut2_validates_and_multiplies() {
        let a = ut2();
        assert!(a.validate().is_ok());
        // e11 * e12 = e12, e12 * e11 = 0
        assert_eq!(a.mul_dense(&[int(1), int(0), int(0)], &[int(0), int(1), int(0)]), vec![int(0), int(1), int(0)]);
        assert_eq!(a.mul_dense(&[int(0), int(1), int(0)], &[int(1), int(0), int(0)]), vec![int(0), int(0), int(0)]);
    }

    #[test]
    fn perturbed_table_reports_first_violating_triple() {
        // break e12 * e22 = e12 into e12 * e22 = e22: associativity must fail
        let bad = Algebra::new(
            3,
            vec!["e11".into(), "e12".into(), "e22".into()],
            vec![
                (0, 0, 0, int(1)),
                (0, 1, 1, int(1)),
                (1, 2, 2, int(1)),
                (2, 2, 2, int(1)),
            ],
            None,
        )
        .unwrap();
        match bad.validate() {
            Err(ValidationError::Associativity { i, j, k, left, right }) => {
                // first bad triple in lex order: (0,1,2):
                // (e11 e12) e22 = e12 e22 = e22, but e11 (e12 e22) = e11 e22 = 0
                assert_eq!((i, j, k), (0, 1, 2));
                assert_eq!(left, vec![(2, int(1))]);
                assert!(right.is_empty());
            }
            other => panic!("expected associativity violation, got {other:?}"),
        }
    }

    #[test]
    fn bad_unit_is_reported() {
        let a = Algebra::new(
            3,
            vec!["e11".into(), "e12".into(), "e22".into()],
            vec![
                (0, 0, 0, int(1)),
                (0, 1, 1, int(1)),
                (1, 2, 1, int(1)),
                (2, 2, 2, int(1)),
            ],
            Some(vec![int(1), int(0), int(0)]), // e11 alone is not a unit
        )
        .unwrap();
        match a.validate() {
            Err(ValidationError::Unit { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected unit violation, got {other:?}"),
        }
    }

    #[test]
    fn center_of_ut2_is_the_scalars() {
        // solved by hand: x = a e11 + b e12 + c e22 commutes with everything
        // iff a = c and b = 0, so the center is spanned by e11 + e22.
        let a = ut2();
        let z = a.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&[int(1), int(0), int(1)]));
    }

    #[test]
    fn unitization_adjoins_a_unit() {
        let z2 = Algebra::new(
            2,
            vec!["z1".into(), "z2".into()],
            Vec::<(usize, usize, usize, Scalar)>::new(),
            None,
        )
        .unwrap();
        let u = z2.unitization();
        assert_eq!(u.dim(), 3);
        assert!(u.validate().is_ok());
        assert!(u.is_unital());
        // A sits inside as an ideal spanned by the first two basis vectors
        assert_eq!(u.basis_product(2, 0), &sv_unit(0));
        assert_eq!(u.basis_product(0, 2), &sv_unit(0));
        assert!(u.basis_product(0, 1).is_empty());
        // already-unital input is returned unchanged
        let a = ut2();
        assert_eq!(a.unitization(), a);
    }

    #[test]
    fn subspace_products_power_down() {
        let a = ut2();
        let j = Subspace::from_dense(3, vec![vec![int(0), int(1), int(0)]]);
        let j2 = a.subspace_product(&j, &j);
        assert!(j2.is_zero());
        let whole = Subspace::full(3);
        let sq = a.subspace_product(&whole, &whole);
        assert_eq!(sq.dim(), 3);
    }

    #[test]
    fn quotient_by_radical_of_ut2() {
        let a = ut2();
        let j = Subspace::from_dense(3, vec![vec![int(0), int(1), int(0)]]);
        let (q, qm) = a.quotient(&j);
        assert_eq!(q.dim(), 2);
        assert!(q.validate().is_ok());
        // e11 and e22 survive; the quotient is F x F
        assert_eq!(q.basis_product(0, 0), &sv_unit(0));
        assert_eq!(q.basis_product(1, 1), &sv_unit(1));
        assert!(q.basis_product(0, 1).is_empty());
        assert_eq!(qm.project_dense(&[int(2), int(7), int(3)]), vec![int(2), int(3)]);
        assert_eq!(qm.lift_dense(&[int(2), int(3)]), vec![int(2), int(0), int(3)]);
    }

    #[test]
    fn change_basis_preserves_validity() {
        let a = ut2();
        let p = Mat::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(1)],
            vec![int(1), int(0), int(1)],
        ]);
        let b = a.change_basis(&p);
        assert!(b.validate().is_ok());
        assert_eq!(b.center().dim(), 1);
    }

    #[test]
    fn opposite_reverses_products() {
        let a = ut2();
        let o = a.opposite();
        assert!(o.validate().is_ok());
        assert_eq!(o.basis_product(1, 0), a.basis_product(0, 1));
        assert!(o.basis_product(0, 1).is_empty());
    }

    #[test]
    fn trace_vector_matches_direct_traces() {
        let a = ut2();
        let tv = a.left_trace_vector();
        // tr(L_e11) = 2 (fixes e11 and e12), tr(L_e12) = 0, tr(L_e22) = 1
        assert_eq!(tv, vec![int(2), int(0), int(1)]);
    }
}
