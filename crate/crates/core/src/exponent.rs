//! The exponent invariant: maximal total dimension of a sequence of
//! distinct action-simple components linked through the radical by nonzero
//! products, plus checks of the two multiplicativity theorems built on it.

use crate::algebra::Algebra;
use crate::construct::{matrix_algebra, tensor_product, BuildError};
use crate::matrix::Reducer;
use crate::structure::{
    is_action_simple, structure_report, Simplicity, StructureError, StructureReport,
};
use crate::structured::{ActionSet, StructuredAlgebra};
use crate::subspace::Subspace;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ExponentError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("tensor factor is not central simple: {detail}")]
    NotCentralSimple { detail: String },
}

#[derive(Debug, Clone)]
pub struct ExponentReport {
    /// The exponent itself; 0 for nilpotent algebras.
    pub value: usize,
    pub radical_dim: usize,
    pub complement_dim: usize,
    /// Dimensions of the action-simple components, canonical order.
    pub component_dims: Vec<usize>,
    /// 1-based component indices of the lexicographically smallest
    /// maximizing sequence; empty when the exponent is 0.
    pub witness_sequence: Vec<usize>,
    /// A nonzero alternating product realizing the witness sequence:
    /// component element, radical element, component element, …
    pub witness_chain: Vec<String>,
}

/// Maximal sum of component dimensions over sequences of distinct
/// components whose alternating product with the radical is nonzero,
/// together with the lexicographically smallest maximizing sequence
/// (0-based indices).
///
/// Sequences are explored in lexicographic order with ascending component
/// indices, so the first strict improvement is automatically the smallest
/// witness; branches whose best possible total cannot beat the incumbent
/// are pruned.
pub fn admissible_max(
    a: &Algebra,
    components: &[Subspace],
    radical: &Subspace,
) -> (usize, Vec<usize>) {
    let k = components.len();
    if k == 0 {
        return (0, Vec::new());
    }
    let dims: Vec<usize> = components.iter().map(|c| c.dim()).collect();
    let total: usize = dims.iter().sum();

    struct Dfs<'a> {
        a: &'a Algebra,
        components: &'a [Subspace],
        radical: &'a Subspace,
        dims: &'a [usize],
        total: usize,
        best: usize,
        best_seq: Vec<usize>,
    }
    impl Dfs<'_> {
        fn go(&mut self, seq: &mut Vec<usize>, used: &mut Vec<bool>, v: &Subspace, sum: usize) {
            if sum > self.best {
                self.best = sum;
                self.best_seq = seq.clone();
            }
            let used_sum: usize = (0..used.len())
                .filter(|&i| used[i])
                .map(|i| self.dims[i])
                .sum();
            if sum + (self.total - used_sum) <= self.best {
                return; // even taking every unused component cannot help
            }
            let vj = self.a.subspace_product(v, self.radical);
            if vj.dim() == 0 {
                return;
            }
            for next in 0..used.len() {
                if used[next] {
                    continue;
                }
                let w = self.a.subspace_product(&vj, &self.components[next]);
                if w.dim() == 0 {
                    continue;
                }
                used[next] = true;
                seq.push(next);
                self.go(seq, used, &w, sum + self.dims[next]);
                seq.pop();
                used[next] = false;
            }
        }
    }
    let mut dfs = Dfs {
        a,
        components,
        radical,
        dims: &dims,
        total,
        best: 0,
        best_seq: Vec::new(),
    };
    let mut used = vec![false; k];
    for start in 0..k {
        used[start] = true;
        let mut seq = vec![start];
        let v = components[start].clone();
        dfs.go(&mut seq, &mut used, &v, dims[start]);
        used[start] = false;
    }
    (dfs.best, dfs.best_seq)
}

/// Replays a witness sequence and extracts one explicit nonzero chain
/// `b₁ · n₁ · b₂ · n₂ · … · b_s` with every factor a canonical basis vector
/// of its component (or of the radical), rendered in the algebra's labels.
pub fn witness_chain(
    a: &Algebra,
    components: &[Subspace],
    radical: &Subspace,
    seq: &[usize],
) -> Vec<String> {
    if seq.is_empty() {
        return Vec::new();
    }
    let d = a.dim();
    // spanning products of the prefix, each with the factors that built it
    let mut kept: Vec<(crate::sparse::SparseVec, Vec<String>)> = Vec::new();
    let mut red = Reducer::new(d);
    for b in components[seq[0]].basis() {
        if red.insert(b.clone()) {
            kept.push((b.clone(), vec![a.render_sparse(b)]));
        }
    }
    for &next in &seq[1..] {
        let mut new_kept: Vec<(crate::sparse::SparseVec, Vec<String>)> = Vec::new();
        red = Reducer::new(d);
        for (v, chain) in &kept {
            for n in radical.basis() {
                let vn = a.mul_sparse(v, n);
                if vn.is_empty() {
                    continue;
                }
                for b in components[next].basis() {
                    let w = a.mul_sparse(&vn, b);
                    if w.is_empty() {
                        continue;
                    }
                    if red.insert(w.clone()) {
                        let mut c = chain.clone();
                        c.push(a.render_sparse(n));
                        c.push(a.render_sparse(b));
                        new_kept.push((w, c));
                    }
                }
            }
        }
        kept = new_kept;
    }
    kept.into_iter()
        .next()
        .map(|(_, chain)| chain)
        .unwrap_or_default()
}

/// Full exponent pipeline for one algebra-with-structure.
pub fn pi_exponent(sa: &StructuredAlgebra) -> Result<ExponentReport, ExponentError> {
    let rep = structure_report(sa)?;
    Ok(exponent_from_structure(&sa.algebra, &rep))
}

pub fn exponent_from_structure(a: &Algebra, rep: &StructureReport) -> ExponentReport {
    let (value, seq0) = admissible_max(a, &rep.components, &rep.radical);
    let chain = witness_chain(a, &rep.components, &rep.radical, &seq0);
    ExponentReport {
        value,
        radical_dim: rep.radical.dim(),
        complement_dim: rep.complement.dim(),
        component_dims: rep.component_dims(),
        witness_sequence: seq0.iter().map(|i| i + 1).collect(),
        witness_chain: chain,
    }
}

/// Exponent of the Grassmann envelope at `k` generators — a thin
/// composition, exposed because the envelope is the standard probe for
/// Z/2-graded inputs.
pub fn envelope_exponent(
    sa: &StructuredAlgebra,
    k: usize,
) -> Result<ExponentReport, ExponentError> {
    let env = crate::construct::grassmann_envelope(sa, k)?;
    pi_exponent(&env)
}

#[derive(Debug, Clone)]
pub struct TheoremRow {
    pub n: usize,
    pub dim: usize,
    pub computed: Option<usize>,
    pub expected: usize,
    pub skipped: bool,
}

impl TheoremRow {
    pub fn holds(&self) -> bool {
        self.skipped || self.computed == Some(self.expected)
    }
}

/// Checks `exp(M_n(A)) = n² · exp(A)` for `n = 1 … n_max` by running the
/// full pipeline independently on every matrix extension.  Extensions above
/// `dim_cap` are reported as skipped instead of computed.
pub fn matrix_theorem_check(
    base: &StructuredAlgebra,
    n_max: usize,
    dim_cap: usize,
) -> Result<Vec<TheoremRow>, ExponentError> {
    let plain_base = StructuredAlgebra::plain(base.algebra.clone());
    let base_exp = pi_exponent(&plain_base)?.value;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let dim = base.dim() * n * n;
        let expected = n * n * base_exp;
        if dim > dim_cap {
            rows.push(TheoremRow {
                n,
                dim,
                computed: None,
                expected,
                skipped: true,
            });
            continue;
        }
        let ext = StructuredAlgebra::plain(matrix_algebra(&plain_base, n).algebra);
        let computed = pi_exponent(&ext)?.value;
        rows.push(TheoremRow {
            n,
            dim,
            computed: Some(computed),
            expected,
            skipped: false,
        });
    }
    Ok(rows)
}

/// Subspace fixed by the structure: everything for a plain algebra, the
/// degree-zero component for a grading, the symmetric elements for an
/// involution.
fn invariant_part(sa: &StructuredAlgebra) -> Subspace {
    use crate::structured::Structure;
    let d = sa.dim();
    match &sa.structure {
        Structure::Trivial => Subspace::full(d),
        Structure::Graded(g) => Subspace::from_sparse(
            d,
            g.component_coords(&g.group.zero())
                .into_iter()
                .map(crate::sparse::sv_unit),
        ),
        Structure::Involutive(inv) => {
            let mut m = inv.mat.clone();
            for i in 0..d {
                let t = &m[(i, i)] - num_traits::one::<crate::scalar::Scalar>();
                m[(i, i)] = t;
            }
            Subspace::from_dense(d, m.kernel())
        }
    }
}

#[derive(Debug, Clone)]
pub struct TensorTheoremReport {
    pub factor_exponent: usize,
    pub simple_dim: usize,
    pub product_exponent: usize,
}

impl TensorTheoremReport {
    pub fn holds(&self) -> bool {
        self.product_exponent == self.factor_exponent * self.simple_dim
    }
}

/// Checks `exp(A ⊗ S) = dim S · exp(A)` for a structured `A` and a
/// structured `S` that must be unital, certify as simple under its own
/// action operators, and have a one-dimensional invariant center (the
/// degree-zero part for a grading, the symmetric part for an involution).
pub fn tensor_theorem_check(
    a: &StructuredAlgebra,
    s: &StructuredAlgebra,
) -> Result<TensorTheoremReport, ExponentError> {
    if s.algebra.unit().is_none() {
        return Err(ExponentError::NotCentralSimple {
            detail: "tensor factor has no declared unit".into(),
        });
    }
    let center = s.algebra.center();
    let invariant = invariant_part(s);
    let inv_center_dim = center.intersection_dim(&invariant);
    if inv_center_dim != 1 {
        return Err(ExponentError::NotCentralSimple {
            detail: format!("invariant center has dimension {inv_center_dim}"),
        });
    }
    let acts = ActionSet::for_structure(s);
    match is_action_simple(&s.algebra, &acts) {
        Simplicity::Simple => {}
        Simplicity::SquareZero => {
            return Err(ExponentError::NotCentralSimple {
                detail: "all products vanish".into(),
            })
        }
        Simplicity::ProperIdeal(w) => {
            return Err(ExponentError::NotCentralSimple {
                detail: format!("proper stable ideal of dimension {}", w.dim()),
            })
        }
        Simplicity::Unknown => {
            return Err(ExponentError::NotCentralSimple {
                detail: "simplicity could not be certified".into(),
            })
        }
    }
    let factor_exponent = pi_exponent(a)?.value;
    let prod = tensor_product(a, s)?;
    let product_exponent = pi_exponent(&prod)?.value;
    Ok(TensorTheoremReport {
        factor_exponent,
        simple_dim: s.dim(),
        product_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        exchange_involution, field, full_matrix, full_matrix_with_involution, group_algebra,
        incidence, tensor_product, ut, with_grading, zero_algebra, MatrixInvolution,
    };
    use crate::structured::GroupSpec;

    #[test]
    fn exponents_of_the_standard_families() {
        assert_eq!(pi_exponent(&field()).unwrap().value, 1);
        assert_eq!(pi_exponent(&ut(2)).unwrap().value, 2);
        assert_eq!(pi_exponent(&ut(3)).unwrap().value, 3);
        assert_eq!(pi_exponent(&full_matrix(2)).unwrap().value, 4);
        assert_eq!(pi_exponent(&full_matrix(3)).unwrap().value, 9);
        assert_eq!(pi_exponent(&zero_algebra(3)).unwrap().value, 0);
    }

    #[test]
    fn ut2_witness() {
        let rep = pi_exponent(&ut(2)).unwrap();
        assert_eq!(rep.value, 2);
        assert_eq!(rep.witness_sequence, vec![1, 2]);
        assert_eq!(rep.witness_chain, vec!["e11", "e12", "e22"]);
    }

    #[test]
    fn tensor_square_of_ut2_has_exponent_three() {
        let t = tensor_product(
            &StructuredAlgebra::plain(ut(2).algebra),
            &StructuredAlgebra::plain(ut(2).algebra),
        )
        .unwrap();
        let rep = pi_exponent(&t).unwrap();
        assert_eq!(rep.value, 3);
        assert_eq!(rep.component_dims, vec![1, 1, 1, 1]);
        assert_eq!(rep.witness_sequence, vec![1, 2, 4]);
        assert_eq!(
            rep.witness_chain,
            vec![
                "e11⊗e11",
                "e11⊗e12",
                "e11⊗e22",
                "e12⊗e22",
                "e22⊗e22"
            ]
        );
    }

    #[test]
    fn incidence_diamond_matches_the_tensor_square() {
        let inc = incidence(&[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        let rep = pi_exponent(&inc).unwrap();
        assert_eq!(rep.value, 3);
        assert_eq!(rep.witness_sequence, vec![1, 2, 4]);
        // chain through the poset: e11 · e12 · e22 · e24 · e44
        assert_eq!(
            rep.witness_chain,
            vec!["e11", "e12", "e22", "e24", "e44"]
        );
    }

    #[test]
    fn matrix_theorem_on_small_bases() {
        for base in [field(), ut(2)] {
            let rows = matrix_theorem_check(&base, 2, 120).unwrap();
            for row in rows {
                assert!(row.holds(), "n = {} failed", row.n);
                assert!(!row.skipped);
            }
        }
        // the cap is honored
        let rows = matrix_theorem_check(&ut(2), 3, 12).unwrap();
        assert!(rows[2].skipped);
        assert!(rows[2].holds());
    }

    #[test]
    fn graded_exponent_of_the_group_algebra() {
        let g = group_algebra(vec![2]).unwrap();
        let rep = pi_exponent(&g).unwrap();
        // one merged component of dimension 2
        assert_eq!(rep.component_dims, vec![2]);
        assert_eq!(rep.value, 2);
    }

    #[test]
    fn involutive_exponent_of_the_exchange_algebra() {
        let e = exchange_involution(&ut(2)).unwrap();
        let rep = pi_exponent(&e).unwrap();
        assert_eq!(rep.component_dims, vec![2, 2]);
        assert_eq!(rep.value, 4);
    }

    #[test]
    fn tensor_theorem_with_a_graded_simple_factor() {
        // A = ut(2) graded by parity of the strictly-upper part,
        // S = the group algebra of Z/2 with its natural grading
        let a = with_grading(
            &ut(2),
            GroupSpec::z2(),
            vec![vec![0], vec![1], vec![0]],
        )
        .unwrap();
        let s = group_algebra(vec![2]).unwrap();
        let rep = tensor_theorem_check(&a, &s).unwrap();
        assert_eq!(rep.factor_exponent, 2);
        assert_eq!(rep.simple_dim, 2);
        assert_eq!(rep.product_exponent, 4);
        assert!(rep.holds());
    }

    #[test]
    fn tensor_theorem_with_an_involutive_simple_factor() {
        let a = exchange_involution(&ut(2)).unwrap();
        let s = full_matrix_with_involution(2, MatrixInvolution::Transpose).unwrap();
        let rep = tensor_theorem_check(&a, &s).unwrap();
        assert_eq!(rep.factor_exponent, 4);
        assert_eq!(rep.simple_dim, 4);
        assert_eq!(rep.product_exponent, 16);
        assert!(rep.holds());
    }

    #[test]
    fn tensor_theorem_rejects_non_simple_factors() {
        let a = StructuredAlgebra::plain(ut(2).algebra);
        // ut(2) is not simple
        assert!(matches!(
            tensor_theorem_check(&a, &ut(2)),
            Err(ExponentError::NotCentralSimple { .. })
        ));
        // Q[Z2] ungraded is simple-free too (two components)
        let plain_group = StructuredAlgebra::plain(group_algebra(vec![2]).unwrap().algebra);
        assert!(matches!(
            tensor_theorem_check(&a, &plain_group),
            Err(ExponentError::NotCentralSimple { .. })
        ));
    }

    #[test]
    fn envelope_exponent_of_a_graded_triangular() {
        let a = with_grading(
            &ut(2),
            GroupSpec::z2(),
            vec![vec![0], vec![1], vec![0]],
        )
        .unwrap();
        let rep = envelope_exponent(&a, 2).unwrap();
        assert!(rep.value >= 2);
    }
}
