//! Shared fixtures for integration tests: a deterministic corpus of small
//! algebras, random basis changes, and a brute-force admissible-sequence
//! oracle to pin the pruned search against.

use piexp_core::construct::{
    direct_sum, exchange_involution, field, full_matrix, grassmann_envelope,
    grassmann_truncated, group_algebra, incidence, matrix_algebra, tensor_product, ut,
    ut_with_reflection, with_grading, zero_algebra,
};
use piexp_core::matrix::Mat;
use piexp_core::scalar::int;
use piexp_core::structure::{radical, semisimple_complement};
use piexp_core::structured::{GroupSpec, StructuredAlgebra};
use piexp_core::{Algebra, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic corpus, largest dimension last.  Every entry validates.
pub fn corpus(max_dim: usize) -> Vec<(String, StructuredAlgebra)> {
    let graded_ut2 = || {
        with_grading(&ut(2), GroupSpec::z2(), vec![vec![0], vec![1], vec![0]])
            .expect("the triangular grading is consistent")
    };
    let mut pool: Vec<(String, StructuredAlgebra)> = vec![
        ("field".into(), field()),
        ("zero(2)".into(), zero_algebra(2)),
        ("zero(3)".into(), zero_algebra(3)),
        ("ut(2)".into(), ut(2)),
        ("ut(3)".into(), ut(3)),
        ("ut(4)".into(), ut(4)),
        ("full_matrix(2)".into(), full_matrix(2)),
        ("full_matrix(3)".into(), full_matrix(3)),
        ("grassmann(2)".into(), grassmann_truncated(2)),
        ("grassmann(3)".into(), grassmann_truncated(3)),
        (
            "group_algebra(z2)".into(),
            group_algebra(vec![2]).expect("z2 is elementary abelian"),
        ),
        (
            "group_algebra(z2xz2)".into(),
            group_algebra(vec![2, 2]).expect("z2xz2 is elementary abelian"),
        ),
        (
            "incidence(diamond)".into(),
            incidence(&[(1, 2), (1, 3), (2, 4), (3, 4)]).expect("the diamond is a poset"),
        ),
        (
            "incidence(chain3)".into(),
            incidence(&[(1, 2), (2, 3)]).expect("a chain is a poset"),
        ),
        ("graded ut(2)".into(), graded_ut2()),
        (
            "reflected ut(3)".into(),
            ut_with_reflection(3).expect("the reflection fixes ut(3)"),
        ),
        (
            "exchange(ut(2))".into(),
            exchange_involution(&ut(2)).expect("ut(2) is plain"),
        ),
        (
            "ut(2) (+) field".into(),
            direct_sum(&ut(2), &field()).expect("plain summands agree"),
        ),
        (
            "full_matrix(2) (+) full_matrix(2)".into(),
            direct_sum(&full_matrix(2), &full_matrix(2)).expect("plain summands agree"),
        ),
        (
            "ut(2) (x) ut(2)".into(),
            tensor_product(&ut(2), &ut(2)).expect("plain factors agree"),
        ),
        (
            "matrix_algebra(ut(2), 2)".into(),
            matrix_algebra(&ut(2), 2),
        ),
        (
            "envelope(graded ut(2), 2)".into(),
            grassmann_envelope(&graded_ut2(), 2).expect("the base is z2-graded"),
        ),
    ];
    pool.retain(|(_, sa)| sa.dim() <= max_dim);
    pool.sort_by_key(|(_, sa)| sa.dim());
    pool
}

/// Random invertible rational matrix with small integer entries.
pub fn random_basis_matrix(dim: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut p = Mat::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                p[(r, c)] = int(rng.gen_range(-2i64..=2));
            }
            // bias towards invertibility without losing randomness
            if p[(r, r)].clone() == int(0) {
                p[(r, r)] = int(1);
            }
        }
        if p.inverse().is_some() {
            return p;
        }
    }
}

/// The same algebra in a scrambled basis, structure dropped.
pub fn random_conjugate(a: &Algebra, seed: u64) -> Algebra {
    a.change_basis(&random_basis_matrix(a.dim(), seed))
}

/// Brute force over all ordered sequences of distinct component indices:
/// the maximal total dimension with B_{i1}·J·B_{i2}·J⋯B_{is} nonzero.
pub fn exhaustive_admissible(
    a: &Algebra,
    components: &[Subspace],
    radical: &Subspace,
) -> usize {
    fn extend(
        a: &Algebra,
        components: &[Subspace],
        radical: &Subspace,
        used: &mut Vec<usize>,
        value: &mut usize,
    ) {
        for i in 0..components.len() {
            if used.contains(&i) {
                continue;
            }
            used.push(i);
            if sequence_alive(a, components, radical, used) {
                let total: usize = used.iter().map(|&j| components[j].dim()).sum();
                *value = (*value).max(total);
                extend(a, components, radical, used, value);
            }
            used.pop();
        }
    }
    let mut best = 0usize;
    extend(a, components, radical, &mut Vec::new(), &mut best);
    best
}

fn sequence_alive(
    a: &Algebra,
    components: &[Subspace],
    radical: &Subspace,
    seq: &[usize],
) -> bool {
    let mut v = components[seq[0]].clone();
    for &i in &seq[1..] {
        v = a.subspace_product(&a.subspace_product(&v, radical), &components[i]);
        if v.is_zero() {
            return false;
        }
    }
    !v.is_zero()
}

/// Smallest k with J^k = 0, or None if J is not nilpotent within dim+1 steps.
pub fn nilpotency_index(a: &Algebra, j: &Subspace) -> Option<usize> {
    let mut power = j.clone();
    for k in 1..=a.dim() + 1 {
        if power.is_zero() {
            return Some(k);
        }
        power = a.subspace_product(&power, j);
    }
    None
}

pub fn is_ideal(a: &Algebra, j: &Subspace) -> bool {
    let full = Subspace::full(a.dim());
    j.contains_subspace(&a.subspace_product(&full, j))
        && j.contains_subspace(&a.subspace_product(j, &full))
}

/// Nilpotent, two-sided ideal, semisimple quotient.
pub fn radical_postconditions(name: &str, a: &Algebra) {
    let j = radical(a);
    assert!(
        nilpotency_index(a, &j).is_some(),
        "{name}: radical must be nilpotent"
    );
    assert!(is_ideal(a, &j), "{name}: radical must be a two-sided ideal");
    if j.dim() < a.dim() {
        let (quot, _) = a.quotient(&j);
        assert_eq!(
            radical(&quot).dim(),
            0,
            "{name}: quotient by the radical must be semisimple"
        );
    }
}

/// Complement dimension, trivial intersection, multiplicative closure.
pub fn complement_postconditions(name: &str, a: &Algebra) {
    let j = radical(a);
    let s = match semisimple_complement(a, &j) {
        Ok(s) => s,
        Err(e) => panic!("{name}: complement failed: {e}"),
    };
    assert_eq!(s.dim() + j.dim(), a.dim(), "{name}: dims must add up");
    assert_eq!(s.intersection_dim(&j), 0, "{name}: complement meets radical");
    assert!(
        s.contains_subspace(&a.subspace_product(&s, &s)),
        "{name}: complement must be closed under multiplication"
    );
}
