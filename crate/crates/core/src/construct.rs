//! Standard algebra families and the combinators that build new algebras
//! from old ones.
//!
//! Basis orderings are fixed so that independently built presentations of
//! the same algebra agree cell for cell: matrix positions run row-major,
//! Grassmann words are sorted lexicographically, tensor and matrix-algebra
//! bases nest as `(outer, inner)` with the outer index major.

use crate::algebra::{Algebra, TableError};
use crate::matrix::Mat;
use crate::scalar::{int, Scalar};
use crate::sparse::{sv_unit, SparseVec};
use crate::structured::{
    Grading, GroupElt, GroupSpec, Involution, Structure, StructureDefect, StructuredAlgebra,
};
use num_traits::{One, Zero};

#[derive(Debug, Clone, thiserror::Error)]
pub enum BuildError {
    #[error("poset has a cycle: {0} <= {1} and {1} <= {0} with {0} != {1}")]
    PosetCycle(u32, u32),
    #[error("group algebra supports only invariant factors equal to 2 (idempotents stay rational); got {0:?}")]
    UnsupportedGroup(Vec<u32>),
    #[error("symplectic involution needs an even matrix size, got {0}")]
    OddSymplectic(usize),
    #[error("cannot combine structures: {0}")]
    IncompatibleStructures(String),
    #[error("Grassmann envelope requires a Z/2-graded input")]
    NotZ2Graded,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Structure(#[from] StructureDefect),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Upper triangular `n x n` matrices.  Basis `e_{ij}` for `i <= j`,
/// ordered row-major.
pub fn ut(n: usize) -> StructuredAlgebra {
    assert!(n > 0, "matrix size must be positive");
    let mut pos = Vec::new(); // (i, j) 0-based
    for i in 0..n {
        for j in i..n {
            pos.push((i, j));
        }
    }
    let index = |i: usize, j: usize| pos.iter().position(|&p| p == (i, j)).unwrap();
    let labels = pos.iter().map(|&(i, j)| mat_label("e", i, j)).collect();
    let dim = pos.len();
    let alg = Algebra::from_products(
        dim,
        labels,
        |a, b| {
            let (i, j) = pos[a];
            let (k, l) = pos[b];
            if j == k {
                sv_unit(index(i, l))
            } else {
                Vec::new()
            }
        },
        None,
    );
    let mut unit = vec![Scalar::zero(); dim];
    for i in 0..n {
        unit[index(i, i)] = Scalar::one();
    }
    StructuredAlgebra::plain(with_unit(alg, unit))
}

/// Full `n x n` matrix algebra; basis `E_{ij}` row-major.
pub fn full_matrix(n: usize) -> StructuredAlgebra {
    assert!(n > 0, "matrix size must be positive");
    let labels = (0..n)
        .flat_map(|i| (0..n).map(move |j| mat_label("E", i, j)))
        .collect();
    let alg = Algebra::from_products(
        n * n,
        labels,
        |a, b| {
            let (i, j) = (a / n, a % n);
            let (k, l) = (b / n, b % n);
            if j == k {
                sv_unit(i * n + l)
            } else {
                Vec::new()
            }
        },
        None,
    );
    let mut unit = vec![Scalar::zero(); n * n];
    for i in 0..n {
        unit[i * n + i] = Scalar::one();
    }
    StructuredAlgebra::plain(with_unit(alg, unit))
}

/// Full matrix algebra with the elementary grading `deg E_{ij} = -g_i + g_j`
/// induced by a tuple `(g_1, …, g_n)` of group elements.
pub fn full_matrix_graded(
    n: usize,
    group: GroupSpec,
    tuple: Vec<GroupElt>,
) -> Result<StructuredAlgebra, BuildError> {
    if tuple.len() != n {
        return Err(BuildError::BadParameter(format!(
            "elementary grading tuple has length {}, expected {n}",
            tuple.len()
        )));
    }
    for g in &tuple {
        if !group.contains(g) {
            return Err(StructureDefect::BadElement(g.clone()).into());
        }
    }
    let base = full_matrix(n);
    let degrees = (0..n)
        .flat_map(|i| {
            let group = &group;
            let tuple = &tuple;
            (0..n).map(move |j| group.add(&group.neg(&tuple[i]), &tuple[j]))
        })
        .collect();
    let grading = Grading::new(group, degrees)?;
    grading.check(&base.algebra)?;
    Ok(StructuredAlgebra {
        algebra: base.algebra,
        structure: Structure::Graded(grading),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixInvolution {
    Transpose,
    Symplectic,
}

/// Full matrix algebra with the transpose or symplectic involution.
pub fn full_matrix_with_involution(
    n: usize,
    kind: MatrixInvolution,
) -> Result<StructuredAlgebra, BuildError> {
    let base = full_matrix(n);
    let d = n * n;
    let mat = match kind {
        MatrixInvolution::Transpose => {
            let mut m = Mat::zeros(d, d);
            for i in 0..n {
                for j in 0..n {
                    m[(j * n + i, i * n + j)] = Scalar::one();
                }
            }
            m
        }
        MatrixInvolution::Symplectic => {
            if n % 2 != 0 {
                return Err(BuildError::OddSymplectic(n));
            }
            let half = n / 2;
            // s = [[0, I], [-I, 0]]; a* = s a^T s^{-1}
            let mut s = Mat::zeros(n, n);
            for i in 0..half {
                s[(i, half + i)] = Scalar::one();
                s[(half + i, i)] = -Scalar::one();
            }
            let s_inv = s.inverse().expect("symplectic form is invertible");
            let mut m = Mat::zeros(d, d);
            for i in 0..n {
                for j in 0..n {
                    // image of E_ij is s E_ji s^{-1}
                    let mut e = Mat::zeros(n, n);
                    e[(j, i)] = Scalar::one();
                    let img = s.mul(&e).mul(&s_inv);
                    for r in 0..n {
                        for c in 0..n {
                            if !img[(r, c)].is_zero() {
                                m[(r * n + c, i * n + j)] = img[(r, c)].clone();
                            }
                        }
                    }
                }
            }
            m
        }
    };
    let inv = Involution::new(mat);
    inv.check(&base.algebra)?;
    Ok(StructuredAlgebra {
        algebra: base.algebra,
        structure: Structure::Involutive(inv),
    })
}

/// Upper triangular matrices with the reflection along the antidiagonal,
/// `e_{ij} -> e_{n+1-j, n+1-i}` — the standard involution of `ut(n)`.
pub fn ut_with_reflection(n: usize) -> Result<StructuredAlgebra, BuildError> {
    let base = ut(n);
    let d = base.dim();
    let mut pos = Vec::new();
    for i in 0..n {
        for j in i..n {
            pos.push((i, j));
        }
    }
    let index = |i: usize, j: usize| pos.iter().position(|&p| p == (i, j)).unwrap();
    let mut m = Mat::zeros(d, d);
    for (a, &(i, j)) in pos.iter().enumerate() {
        m[(index(n - 1 - j, n - 1 - i), a)] = Scalar::one();
    }
    let inv = Involution::new(m);
    inv.check(&base.algebra)?;
    Ok(StructuredAlgebra {
        algebra: base.algebra,
        structure: Structure::Involutive(inv),
    })
}

/// The `d`-dimensional algebra with all products zero.
pub fn zero_algebra(d: usize) -> StructuredAlgebra {
    assert!(d > 0, "dimension must be positive");
    let labels = (1..=d).map(|i| format!("z{i}")).collect();
    StructuredAlgebra::plain(Algebra::from_products(d, labels, |_, _| Vec::new(), None))
}

/// The ground field as a one-dimensional algebra.
pub fn field() -> StructuredAlgebra {
    let alg = Algebra::from_products(1, vec!["1".into()], |_, _| sv_unit(0), None);
    StructuredAlgebra::plain(with_unit(alg, vec![Scalar::one()]))
}

/// Group algebra of `(Z/2)^k`, graded by the group itself.  Only invariant
/// factors equal to 2 are accepted: those keep the primitive idempotents
/// rational.
pub fn group_algebra(factors: Vec<u32>) -> Result<StructuredAlgebra, BuildError> {
    if factors.is_empty() || factors.iter().any(|&f| f != 2) {
        return Err(BuildError::UnsupportedGroup(factors));
    }
    let group = GroupSpec::new(factors)?;
    let elements = group.elements();
    let dim = elements.len();
    let index = |e: &GroupElt| elements.iter().position(|x| x == e).unwrap();
    let labels = elements
        .iter()
        .map(|e| {
            let gens: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(i, _)| format!("c{}", i + 1))
                .collect();
            if gens.is_empty() {
                "1".to_string()
            } else {
                gens.concat()
            }
        })
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |a, b| sv_unit(index(&group.add(&elements[a], &elements[b]))),
        None,
    );
    let mut unit = vec![Scalar::zero(); dim];
    unit[index(&group.zero())] = Scalar::one();
    let grading = Grading::new(group, elements)?;
    Ok(StructuredAlgebra {
        algebra: with_unit(alg, unit),
        structure: Structure::Graded(grading),
    })
}

/// Incidence algebra of a finite poset.
///
/// `relations` lists pairs `x <= y` on positive integer points; the
/// reflexive-transitive closure is taken automatically and a cycle through
/// distinct points is an error.  Basis `e_{xy}` over the closed relation,
/// pairs ordered lexicographically; `e_{xy} e_{zw} = δ_{yz} e_{xw}`.
pub fn incidence(relations: &[(u32, u32)]) -> Result<StructuredAlgebra, BuildError> {
    let mut points: Vec<u32> = relations
        .iter()
        .flat_map(|&(x, y)| [x, y])
        .collect();
    points.sort_unstable();
    points.dedup();
    if points.is_empty() {
        return Err(BuildError::BadParameter("poset has no points".into()));
    }
    let n = points.len();
    let pidx = |p: u32| points.binary_search(&p).unwrap();
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[i][i] = true;
    }
    for &(x, y) in relations {
        le[pidx(x)][pidx(y)] = true;
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if le[i][j] && le[j][i] {
                return Err(BuildError::PosetCycle(points[i], points[j]));
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                pairs.push((i, j));
            }
        }
    }
    let dim = pairs.len();
    let pair_index = |x: usize, y: usize| pairs.iter().position(|&p| p == (x, y)).unwrap();
    let labels = pairs
        .iter()
        .map(|&(x, y)| {
            let (px, py) = (points[x], points[y]);
            if px < 10 && py < 10 {
                format!("e{px}{py}")
            } else {
                format!("e{px}_{py}")
            }
        })
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |a, b| {
            let (x, y) = pairs[a];
            let (z, w) = pairs[b];
            if y == z {
                sv_unit(pair_index(x, w))
            } else {
                Vec::new()
            }
        },
        None,
    );
    let mut unit = vec![Scalar::zero(); dim];
    for i in 0..n {
        unit[pair_index(i, i)] = Scalar::one();
    }
    Ok(StructuredAlgebra::plain(with_unit(alg, unit)))
}

/// Grassmann (exterior) algebra on `k` generators, truncated to its natural
/// `2^k`-dimensional span.  Basis words are subsets of the generators in
/// lexicographic order; the word-length parity gives the Z/2-grading.
pub fn grassmann_truncated(k: usize) -> StructuredAlgebra {
    let mut words: Vec<Vec<u32>> = (0u32..(1 << k))
        .map(|mask| (0..k as u32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
        .collect();
    words.sort();
    let dim = words.len();
    let widx = |w: &Vec<u32>| words.binary_search(w).unwrap();
    let labels = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|g| format!("g{g}")).collect::<Vec<_>>().concat()
            }
        })
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |a, b| {
            let (s, t) = (&words[a], &words[b]);
            if s.iter().any(|x| t.contains(x)) {
                return Vec::new();
            }
            // sign: parity of the number of pairs (x in s, y in t) with x > y
            let inversions = s
                .iter()
                .map(|x| t.iter().filter(|y| *y < x).count())
                .sum::<usize>();
            let mut merged: Vec<u32> = s.iter().chain(t.iter()).copied().collect();
            merged.sort_unstable();
            let c = if inversions % 2 == 0 { int(1) } else { int(-1) };
            vec![(widx(&merged), c)]
        },
        None,
    );
    let mut unit = vec![Scalar::zero(); dim];
    unit[widx(&Vec::new())] = Scalar::one();
    let degrees = words.iter().map(|w| vec![(w.len() % 2) as u32]).collect();
    let grading = Grading::new(GroupSpec::z2(), degrees).unwrap();
    StructuredAlgebra {
        algebra: with_unit(alg, unit),
        structure: Structure::Graded(grading),
    }
}

/// `n x n` matrices over a base algebra.  Basis `(E_{pq}, a)` with the
/// matrix position major (row-major), inheriting the base grading
/// componentwise or the base involution composed with transpose.
pub fn matrix_algebra(base: &StructuredAlgebra, n: usize) -> StructuredAlgebra {
    assert!(n > 0, "matrix size must be positive");
    let a = &base.algebra;
    let d = a.dim();
    let dim = n * n * d;
    let labels = (0..n)
        .flat_map(|p| {
            (0..n).flat_map(move |q| {
                (0..d).map(move |t| (p, q, t))
            })
        })
        .map(|(p, q, t)| format!("{}⊗{}", mat_label("E", p, q), a.label(t)))
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |x, y| {
            let (pq, s) = (x / d, x % d);
            let (rs, t) = (y / d, y % d);
            let (p, q) = (pq / n, pq % n);
            let (r, w) = (rs / n, rs % n);
            if q != r {
                return Vec::new();
            }
            let cell = a.basis_product(s, t);
            cell.iter()
                .map(|(k, c)| ((p * n + w) * d + k, c.clone()))
                .collect()
        },
        None,
    );
    let unit = a.unit().map(|u| {
        let mut v = vec![Scalar::zero(); dim];
        for p in 0..n {
            for (t, c) in u.iter().enumerate() {
                if !c.is_zero() {
                    v[(p * n + p) * d + t] = c.clone();
                }
            }
        }
        v
    });
    let alg = match unit {
        Some(u) => with_unit(alg, u),
        None => alg,
    };
    let structure = match &base.structure {
        Structure::Trivial => Structure::Trivial,
        Structure::Graded(g) => {
            let degrees = (0..n * n)
                .flat_map(|_| g.degrees.iter().cloned())
                .collect();
            Structure::Graded(Grading::new(g.group.clone(), degrees).unwrap())
        }
        Structure::Involutive(s) => {
            let mut m = Mat::zeros(dim, dim);
            for p in 0..n {
                for q in 0..n {
                    for t in 0..d {
                        // (E_pq ⊗ a)* = E_qp ⊗ a*
                        for r in 0..d {
                            let c = &s.mat[(r, t)];
                            if !c.is_zero() {
                                m[((q * n + p) * d + r, (p * n + q) * d + t)] = c.clone();
                            }
                        }
                    }
                }
            }
            Structure::Involutive(Involution::new(m))
        }
    };
    StructuredAlgebra { algebra: alg, structure }
}

/// Tensor product, basis `(a, b)` with the left index major.
///
/// Gradings combine over the direct product group (a one-sided grading
/// carries over unchanged); involutions combine factorwise.  A grading on
/// one factor cannot be combined with an involution on the other.
pub fn tensor_product(
    left: &StructuredAlgebra,
    right: &StructuredAlgebra,
) -> Result<StructuredAlgebra, BuildError> {
    let (a, b) = (&left.algebra, &right.algebra);
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let labels = (0..da)
        .flat_map(|i| (0..db).map(move |j| (i, j)))
        .map(|(i, j)| format!("{}⊗{}", a.label(i), b.label(j)))
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |x, y| {
            let (i, j) = (x / db, x % db);
            let (k, l) = (y / db, y % db);
            let ca = a.basis_product(i, k);
            if ca.is_empty() {
                return Vec::new();
            }
            let cb = b.basis_product(j, l);
            let mut out = SparseVec::with_capacity(ca.len() * cb.len());
            for (s, cs) in ca {
                for (t, ct) in cb {
                    out.push((s * db + t, cs * ct));
                }
            }
            out.sort_by_key(|(k, _)| *k);
            out
        },
        None,
    );
    let unit = match (a.unit(), b.unit()) {
        (Some(ua), Some(ub)) => {
            let mut v = vec![Scalar::zero(); dim];
            for (i, ci) in ua.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                for (j, cj) in ub.iter().enumerate() {
                    if !cj.is_zero() {
                        v[i * db + j] = ci * cj;
                    }
                }
            }
            Some(v)
        }
        _ => None,
    };
    let alg = match unit {
        Some(u) => with_unit(alg, u),
        None => alg,
    };
    let structure = match (&left.structure, &right.structure) {
        (Structure::Trivial, Structure::Trivial) => Structure::Trivial,
        (Structure::Graded(g), Structure::Graded(h)) => {
            let group = g.group.direct_product(&h.group);
            let degrees = (0..da)
                .flat_map(|i| {
                    let gi = &g.degrees[i];
                    (0..db).map(move |j| {
                        gi.iter().chain(h.degrees[j].iter()).copied().collect()
                    })
                })
                .collect();
            Structure::Graded(Grading::new(group, degrees)?)
        }
        (Structure::Graded(g), Structure::Trivial) => {
            let degrees = (0..da)
                .flat_map(|i| (0..db).map(move |_| g.degrees[i].clone()))
                .collect();
            Structure::Graded(Grading::new(g.group.clone(), degrees)?)
        }
        (Structure::Trivial, Structure::Graded(h)) => {
            let degrees = (0..da)
                .flat_map(|_| h.degrees.iter().cloned())
                .collect();
            Structure::Graded(Grading::new(h.group.clone(), degrees)?)
        }
        (Structure::Involutive(s), Structure::Involutive(t)) => {
            let mut m = Mat::zeros(dim, dim);
            for i in 0..da {
                for j in 0..db {
                    for r in 0..da {
                        let cs = &s.mat[(r, i)];
                        if cs.is_zero() {
                            continue;
                        }
                        for w in 0..db {
                            let ct = &t.mat[(w, j)];
                            if !ct.is_zero() {
                                m[(r * db + w, i * db + j)] = cs * ct;
                            }
                        }
                    }
                }
            }
            Structure::Involutive(Involution::new(m))
        }
        (x, y) => {
            return Err(BuildError::IncompatibleStructures(format!(
                "tensor factors carry {} and {}",
                x.kind_name(),
                y.kind_name()
            )))
        }
    };
    Ok(StructuredAlgebra { algebra: alg, structure })
}

/// Block-diagonal direct sum; left summand first.  Labels are prefixed
/// `L.` and `R.`.
pub fn direct_sum(
    left: &StructuredAlgebra,
    right: &StructuredAlgebra,
) -> Result<StructuredAlgebra, BuildError> {
    let (a, b) = (&left.algebra, &right.algebra);
    let (da, db) = (a.dim(), b.dim());
    let dim = da + db;
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("L.{l}"))
        .chain(b.labels().iter().map(|l| format!("R.{l}")))
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |x, y| {
            if x < da && y < da {
                a.basis_product(x, y).clone()
            } else if x >= da && y >= da {
                b.basis_product(x - da, y - da)
                    .iter()
                    .map(|(k, c)| (k + da, c.clone()))
                    .collect()
            } else {
                Vec::new()
            }
        },
        None,
    );
    let unit = match (a.unit(), b.unit()) {
        (Some(ua), Some(ub)) => {
            let mut v = ua.clone();
            v.extend(ub.iter().cloned());
            Some(v)
        }
        _ => None,
    };
    let alg = match unit {
        Some(u) => with_unit(alg, u),
        None => alg,
    };
    let structure = match (&left.structure, &right.structure) {
        (Structure::Trivial, Structure::Trivial) => Structure::Trivial,
        (Structure::Graded(g), Structure::Graded(h)) => {
            if g.group != h.group {
                return Err(BuildError::IncompatibleStructures(
                    "direct summands graded by different groups".into(),
                ));
            }
            let degrees = g.degrees.iter().chain(h.degrees.iter()).cloned().collect();
            Structure::Graded(Grading::new(g.group.clone(), degrees)?)
        }
        (Structure::Involutive(s), Structure::Involutive(t)) => {
            let mut m = Mat::zeros(dim, dim);
            for i in 0..da {
                for j in 0..da {
                    m[(i, j)] = s.mat[(i, j)].clone();
                }
            }
            for i in 0..db {
                for j in 0..db {
                    m[(da + i, da + j)] = t.mat[(i, j)].clone();
                }
            }
            Structure::Involutive(Involution::new(m))
        }
        (x, y) => {
            return Err(BuildError::IncompatibleStructures(format!(
                "direct summands carry {} and {}",
                x.kind_name(),
                y.kind_name()
            )))
        }
    };
    Ok(StructuredAlgebra { algebra: alg, structure })
}

/// `A ⊕ A^op` with the exchange involution `(x, y)* = (y, x)`.
pub fn exchange_involution(base: &StructuredAlgebra) -> Result<StructuredAlgebra, BuildError> {
    if !matches!(base.structure, Structure::Trivial) {
        return Err(BuildError::IncompatibleStructures(
            "exchange involution starts from an unstructured algebra".into(),
        ));
    }
    let op = StructuredAlgebra::plain(base.algebra.opposite());
    let sum = direct_sum(base, &op)?;
    let d = base.algebra.dim();
    let mut m = Mat::zeros(2 * d, 2 * d);
    for i in 0..d {
        m[(d + i, i)] = Scalar::one();
        m[(i, d + i)] = Scalar::one();
    }
    let inv = Involution::new(m);
    inv.check(&sum.algebra)?;
    Ok(StructuredAlgebra {
        algebra: sum.algebra,
        structure: Structure::Involutive(inv),
    })
}

/// Grassmann envelope of a Z/2-graded algebra: the span of
/// `B_0 ⊗ (even words)` and `B_1 ⊗ (odd words)` inside `B ⊗ G_k`,
/// presented on its own basis of matching-parity pairs `(b, word)` ordered
/// by `(base index, word)`.
pub fn grassmann_envelope(
    base: &StructuredAlgebra,
    k: usize,
) -> Result<StructuredAlgebra, BuildError> {
    let grading = match &base.structure {
        Structure::Graded(g) if g.group == GroupSpec::z2() => g.clone(),
        _ => return Err(BuildError::NotZ2Graded),
    };
    let g = grassmann_truncated(k);
    let gk = &g.algebra;
    let gdeg = match &g.structure {
        Structure::Graded(gr) => gr.degrees.clone(),
        _ => unreachable!(),
    };
    let b = &base.algebra;
    let mut pairs = Vec::new();
    for i in 0..b.dim() {
        for w in 0..gk.dim() {
            if grading.degrees[i] == gdeg[w] {
                pairs.push((i, w));
            }
        }
    }
    if pairs.is_empty() {
        return Err(BuildError::BadParameter(
            "Grassmann envelope is zero-dimensional".into(),
        ));
    }
    let dim = pairs.len();
    let pidx = |i: usize, w: usize| pairs.binary_search(&(i, w)).unwrap();
    let labels = pairs
        .iter()
        .map(|&(i, w)| format!("{}⊗{}", b.label(i), gk.label(w)))
        .collect();
    let alg = Algebra::from_products(
        dim,
        labels,
        |x, y| {
            let (i, w) = pairs[x];
            let (j, v) = pairs[y];
            let cw = gk.basis_product(w, v);
            if cw.is_empty() {
                return Vec::new();
            }
            debug_assert_eq!(cw.len(), 1);
            let (word, sign) = (cw[0].0, cw[0].1.clone());
            b.basis_product(i, j)
                .iter()
                .map(|(t, c)| (pidx(*t, word), c * &sign))
                .collect::<SparseVec>()
        },
        None,
    );
    // products of matching-parity pairs keep matching parity, so the pair
    // index above is always defined; sort the output cells
    let unit = b.unit().and_then(|u| {
        let empty_word = 0usize; // word "1" sorts first
        let mut v = vec![Scalar::zero(); dim];
        for (i, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if grading.degrees[i] != vec![0] {
                return None; // unit not concentrated in degree zero
            }
            v[pidx(i, empty_word)] = c.clone();
        }
        Some(v)
    });
    let alg = match unit {
        Some(u) => with_unit(alg, u),
        None => alg,
    };
    let degrees = pairs.iter().map(|&(i, _)| grading.degrees[i].clone()).collect();
    Ok(StructuredAlgebra {
        algebra: alg,
        structure: Structure::Graded(Grading::new(GroupSpec::z2(), degrees)?),
    })
}

/// Attaches a grading to an unstructured algebra, checking it.
pub fn with_grading(
    base: &StructuredAlgebra,
    group: GroupSpec,
    degrees: Vec<GroupElt>,
) -> Result<StructuredAlgebra, BuildError> {
    if !matches!(base.structure, Structure::Trivial) {
        return Err(BuildError::IncompatibleStructures(
            "algebra already carries a structure".into(),
        ));
    }
    let grading = Grading::new(group, degrees)?;
    grading.check(&base.algebra)?;
    Ok(StructuredAlgebra {
        algebra: base.algebra.clone(),
        structure: Structure::Graded(grading),
    })
}

fn with_unit(alg: Algebra, unit: Vec<Scalar>) -> Algebra {
    let dim = alg.dim();
    let labels = alg.labels().to_vec();
    let entries: Vec<(usize, usize, usize, Scalar)> = alg
        .entries()
        .map(|(i, j, k, c)| (i, j, k, c.clone()))
        .collect();
    Algebra::new(dim, labels, entries, Some(unit)).expect("rebuilding a valid table")
}

fn mat_label(prefix: &str, i: usize, j: usize) -> String {
    if i < 9 && j < 9 {
        format!("{prefix}{}{}", i + 1, j + 1)
    } else {
        format!("{prefix}{}_{}", i + 1, j + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(sa: &StructuredAlgebra) {
        if let Err(e) = sa.validate() {
            panic!("construction failed validation: {e}");
        }
    }

    #[test]
    fn families_validate() {
        assert_valid(&ut(1));
        assert_valid(&ut(2));
        assert_valid(&ut(3));
        assert_valid(&full_matrix(2));
        assert_valid(&full_matrix(3));
        assert_valid(&zero_algebra(3));
        assert_valid(&field());
        assert_valid(&group_algebra(vec![2]).unwrap());
        assert_valid(&group_algebra(vec![2, 2]).unwrap());
        assert_valid(&grassmann_truncated(3));
        assert_valid(&ut_with_reflection(2).unwrap());
        assert_valid(&ut_with_reflection(3).unwrap());
        assert_valid(&full_matrix_with_involution(2, MatrixInvolution::Transpose).unwrap());
        assert_valid(&full_matrix_with_involution(2, MatrixInvolution::Symplectic).unwrap());
        assert_valid(&full_matrix_graded(2, GroupSpec::z2(), vec![vec![0], vec![1]]).unwrap());
    }

    #[test]
    fn dimensions_are_right() {
        assert_eq!(ut(2).dim(), 3);
        assert_eq!(ut(3).dim(), 6);
        assert_eq!(full_matrix(3).dim(), 9);
        assert_eq!(grassmann_truncated(4).dim(), 16);
        assert_eq!(group_algebra(vec![2, 2]).unwrap().dim(), 4);
        assert_eq!(matrix_algebra(&ut(2), 2).dim(), 12);
        assert_eq!(
            tensor_product(&ut(2), &ut(2)).unwrap().dim(),
            9
        );
    }

    #[test]
    fn group_algebra_rejects_odd_factors() {
        assert!(matches!(
            group_algebra(vec![3]),
            Err(BuildError::UnsupportedGroup(_))
        ));
        assert!(matches!(
            group_algebra(vec![2, 4]),
            Err(BuildError::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn incidence_of_the_diamond() {
        // 1 <= 2 <= 4 and 1 <= 3 <= 4, no relation between 2 and 3
        let sa = incidence(&[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        assert_valid(&sa);
        assert_eq!(sa.dim(), 9); // 4 reflexive + 1<=2,1<=3,1<=4,2<=4,3<=4
        let labels = sa.algebra.labels();
        assert!(labels.contains(&"e14".to_string())); // transitivity filled in
        assert!(!labels.contains(&"e23".to_string()));
        // cycles are rejected
        assert!(matches!(
            incidence(&[(1, 2), (2, 3), (3, 1)]),
            Err(BuildError::PosetCycle(_, _))
        ));
    }

    #[test]
    fn grassmann_anticommutes_in_degree_one() {
        let sa = grassmann_truncated(3);
        let a = &sa.algebra;
        // generators are words of length 1
        let gen: Vec<usize> = (0..a.dim())
            .filter(|&i| a.label(i).len() == 2 && a.label(i).starts_with('g'))
            .collect();
        assert_eq!(gen.len(), 3);
        for &x in &gen {
            for &y in &gen {
                let xy = a.mul_sparse(&sv_unit(x), &sv_unit(y));
                let yx = a.mul_sparse(&sv_unit(y), &sv_unit(x));
                let anti = crate::sparse::sv_add(&xy, &yx);
                assert!(anti.is_empty(), "g{x} g{y} + g{y} g{x} != 0");
            }
            assert!(a.basis_product(x, x).is_empty());
        }
    }

    #[test]
    fn tensor_swap_is_a_table_isomorphism_on_symmetric_input() {
        // ut(2) ⊗ ut(2): the flip (i,j) -> (j,i) must be an isomorphism of
        // tables, giving a cheap canonical cross-check of the product rule
        let t = tensor_product(&ut(2), &ut(2)).unwrap();
        assert_valid(&t);
        let d = ut(2).dim();
        let flip = |x: usize| (x % d) * d + x / d;
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                let direct: SparseVec = t
                    .algebra
                    .basis_product(flip(i), flip(j))
                    .clone();
                let mut flipped: SparseVec = t
                    .algebra
                    .basis_product(i, j)
                    .iter()
                    .map(|(k, c)| (flip(*k), c.clone()))
                    .collect();
                flipped.sort_by_key(|(k, _)| *k);
                assert_eq!(direct, flipped);
            }
        }
    }

    #[test]
    fn matrix_algebra_of_the_field_is_the_full_matrix_algebra() {
        let m = matrix_algebra(&field(), 3);
        let f = full_matrix(3);
        assert_eq!(m.dim(), f.dim());
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                assert_eq!(m.algebra.basis_product(i, j), f.algebra.basis_product(i, j));
            }
        }
        assert_eq!(m.algebra.unit(), f.algebra.unit());
    }

    #[test]
    fn envelope_and_matrix_algebra_commute() {
        // G(M_n(B)) and M_n(G(B)) have identical canonical tables
        let b = grassmann_truncated(2); // a Z/2-graded base
        for n in [1usize, 2] {
            for k in [1usize, 2] {
                let lhs = grassmann_envelope(&matrix_algebra(&b, n), k).unwrap();
                let rhs = matrix_algebra(&grassmann_envelope(&b, k).unwrap(), n);
                assert_eq!(lhs.dim(), rhs.dim(), "n={n} k={k}");
                for i in 0..lhs.dim() {
                    for j in 0..lhs.dim() {
                        assert_eq!(
                            lhs.algebra.basis_product(i, j),
                            rhs.algebra.basis_product(i, j),
                            "cell ({i},{j}) with n={n} k={k}"
                        );
                    }
                }
                match (&lhs.structure, &rhs.structure) {
                    (Structure::Graded(g), Structure::Graded(h)) => {
                        assert_eq!(g.degrees, h.degrees)
                    }
                    _ => panic!("both sides must stay graded"),
                }
            }
        }
    }

    #[test]
    fn envelope_dimension_formula() {
        // dim G(B)_k = dim B_0 * 2^{k-1} + dim B_1 * 2^{k-1}
        let b = grassmann_truncated(2); // B_0 = {1, g1g2}, B_1 = {g1, g2}
        for k in [1usize, 2, 3] {
            let env = grassmann_envelope(&b, k).unwrap();
            let half = 1usize << (k - 1);
            assert_eq!(env.dim(), 2 * half + 2 * half);
            assert!(env.validate().is_ok());
        }
        // ungraded input is rejected
        assert!(matches!(
            grassmann_envelope(&ut(2), 2),
            Err(BuildError::NotZ2Graded)
        ));
    }

    #[test]
    fn direct_sum_and_exchange() {
        let s = direct_sum(&ut(2), &field()).unwrap();
        assert_valid(&s);
        assert_eq!(s.dim(), 4);
        let e = exchange_involution(&ut(2)).unwrap();
        assert_valid(&e);
        assert_eq!(e.dim(), 6);
        // mixing structures across a direct sum fails
        let g = group_algebra(vec![2]).unwrap();
        assert!(direct_sum(&g, &ut(2)).is_err());
    }

    #[test]
    fn with_grading_checks_the_table() {
        let graded = with_grading(
            &ut(2),
            GroupSpec::z2(),
            vec![vec![0], vec![1], vec![0]],
        )
        .unwrap();
        assert_valid(&graded);
        assert!(with_grading(
            &ut(2),
            GroupSpec::z2(),
            vec![vec![1], vec![0], vec![0]],
        )
        .is_err());
    }

    #[test]
    fn elementary_grading_degrees() {
        let m = full_matrix_graded(2, GroupSpec::z2(), vec![vec![0], vec![1]]).unwrap();
        match &m.structure {
            Structure::Graded(g) => {
                // deg E11 = 0, E12 = 1, E21 = 1, E22 = 0
                assert_eq!(g.degrees, vec![vec![0], vec![1], vec![1], vec![0]]);
            }
            _ => panic!("expected grading"),
        }
    }
}
