//! Radical, semisimple complement, and decomposition into action-simple
//! components.
//!
//! Everything here is exact: numeric approximation only ever *suggests*
//! eigenvalues, which are then verified in rational arithmetic before use.

use crate::algebra::Algebra;
use crate::matrix::{Mat, Reducer};
use crate::polyutil::{operator_min_poly, rational_roots, squarefree_part};
use crate::scalar::Scalar;
use crate::sparse::{sv_add_scaled, sv_from_dense, sv_to_dense, sv_unit, SparseVec};
use crate::structured::{ActionSet, StructuredAlgebra};
use crate::subspace::Subspace;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, thiserror::Error)]
pub enum StructureError {
    /// The center of a semisimple piece needs an irrational eigenvalue.
    #[error("cannot split over the rationals: {detail}")]
    NonSplit { detail: String },
    /// A component passed every ideal probe but the operator span stayed
    /// short of full, so simplicity is not certified either way.
    #[error("cannot certify component {component} as simple: {detail}")]
    SimplicityUnverified { component: usize, detail: String },
    #[error("radical is not stable under {op}")]
    RadicalNotInvariant { op: String },
    #[error("semisimple complement is not stable under {op}")]
    ComplementNotInvariant { op: String },
    #[error("complement lifting failed: {detail}")]
    LiftFailed { detail: String },
}

/// Jacobson radical via the trace form on the unitization: `x` is radical
/// exactly when `tr(L_{xy}) = 0` for every `y` (characteristic zero).
pub fn radical(a: &Algebra) -> Subspace {
    let d = a.dim();
    if d == 0 {
        return Subspace::zero(0);
    }
    let au = a.unitization();
    let du = au.dim();
    let trvec = au.left_trace_vector();
    // rows: one per y = basis of the unitization; columns: x over A
    let mut m = Mat::zeros(du, d);
    for t in 0..du {
        for s in 0..d {
            let mut acc = Scalar::zero();
            for (k, c) in au.basis_product(s, t) {
                acc += c * &trvec[*k];
            }
            m[(t, s)] = acc;
        }
    }
    Subspace::from_dense(d, m.kernel())
}

/// Checks that a subspace is carried into itself by every operator of the
/// action set; reports the offending operator's label.
pub fn action_invariant(space: &Subspace, actions: &ActionSet) -> Result<(), String> {
    for (op, label) in actions.ops.iter().zip(&actions.labels) {
        if op.is_identity() {
            continue;
        }
        for row in space.basis() {
            if !space.contains_sparse(&op.apply_sparse(row)) {
                return Err(label.clone());
            }
        }
    }
    Ok(())
}

/// Primitive idempotents of the center of a (semisimple) algebra, as dense
/// vectors in the algebra's coordinates, sorted canonically.
///
/// Splits the center into joint eigenspaces of its multiplication
/// operators.  Rational eigenvalues are recovered numerically, then
/// verified and deflated exactly; a joint eigenspace of dimension above one
/// survives all operators only when the center contains a proper field
/// extension, which is reported as `NonSplit`.
pub fn split_center(alg: &Algebra) -> Result<Vec<Vec<Scalar>>, StructureError> {
    let d = alg.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let z = alg.center();
    if z.dim() == 0 {
        return Err(StructureError::NonSplit {
            detail: "center is zero".into(),
        });
    }
    let zalg = alg
        .restrict(&z)
        .expect("center is closed under multiplication");
    let zd = zalg.dim();
    let mut blocks: Vec<Subspace> = vec![Subspace::full(zd)];
    for t in 0..zd {
        let lt = zalg.left_mul(&sv_unit(t));
        let mut next: Vec<Subspace> = Vec::new();
        for v in blocks {
            let k = v.dim();
            if k <= 1 {
                next.push(v);
                continue;
            }
            // matrix of multiplication by z_t restricted to the block
            let red = v.to_reducer();
            let mut m = Mat::zeros(k, k);
            for (col, row) in v.basis().iter().enumerate() {
                let img = lt.apply_sparse(row);
                let coords = red
                    .coords(&img)
                    .expect("blocks are invariant under center multiplications");
                for (i, c) in coords.into_iter().enumerate() {
                    m[(i, col)] = c;
                }
            }
            let mu = squarefree_part(&operator_min_poly(k, |w| m.mul_vec(w)));
            let (roots, leftover) = rational_roots(&mu);
            let lift_block = |vecs: Vec<Vec<Scalar>>| -> Subspace {
                Subspace::from_sparse(
                    zd,
                    vecs.into_iter().map(|coef| {
                        let mut acc: SparseVec = Vec::new();
                        for (i, c) in coef.iter().enumerate() {
                            if !c.is_zero() {
                                acc = sv_add_scaled(&acc, &v.basis()[i], c);
                            }
                        }
                        acc
                    }),
                )
            };
            for lam in &roots {
                let mut shifted = m.clone();
                for i in 0..k {
                    let t = &shifted[(i, i)] - lam;
                    shifted[(i, i)] = t;
                }
                let eig = lift_block(shifted.kernel());
                if eig.dim() > 0 {
                    next.push(eig);
                }
            }
            if leftover.len() > 1 {
                // part of the block with no rational eigenvalue: kernel of
                // the leftover factor evaluated at the operator
                let mut acc = Mat::zeros(k, k);
                for c in leftover.iter().rev() {
                    acc = acc.mul(&m);
                    for i in 0..k {
                        let t = &acc[(i, i)] + c;
                        acc[(i, i)] = t;
                    }
                }
                let rest = lift_block(acc.kernel());
                if rest.dim() > 0 {
                    next.push(rest);
                }
            }
        }
        blocks = next;
    }
    for b in &blocks {
        if b.dim() > 1 {
            return Err(StructureError::NonSplit {
                detail: format!(
                    "center contains a field extension of degree {}",
                    b.dim()
                ),
            });
        }
    }
    // each one-dimensional joint eigenspace is spanned by a multiple of a
    // primitive idempotent
    let mut idems: Vec<SparseVec> = Vec::new();
    for b in &blocks {
        let v = &b.basis()[0];
        let w = zalg.mul_sparse(v, v);
        if w.is_empty() {
            return Err(StructureError::NonSplit {
                detail: "central direction squares to zero".into(),
            });
        }
        // w = c v for some scalar c by the eigenspace property
        let c = &w[0].1 / &v[0].1;
        let e: SparseVec = v.iter().map(|(i, x)| (*i, x / &c)).collect();
        debug_assert_eq!(zalg.mul_sparse(&e, &e), e);
        idems.push(e);
    }
    // into algebra coordinates
    let mut out: Vec<SparseVec> = idems
        .iter()
        .map(|e| {
            let mut acc: SparseVec = Vec::new();
            for (i, c) in e {
                acc = sv_add_scaled(&acc, &z.basis()[*i], c);
            }
            acc
        })
        .collect();
    out.sort();
    // sanity: orthogonal idempotent family summing to a two-sided identity
    for (i, e) in out.iter().enumerate() {
        if alg.mul_sparse(e, e) != *e {
            return Err(StructureError::NonSplit {
                detail: "candidate central idempotent fails to square to itself".into(),
            });
        }
        for f in out.iter().skip(i + 1) {
            if !alg.mul_sparse(e, f).is_empty() {
                return Err(StructureError::NonSplit {
                    detail: "candidate central idempotents are not orthogonal".into(),
                });
            }
        }
    }
    let total = out.iter().fold(Vec::new(), |acc, e| {
        sv_add_scaled(&acc, e, &Scalar::one())
    });
    for i in 0..d {
        let ei = sv_unit(i);
        if alg.mul_sparse(&total, &ei) != ei || alg.mul_sparse(&ei, &total) != ei {
            return Err(StructureError::NonSplit {
                detail: "central idempotents do not sum to an identity".into(),
            });
        }
    }
    Ok(out.into_iter().map(|e| sv_to_dense(d, &e)).collect())
}

fn dense_comb(d: usize, coords: &[(usize, Scalar)], basis: &[SparseVec]) -> Vec<Scalar> {
    let mut acc: SparseVec = Vec::new();
    for (i, c) in coords {
        acc = sv_add_scaled(&acc, &basis[*i], c);
    }
    sv_to_dense(d, &acc)
}

/// Wedderburn–Malcev complement: a subalgebra `S` with `A = S ⊕ J(A)`.
///
/// The central idempotents of `A/J` are lifted by the idempotent-refining
/// iteration `x ← 3x² − 2x³` and orthogonalized in sequence; a vector-space
/// section of each simple block is then corrected corner by corner, working
/// modulo the powers `N, N², N⁴, …` of the corner radical, so the linear
/// systems stay block-local.
pub fn semisimple_complement(a: &Algebra, j: &Subspace) -> Result<Subspace, StructureError> {
    let d = a.dim();
    if j.dim() == 0 {
        return Ok(Subspace::full(d));
    }
    if j.dim() == d {
        return Ok(Subspace::zero(d));
    }
    let (abar, q) = a.quotient(j);
    let ebars = split_center(&abar)?;

    // lift the central idempotents to an orthogonal family in A
    let mut lifted: Vec<Vec<Scalar>> = Vec::new();
    let mut prev = vec![Scalar::zero(); d]; // running sum of lifted idempotents
    for ebar in &ebars {
        let x0 = q.lift_dense(ebar);
        // strip the parts seen by the previous idempotents …
        let px = a.mul_dense(&prev, &x0);
        let xp = a.mul_dense(&x0, &prev);
        let pxp = a.mul_dense(&px, &prev);
        let mut y = x0;
        for i in 0..d {
            let t = &y[i] - &px[i] - &xp[i] + &pxp[i];
            y[i] = t;
        }
        // … then sharpen to an exact idempotent
        let mut steps = 0;
        loop {
            let y2 = a.mul_dense(&y, &y);
            if y2 == y {
                break;
            }
            let y3 = a.mul_dense(&y2, &y);
            for i in 0..d {
                let t = Scalar::from_integer(3.into()) * &y2[i]
                    - Scalar::from_integer(2.into()) * &y3[i];
                y[i] = t;
            }
            steps += 1;
            if steps > 64 {
                return Err(StructureError::LiftFailed {
                    detail: "idempotent refinement did not converge".into(),
                });
            }
        }
        for i in 0..d {
            let t = &prev[i] + &y[i];
            prev[i] = t;
        }
        lifted.push(y);
    }

    // per-block section lift
    let mut s_rows: Vec<SparseVec> = Vec::new();
    for (ebar, e) in ebars.iter().zip(&lifted) {
        let e_sv = sv_from_dense(e);
        let cbar = abar.corner(&sv_from_dense(ebar));
        let block = abar
            .restrict(&cbar)
            .expect("corners are closed under multiplication");
        let m = cbar.dim();
        // initial sections e·(lift b̄)·e, congruent to b̄ modulo J
        let mut sec: Vec<SparseVec> = cbar
            .basis()
            .iter()
            .map(|bb| {
                let x0 = q.lift_sparse(bb);
                a.mul_sparse(&e_sv, &a.mul_sparse(&x0, &e_sv))
            })
            .collect();
        // corner radical e·J·e
        let mut n_space = Subspace::from_sparse(
            d,
            j.basis()
                .iter()
                .map(|w| a.mul_sparse(&e_sv, &a.mul_sparse(w, &e_sv))),
        );
        let mut guard = 0;
        while n_space.dim() > 0 {
            guard += 1;
            if guard > 64 {
                return Err(StructureError::LiftFailed {
                    detail: "section correction did not terminate".into(),
                });
            }
            let errs: Vec<SparseVec> = (0..m * m)
                .map(|xy| {
                    let (x, y) = (xy / m, xy % m);
                    let mut err = a.mul_sparse(&sec[x], &sec[y]);
                    for (k, g) in block.basis_product(x, y) {
                        err = sv_add_scaled(&err, &sec[*k], &-g.clone());
                    }
                    err
                })
                .collect();
            if errs.iter().all(|e| e.is_empty()) {
                break;
            }
            let n_red = n_space.to_reducer();
            for err in &errs {
                if n_red.coords(err).is_none() {
                    return Err(StructureError::LiftFailed {
                        detail: "section defect escaped the corner radical".into(),
                    });
                }
            }
            let n2 = a.subspace_product(&n_space, &n_space);
            let n2_red = n2.to_reducer();
            let reduce2 = |v: &SparseVec| -> Vec<Scalar> {
                sv_to_dense(d, &n2_red.reduce(v.clone()))
            };
            // unknowns: delta_x = Σ_t u[x·nb + t] n_t with n_t the radical
            // basis; equations live in ambient coordinates modulo N²
            let nb = n_space.dim();
            let nbasis = n_space.basis();
            let rows = m * m * d;
            let cols = m * nb;
            let mut sys = Mat::zeros(rows, cols);
            let mut rhs = vec![Scalar::zero(); rows];
            for xy in 0..m * m {
                let (x, y) = (xy / m, xy % m);
                let r = reduce2(&errs[xy]);
                for i in 0..d {
                    rhs[xy * d + i] = r[i].clone();
                }
                for z in 0..m {
                    let gcoef = crate::sparse::sv_get(block.basis_product(x, y), z);
                    for (t, nt) in nbasis.iter().enumerate() {
                        // coefficient of u[z·nb+t]:
                        //   γ^z_{xy}·n_t − [z = y]·s_x n_t − [z = x]·n_t s_y
                        let mut vec: SparseVec = Vec::new();
                        if !gcoef.is_zero() {
                            vec = sv_add_scaled(&vec, nt, &gcoef);
                        }
                        if z == y {
                            let sx_nt = a.mul_sparse(&sec[x], nt);
                            vec = sv_add_scaled(&vec, &sx_nt, &-Scalar::one());
                        }
                        if z == x {
                            let nt_sy = a.mul_sparse(nt, &sec[y]);
                            vec = sv_add_scaled(&vec, &nt_sy, &-Scalar::one());
                        }
                        if vec.is_empty() {
                            continue;
                        }
                        let col_vec = reduce2(&vec);
                        for i in 0..d {
                            if !col_vec[i].is_zero() {
                                sys[(xy * d + i, z * nb + t)] = col_vec[i].clone();
                            }
                        }
                    }
                }
            }
            let u = sys.solve(&rhs).ok_or_else(|| StructureError::LiftFailed {
                detail: "section correction system is inconsistent".into(),
            })?;
            for x in 0..m {
                let mut delta: SparseVec = Vec::new();
                for (t, nt) in nbasis.iter().enumerate() {
                    let c = &u[x * nb + t];
                    if !c.is_zero() {
                        delta = sv_add_scaled(&delta, nt, c);
                    }
                }
                sec[x] = sv_add_scaled(&sec[x], &delta, &Scalar::one());
            }
            n_space = n2;
        }
        // exactness: the section is now multiplicative on the nose
        for x in 0..m {
            for y in 0..m {
                let mut err = a.mul_sparse(&sec[x], &sec[y]);
                for (k, g) in block.basis_product(x, y) {
                    err = sv_add_scaled(&err, &sec[*k], &-g.clone());
                }
                if !err.is_empty() {
                    return Err(StructureError::LiftFailed {
                        detail: "corrected section fails multiplicativity".into(),
                    });
                }
            }
        }
        s_rows.extend(sec);
    }
    let s = Subspace::from_sparse(d, s_rows);
    if s.dim() != abar.dim() {
        return Err(StructureError::LiftFailed {
            detail: format!(
                "complement has dimension {}, expected {}",
                s.dim(),
                abar.dim()
            ),
        });
    }
    if s.intersection_dim(j) != 0 {
        return Err(StructureError::LiftFailed {
            detail: "complement meets the radical".into(),
        });
    }
    if a.restrict(&s).is_none() {
        return Err(StructureError::LiftFailed {
            detail: "complement is not closed under multiplication".into(),
        });
    }
    Ok(s)
}

/// Outcome of the simplicity probe for one component.
#[derive(Debug, Clone)]
pub enum Simplicity {
    /// The multiplication and action operators span the full operator
    /// space, which certifies simplicity.
    Simple,
    /// All products vanish, so the component is not simple by convention.
    SquareZero,
    /// A proper nonzero stable ideal, disproving simplicity.
    ProperIdeal(Subspace),
    /// Neither certificate was found.
    Unknown,
}

/// Burnside-style probe: certified simple when the span of words in the
/// multiplication operators and action operators is the full `d²`; refuted
/// when some seed generates a proper stable ideal.
pub fn is_action_simple(alg: &Algebra, actions: &ActionSet) -> Simplicity {
    let d = alg.dim();
    if d == 0 {
        return Simplicity::SquareZero;
    }
    let products_vanish =
        (0..d).all(|i| (0..d).all(|j| alg.basis_product(i, j).is_empty()));
    if products_vanish {
        return Simplicity::SquareZero;
    }
    let mut gens = Vec::with_capacity(2 * d + actions.ops.len());
    for i in 0..d {
        gens.push(alg.left_mul(&sv_unit(i)));
        gens.push(alg.right_mul(&sv_unit(i)));
    }
    for op in &actions.ops {
        if !op.is_identity() {
            gens.push(op.clone());
        }
    }
    let mut red = Reducer::new(d * d);
    red.insert(crate::linop::LinOp::identity(d).flatten());
    let mut work: Vec<crate::linop::LinOp> = Vec::new();
    for g in &gens {
        if red.insert(g.flatten()) {
            work.push(g.clone());
        }
    }
    while let Some(w) = work.pop() {
        if red.rank() == d * d {
            break;
        }
        for g in &gens {
            let p = g.compose(&w);
            if red.insert(p.flatten()) {
                work.push(p);
            }
        }
    }
    if red.rank() == d * d {
        return Simplicity::Simple;
    }

    // the span fell short: hunt for a proper stable ideal
    let stable_closure = |seeds: &[SparseVec]| -> Subspace {
        let mut red = Reducer::new(d);
        let mut work: Vec<SparseVec> = Vec::new();
        for s in seeds {
            if red.insert(s.clone()) {
                work.push(s.clone());
            }
        }
        while let Some(v) = work.pop() {
            for g in &gens {
                let img = g.apply_sparse(&v);
                if !img.is_empty() && red.insert(img.clone()) {
                    work.push(img);
                }
            }
        }
        Subspace::from_reducer(red)
    };
    let jrad = radical(alg);
    if jrad.dim() > 0 {
        let c = stable_closure(jrad.basis());
        if c.dim() < d {
            return Simplicity::ProperIdeal(c);
        }
    }
    for i in 0..d {
        let c = stable_closure(&[sv_unit(i)]);
        if c.dim() > 0 && c.dim() < d {
            return Simplicity::ProperIdeal(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B5_EED);
    for _ in 0..20 {
        let v: SparseVec = sv_from_dense(
            &(0..d)
                .map(|_| Scalar::from_integer(rng.gen_range(-3i64..=3).into()))
                .collect::<Vec<_>>(),
        );
        if v.is_empty() {
            continue;
        }
        let c = stable_closure(&[v]);
        if c.dim() > 0 && c.dim() < d {
            return Simplicity::ProperIdeal(c);
        }
    }
    Simplicity::Unknown
}

/// Splits a semisimple subalgebra `S ⊆ A` into components that are simple
/// as algebras-with-action: ordinary simple summands are merged along
/// orbits of the action operators, then each merged block is certified.
///
/// Precondition: `s` is closed under multiplication and stable under the
/// action operators.
pub fn simple_components(
    a: &Algebra,
    s: &Subspace,
    actions: &ActionSet,
) -> Result<Vec<Subspace>, StructureError> {
    let d = a.dim();
    if s.dim() == 0 {
        return Ok(Vec::new());
    }
    let salg = a.restrict(s).ok_or_else(|| StructureError::LiftFailed {
        detail: "semisimple part is not closed under multiplication".into(),
    })?;
    let idems = split_center(&salg)?;
    let e_amb: Vec<SparseVec> = idems
        .iter()
        .map(|e| sv_from_dense(&dense_comb(d, &sv_from_dense(e), s.basis())))
        .collect();
    let k = e_amb.len();
    let comps: Vec<Subspace> = e_amb
        .iter()
        .map(|e| {
            Subspace::from_sparse(d, s.basis().iter().map(|b| a.mul_sparse(b, e)))
        })
        .collect();

    // merge components connected by the action operators
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for op in &actions.ops {
        if op.is_identity() {
            continue;
        }
        for i in 0..k {
            for row in comps[i].basis() {
                let w = op.apply_sparse(row);
                if w.is_empty() {
                    continue;
                }
                for (jj, ej) in e_amb.iter().enumerate() {
                    if jj == i {
                        continue;
                    }
                    if !a.mul_sparse(&w, ej).is_empty() {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, jj));
                        if ri != rj {
                            parent[ri] = rj;
                        }
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Subspace> = Default::default();
    for i in 0..k {
        let r = find(&mut parent, i);
        groups
            .entry(r)
            .and_modify(|g| *g = g.sum(&comps[i]))
            .or_insert_with(|| comps[i].clone());
    }
    let mut merged: Vec<Subspace> = groups.into_values().collect();
    // canonical order: pivot columns first, then the basis rows themselves
    // (distinct lines can share a pivot set)
    merged.sort_by(|x, y| {
        x.pivots()
            .cmp(y.pivots())
            .then_with(|| x.basis().cmp(y.basis()))
    });

    for (idx, comp) in merged.iter().enumerate() {
        let calg = a.restrict(comp).ok_or_else(|| StructureError::LiftFailed {
            detail: format!("component {idx} is not closed under multiplication"),
        })?;
        let cacts = actions
            .restrict(comp)
            .ok_or_else(|| StructureError::SimplicityUnverified {
                component: idx,
                detail: "component is not stable under the action operators".into(),
            })?;
        match is_action_simple(&calg, &cacts) {
            Simplicity::Simple => {}
            Simplicity::SquareZero => {
                return Err(StructureError::SimplicityUnverified {
                    component: idx,
                    detail: "all products vanish on the component".into(),
                })
            }
            Simplicity::ProperIdeal(w) => {
                return Err(StructureError::SimplicityUnverified {
                    component: idx,
                    detail: format!("proper stable ideal of dimension {}", w.dim()),
                })
            }
            Simplicity::Unknown => {
                return Err(StructureError::SimplicityUnverified {
                    component: idx,
                    detail: "operator span is not full and no witness ideal was found"
                        .into(),
                })
            }
        }
    }
    Ok(merged)
}

/// Everything the downstream invariants need: radical, a compatible
/// semisimple complement, and its action-simple components (sorted by
/// leading coordinate).
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub radical: Subspace,
    pub complement: Subspace,
    pub components: Vec<Subspace>,
}

impl StructureReport {
    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }
}

pub fn structure_report(sa: &StructuredAlgebra) -> Result<StructureReport, StructureError> {
    let a = &sa.algebra;
    let actions = ActionSet::for_structure(sa);
    let j = radical(a);
    action_invariant(&j, &actions)
        .map_err(|op| StructureError::RadicalNotInvariant { op })?;
    let s = semisimple_complement(a, &j)?;
    action_invariant(&s, &actions)
        .map_err(|op| StructureError::ComplementNotInvariant { op })?;
    let components = simple_components(a, &s, &actions)?;
    Ok(StructureReport {
        radical: j,
        complement: s,
        components,
    })
}
