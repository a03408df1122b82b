//! Multilinear identities and codimension sequences.
//!
//! Degree-`m` multilinear polynomials live in the span of decorated
//! monomials `x_{σ(1)} … x_{σ(m)}`: plain variables, variables confined to
//! one homogeneous component, or starred variables, depending on the
//! structure carried by the algebra.  The codimension at degree `m` is the
//! rank of the evaluation map from that span into functions on `m`-tuples;
//! its kernel is exactly the space of identities.

use crate::matrix::Reducer;
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::sparse::{sv_add_scaled, sv_from_dense, SparseVec};
use crate::structured::{GroupElt, GroupSpec, Structure, StructuredAlgebra};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error)]
pub enum IdentityError {
    #[error("decorations do not match the algebra: {detail}")]
    DecorationMismatch { detail: String },
    #[error("evaluation work {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("cannot read polynomial: {0}")]
    Parse(String),
}

/// Per-variable decoration inside one monomial.  `Plain` is neutral: it
/// substitutes the value unchanged and coexists with either decorated kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Plain,
    /// Variable ranges over the homogeneous component of this degree.
    Component(GroupElt),
    /// Applies the involution to the substituted value.
    Star,
}

/// The kind of decoration a polynomial (or an algebra) works with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoration {
    None,
    Graded(GroupSpec),
    Star,
}

impl Decoration {
    pub fn for_algebra(sa: &StructuredAlgebra) -> Decoration {
        match &sa.structure {
            Structure::Trivial => Decoration::None,
            Structure::Graded(g) => Decoration::Graded(g.group.clone()),
            Structure::Involutive(_) => Decoration::Star,
        }
    }

    /// Tags a single variable may carry, in canonical order.
    pub fn tag_list(&self) -> Vec<Tag> {
        match self {
            Decoration::None => vec![Tag::Plain],
            Decoration::Graded(g) => g.elements().into_iter().map(Tag::Component).collect(),
            Decoration::Star => vec![Tag::Plain, Tag::Star],
        }
    }
}

/// One decorated multilinear monomial: `perm[p]` is the variable at
/// position `p` (0-based), `tags[v]` decorates variable `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub perm: Vec<u8>,
    pub tags: Vec<Tag>,
}

/// Multilinear polynomial; terms keyed by monomial, coefficients nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub m: usize,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(m: usize) -> Polynomial {
        Polynomial { m, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, mono: Monomial, c: Scalar) {
        assert_eq!(mono.perm.len(), self.m);
        assert_eq!(mono.tags.len(), self.m);
        let entry = self.terms.entry(mono).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            let dead: Vec<Monomial> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    /// The decoration kind used by this polynomial's tags, if consistent.
    /// A polynomial only knows the tuple length of its degree tags, not
    /// the group; the algebra supplies that at evaluation time.
    pub fn decoration(&self) -> Result<PolyDecoration, IdentityError> {
        let mut found: Option<PolyDecoration> = None;
        for mono in self.terms.keys() {
            for tag in &mono.tags {
                let kind = match tag {
                    // plain variables are neutral: any decoration admits them
                    Tag::Plain => continue,
                    Tag::Component(g) => PolyDecoration::Graded { rank: g.len() },
                    Tag::Star => PolyDecoration::Star,
                };
                match &found {
                    None => found = Some(kind),
                    Some(k) if *k == kind => {}
                    Some(k) => {
                        return Err(IdentityError::DecorationMismatch {
                            detail: format!(
                                "mixes {} and {} decorations",
                                poly_decoration_name(k),
                                poly_decoration_name(&kind)
                            ),
                        })
                    }
                }
            }
        }
        Ok(found.unwrap_or(PolyDecoration::None))
    }

    /// `[x1, x2] = x1x2 - x2x1`.
    pub fn commutator() -> Polynomial {
        let mut p = Polynomial::zero(2);
        p.add_term(
            Monomial { perm: vec![0, 1], tags: vec![Tag::Plain, Tag::Plain] },
            Scalar::one(),
        );
        p.add_term(
            Monomial { perm: vec![1, 0], tags: vec![Tag::Plain, Tag::Plain] },
            -Scalar::one(),
        );
        p
    }

    /// The standard polynomial `Σ_σ sgn(σ) x_{σ(1)} … x_{σ(m)}`.
    pub fn standard(m: usize) -> Polynomial {
        let mut p = Polynomial::zero(m);
        for perm in permutations(m) {
            let sign = if perm_parity(&perm) { -Scalar::one() } else { Scalar::one() };
            p.add_term(
                Monomial { perm, tags: vec![Tag::Plain; m] },
                sign,
            );
        }
        p
    }
}

/// Decoration kind as seen from a polynomial's own tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyDecoration {
    None,
    Graded { rank: usize },
    Star,
}

fn poly_decoration_name(d: &PolyDecoration) -> &'static str {
    match d {
        PolyDecoration::None => "plain",
        PolyDecoration::Graded { .. } => "component",
        PolyDecoration::Star => "star",
    }
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..m as u8).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    if m == 0 {
        out = vec![Vec::new()];
    }
    out
}

fn perm_parity(p: &[u8]) -> bool {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Canonical indexing of the monomial space: permutation-major, then the
/// tag pattern as a mixed-radix number (variable 0 most significant).
pub struct MonomialSpace {
    pub m: usize,
    pub perms: Vec<Vec<u8>>,
    pub tags: Vec<Tag>,
}

impl MonomialSpace {
    pub fn new(m: usize, decoration: &Decoration) -> MonomialSpace {
        MonomialSpace {
            m,
            perms: permutations(m),
            tags: decoration.tag_list(),
        }
    }

    pub fn tag_count(&self) -> usize {
        self.tags.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.tags.len().pow(self.m as u32)
    }

    pub fn len(&self) -> usize {
        self.perms.len() * self.pattern_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, mono: &Monomial) -> Option<usize> {
        let pi = self.perms.binary_search(&mono.perm).ok()?;
        let mut pat = 0usize;
        for tag in &mono.tags {
            let ti = self.tags.iter().position(|t| t == tag)?;
            pat = pat * self.tag_count() + ti;
        }
        Some(pi * self.pattern_count() + pat)
    }

    pub fn monomial_at(&self, idx: usize) -> Monomial {
        let (pi, mut pat) = (idx / self.pattern_count(), idx % self.pattern_count());
        let mut tag_idx = vec![0usize; self.m];
        for v in (0..self.m).rev() {
            tag_idx[v] = pat % self.tag_count();
            pat /= self.tag_count();
        }
        Monomial {
            perm: self.perms[pi].clone(),
            tags: tag_idx.iter().map(|&t| self.tags[t].clone()).collect(),
        }
    }
}

/// Value of one decorated variable at a substituted element.
fn tagged_value(sa: &StructuredAlgebra, value: &SparseVec, tag: &Tag) -> Result<SparseVec, IdentityError> {
    match tag {
        Tag::Plain => Ok(value.clone()),
        Tag::Component(g) => {
            let grading = sa.grading().ok_or_else(|| IdentityError::DecorationMismatch {
                detail: "component decoration on an ungraded algebra".into(),
            })?;
            if !grading.group.contains(g) {
                return Err(IdentityError::DecorationMismatch {
                    detail: format!("degree {g:?} is not an element of the grading group"),
                });
            }
            Ok(value
                .iter()
                .filter(|(i, _)| grading.degrees[*i] == *g)
                .cloned()
                .collect())
        }
        Tag::Star => {
            let inv = sa.involution().ok_or_else(|| IdentityError::DecorationMismatch {
                detail: "star decoration on an algebra without involution".into(),
            })?;
            let dense = crate::sparse::sv_to_dense(sa.dim(), value);
            Ok(sv_from_dense(&inv.apply(&dense)))
        }
    }
}

/// Evaluates every monomial of the space on one substitution tuple and
/// scatters the results into per-coordinate rows over monomial indices.
///
/// Returns rows sorted by coordinate; rows for coordinates never hit are
/// omitted.  `values[v]` is the element substituted for variable `v`.
fn evaluation_rows(
    sa: &StructuredAlgebra,
    space: &MonomialSpace,
    values: &[SparseVec],
) -> Result<Vec<SparseVec>, IdentityError> {
    let a = &sa.algebra;
    let m = space.m;
    let tagn = space.tag_count();
    // per-variable, per-tag values; empty vectors simply kill the pattern
    let mut tagged: Vec<Vec<SparseVec>> = Vec::with_capacity(m);
    for v in values.iter().take(m) {
        let mut per = Vec::with_capacity(tagn);
        for tag in &space.tags {
            per.push(tagged_value(sa, v, tag)?);
        }
        tagged.push(per);
    }
    // patterns worth visiting: per variable, tags with a nonzero value
    let live: Vec<Vec<usize>> = (0..m)
        .map(|v| {
            (0..tagn)
                .filter(|&t| !tagged[v][t].is_empty())
                .collect::<Vec<_>>()
        })
        .collect();
    if live.iter().any(|l| l.is_empty()) {
        return Ok(Vec::new());
    }
    let finish = |rows: BTreeMap<usize, SparseVec>| -> Vec<SparseVec> {
        rows.into_values()
            .map(|mut r| {
                r.sort_unstable_by_key(|(i, _)| *i);
                r
            })
            .collect()
    };
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    let mut pattern = vec![0usize; m]; // indices into live[v]
    loop {
        let pat_index = {
            let mut acc = 0usize;
            for v in 0..m {
                acc = acc * tagn + live[v][pattern[v]];
            }
            acc
        };
        for (pi, perm) in space.perms.iter().enumerate() {
            let mut prod: Option<SparseVec> = None;
            for &v in perm {
                let val = &tagged[v as usize][live[v as usize][pattern[v as usize]]];
                prod = Some(match prod {
                    None => val.clone(),
                    Some(p) => a.mul_sparse(&p, val),
                });
                if prod.as_ref().is_some_and(|p| p.is_empty()) {
                    break;
                }
            }
            let Some(prod) = prod else { continue };
            let mono = pi * space.pattern_count() + pat_index;
            // (perm, pattern) pairs are not visited in monomial order, so
            // rows are sorted once at the end
            for (k, c) in prod {
                rows.entry(k).or_default().push((mono, c));
            }
        }
        // advance the mixed-radix pattern counter
        let mut v = m;
        loop {
            if v == 0 {
                break;
            }
            v -= 1;
            pattern[v] += 1;
            if pattern[v] < live[v].len() {
                break;
            }
            pattern[v] = 0;
            if v == 0 {
                return Ok(finish(rows));
            }
        }
        if m == 0 {
            break;
        }
    }
    Ok(finish(rows))
}

/// Work estimate for the exhaustive scan: `m! · d^(m+1) · tags^m`.
pub fn exact_budget(sa: &StructuredAlgebra, m: usize) -> u128 {
    let d = sa.dim() as u128;
    let fact: u128 = (1..=m as u128).product();
    let tags = Decoration::for_algebra(sa).tag_list().len() as u128;
    fact * d.pow(m as u32 + 1) * tags.pow(m as u32)
}

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone)]
pub struct CodimReport {
    pub m: usize,
    pub monomial_count: usize,
    pub value: usize,
    /// exact rank, or a lower bound from random substitutions
    pub exact: bool,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// Exact codimension: rank of the evaluation map over all basis tuples.
///
/// Tuples are scanned in chunks in parallel; the canonical reducer makes
/// the result independent of the merge order.  Stops early once the rank
/// hits the full monomial count.
pub fn codimension_exact(
    sa: &StructuredAlgebra,
    m: usize,
    budget: u128,
) -> Result<CodimReport, IdentityError> {
    let needed = exact_budget(sa, m);
    if needed > budget {
        return Err(IdentityError::BudgetExceeded { needed, budget });
    }
    let d = sa.dim();
    let space = MonomialSpace::new(m, &Decoration::for_algebra(sa));
    let mono_count = space.len();
    let tuple_count = d.checked_pow(m as u32).expect("tuple count fits usize");
    let chunk = 512usize;
    let mut red = Reducer::new(mono_count);
    let mut seen = std::collections::HashSet::<SparseVec>::new();
    let mut start = 0usize;
    while start < tuple_count && red.rank() < mono_count {
        let end = (start + chunk * rayon::current_num_threads().max(1)).min(tuple_count);
        let rows: Vec<Vec<SparseVec>> = (start..end)
            .into_par_iter()
            .map(|t| {
                let mut tuple = vec![0usize; m];
                let mut x = t;
                for v in (0..m).rev() {
                    tuple[v] = x % d;
                    x /= d;
                }
                let values: Vec<SparseVec> =
                    tuple.iter().map(|&i| crate::sparse::sv_unit(i)).collect();
                evaluation_rows(sa, &space, &values).expect("basis tuples carry no bad tags")
            })
            .collect();
        for batch in rows {
            for row in batch {
                if seen.len() < 1_000_000 {
                    if !seen.insert(row.clone()) {
                        continue;
                    }
                }
                red.insert(row);
                if red.rank() == mono_count {
                    break;
                }
            }
        }
        start = end;
    }
    Ok(CodimReport {
        m,
        monomial_count: mono_count,
        value: red.rank(),
        exact: true,
        samples: None,
        seed: None,
    })
}

/// Lower bound on the codimension from `samples` random substitution
/// tuples with entries drawn uniformly from `[-9, 9]` on each coordinate.
/// Fully deterministic for a fixed seed: sample `i` uses stream `i` of the
/// seeded generator, so thread count cannot change the result.
pub fn codimension_sampled(
    sa: &StructuredAlgebra,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<CodimReport, IdentityError> {
    let d = sa.dim();
    let space = MonomialSpace::new(m, &Decoration::for_algebra(sa));
    let mono_count = space.len();
    let mut red = Reducer::new(mono_count);
    let chunk = 64usize;
    let mut start = 0usize;
    while start < samples && red.rank() < mono_count {
        let end = (start + chunk * rayon::current_num_threads().max(1)).min(samples);
        let rows: Vec<Vec<SparseVec>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let values: Vec<SparseVec> = (0..m)
                    .map(|_| {
                        sv_from_dense(
                            &(0..d)
                                .map(|_| Scalar::from_integer(rng.gen_range(-9i64..=9).into()))
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect();
                evaluation_rows(sa, &space, &values)
                    .expect("plain and structural tags always apply to own algebra")
            })
            .collect();
        for batch in rows {
            for row in batch {
                red.insert(row);
            }
        }
        start = end;
    }
    Ok(CodimReport {
        m,
        monomial_count: mono_count,
        value: red.rank(),
        exact: false,
        samples: Some(samples),
        seed: Some(seed),
    })
}

pub fn default_sample_count(sa: &StructuredAlgebra, m: usize) -> usize {
    let fact: usize = (1..=m).product();
    2 * fact * sa.dim().max(1)
}

/// Result of an identity test: either it holds, or here is a substitution
/// of basis elements where it fails.
#[derive(Debug, Clone)]
pub enum IdentityOutcome {
    Holds,
    Fails {
        /// basis indices substituted for `x1 … xm`
        tuple: Vec<usize>,
        /// rendering of the nonzero value
        value: String,
    },
}

/// Tests whether the polynomial vanishes under every substitution of basis
/// elements (equivalently, by multilinearity, of arbitrary elements).
/// Scans tuples lexicographically, so a failure report is canonical.
pub fn is_identity(
    sa: &StructuredAlgebra,
    p: &Polynomial,
) -> Result<IdentityOutcome, IdentityError> {
    check_polynomial_fits(sa, p)?;
    let a = &sa.algebra;
    let d = sa.dim();
    let m = p.m;
    let tuple_count = d.checked_pow(m as u32).expect("tuple count fits usize");
    for t in 0..tuple_count {
        let mut tuple = vec![0usize; m];
        let mut x = t;
        for v in (0..m).rev() {
            tuple[v] = x % d;
            x /= d;
        }
        let mut acc: SparseVec = Vec::new();
        for (mono, coef) in &p.terms {
            let mut prod: Option<SparseVec> = None;
            for &v in &mono.perm {
                let val = tagged_value(
                    sa,
                    &crate::sparse::sv_unit(tuple[v as usize]),
                    &mono.tags[v as usize],
                )?;
                prod = Some(match prod {
                    None => val,
                    Some(pr) => a.mul_sparse(&pr, &val),
                });
                if prod.as_ref().is_some_and(|p| p.is_empty()) {
                    break;
                }
            }
            if let Some(prod) = prod {
                acc = sv_add_scaled(&acc, &prod, coef);
            }
        }
        if !acc.is_empty() {
            return Ok(IdentityOutcome::Fails {
                tuple,
                value: a.render_sparse(&acc),
            });
        }
    }
    Ok(IdentityOutcome::Holds)
}

fn check_polynomial_fits(sa: &StructuredAlgebra, p: &Polynomial) -> Result<(), IdentityError> {
    match p.decoration()? {
        PolyDecoration::None => Ok(()),
        PolyDecoration::Graded { rank } => match sa.grading() {
            Some(gr) if gr.group.factors().len() == rank => Ok(()),
            Some(_) => Err(IdentityError::DecorationMismatch {
                detail: "grading tuple length differs from the algebra's group rank".into(),
            }),
            None => Err(IdentityError::DecorationMismatch {
                detail: "component decoration on an ungraded algebra".into(),
            }),
        },
        PolyDecoration::Star => {
            if sa.involution().is_some() {
                Ok(())
            } else {
                Err(IdentityError::DecorationMismatch {
                    detail: "star decoration on an algebra without involution".into(),
                })
            }
        }
    }
}

/// Canonical basis of the degree-`m` identities: kernel of the evaluation
/// map over all basis substitutions.
pub fn identity_basis(
    sa: &StructuredAlgebra,
    m: usize,
    budget: u128,
) -> Result<Vec<Polynomial>, IdentityError> {
    let needed = exact_budget(sa, m);
    if needed > budget {
        return Err(IdentityError::BudgetExceeded { needed, budget });
    }
    let d = sa.dim();
    let space = MonomialSpace::new(m, &Decoration::for_algebra(sa));
    let mut red = Reducer::new(space.len());
    let tuple_count = d.checked_pow(m as u32).expect("tuple count fits usize");
    for t in 0..tuple_count {
        let mut tuple = vec![0usize; m];
        let mut x = t;
        for v in (0..m).rev() {
            tuple[v] = x % d;
            x /= d;
        }
        let values: Vec<SparseVec> = tuple.iter().map(|&i| crate::sparse::sv_unit(i)).collect();
        for row in evaluation_rows(sa, &space, &values)? {
            red.insert(row);
        }
    }
    let kernel = red.kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|coeffs| {
            let mut p = Polynomial::zero(m);
            for (idx, c) in coeffs {
                p.add_term(space.monomial_at(idx), c);
            }
            p
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub contained: bool,
    /// An identity of the first algebra that fails on the second.
    pub counterexample: Option<(Polynomial, Vec<usize>, String)>,
}

/// Do the degree-`m` identities of `a` all hold in `b`?  The two algebras
/// must use the same decoration kind (and group, when graded).
pub fn containment_at_degree(
    a: &StructuredAlgebra,
    b: &StructuredAlgebra,
    m: usize,
    budget: u128,
) -> Result<ContainmentReport, IdentityError> {
    let da = Decoration::for_algebra(a);
    let db = Decoration::for_algebra(b);
    let compatible = match (&da, &db) {
        (Decoration::None, Decoration::None) => true,
        (Decoration::Star, Decoration::Star) => true,
        (Decoration::Graded(g), Decoration::Graded(h)) => g == h,
        _ => false,
    };
    if !compatible {
        return Err(IdentityError::DecorationMismatch {
            detail: "the two algebras carry different decorations".into(),
        });
    }
    for p in identity_basis(a, m, budget)? {
        match is_identity(b, &p)? {
            IdentityOutcome::Holds => {}
            IdentityOutcome::Fails { tuple, value } => {
                return Ok(ContainmentReport {
                    contained: false,
                    counterexample: Some((p, tuple, value)),
                })
            }
        }
    }
    Ok(ContainmentReport { contained: true, counterexample: None })
}

#[derive(Debug, Clone)]
pub struct RegevReport {
    pub m: usize,
    pub left: usize,
    pub right: usize,
    pub product: usize,
}

impl RegevReport {
    pub fn holds(&self) -> bool {
        self.product <= self.left * self.right
    }
}

/// Checks the submultiplicative bound
/// `c_m(A ⊗ B) ≤ c_m(A) · c_m(B)` on plain algebras.
pub fn regev_bound_check(
    a: &StructuredAlgebra,
    b: &StructuredAlgebra,
    m: usize,
    budget: u128,
) -> Result<RegevReport, IdentityError> {
    let pa = StructuredAlgebra::plain(a.algebra.clone());
    let pb = StructuredAlgebra::plain(b.algebra.clone());
    let prod = crate::construct::tensor_product(&pa, &pb)
        .expect("plain tensor factors always combine");
    let left = codimension_exact(&pa, m, budget)?.value;
    let right = codimension_exact(&pb, m, budget)?.value;
    let product = codimension_exact(&prod, m, budget)?.value;
    Ok(RegevReport { m, left, right, product })
}

// ---------------------------------------------------------------------
// text form
//
//   poly   := ['-'] term (('+'|'-') term)*
//   term   := [rational '*'] factor+
//   factor := 'x' INT ["'" | '^(' INT {',' INT} ')']
//
// Variables are 1-based in the text form.

pub fn parse_polynomial(input: &str) -> Result<Polynomial, IdentityError> {
    let mut toks = Lexer { s: input.as_bytes(), pos: 0 };
    let mut terms: Vec<(Scalar, Vec<(usize, Tag)>)> = Vec::new();
    let mut sign = Scalar::one();
    if toks.eat(b'-') {
        sign = -sign;
    } else {
        toks.eat(b'+');
    }
    loop {
        let (coef, factors) = parse_term(&mut toks)?;
        terms.push((sign.clone() * coef, factors));
        toks.skip_ws();
        if toks.eat(b'+') {
            sign = Scalar::one();
        } else if toks.eat(b'-') {
            sign = -Scalar::one();
        } else {
            break;
        }
    }
    toks.skip_ws();
    if toks.pos != toks.s.len() {
        return Err(IdentityError::Parse(format!(
            "unexpected input at byte {}",
            toks.pos
        )));
    }
    // degree = number of distinct variables; each term must use each
    // variable exactly once
    let m = terms
        .iter()
        .flat_map(|(_, fs)| fs.iter().map(|(v, _)| *v))
        .max()
        .map(|v| v + 1)
        .unwrap_or(0);
    let mut poly = Polynomial::zero(m);
    for (coef, factors) in terms {
        if coef.is_zero() {
            continue;
        }
        let mut perm = Vec::with_capacity(m);
        let mut tags = vec![Tag::Plain; m];
        let mut used = vec![false; m];
        for (v, tag) in factors {
            if v >= m || used[v] {
                return Err(IdentityError::Parse(format!(
                    "variable x{} repeats inside one monomial",
                    v + 1
                )));
            }
            used[v] = true;
            perm.push(v as u8);
            tags[v] = tag;
        }
        if used.iter().any(|u| !u) {
            return Err(IdentityError::Parse(
                "every monomial must use every variable exactly once".into(),
            ));
        }
        poly.add_term(Monomial { perm, tags }, coef);
    }
    Ok(poly)
}

fn parse_term(toks: &mut Lexer) -> Result<(Scalar, Vec<(usize, Tag)>), IdentityError> {
    toks.skip_ws();
    let mut coef = Scalar::one();
    // optional rational followed by '*'
    let save = toks.pos;
    if let Some(r) = toks.rational() {
        toks.skip_ws();
        if toks.eat(b'*') {
            coef = r;
        } else {
            toks.pos = save;
        }
    }
    let mut factors = Vec::new();
    loop {
        toks.skip_ws();
        if !toks.eat(b'x') {
            break;
        }
        let n = toks
            .integer()
            .ok_or_else(|| IdentityError::Parse("variable index expected after 'x'".into()))?;
        if n <= 0 {
            return Err(IdentityError::Parse("variable indices are 1-based".into()));
        }
        let v = (n - 1) as usize;
        let tag = if toks.eat(b'\'') {
            Tag::Star
        } else if toks.eat(b'^') {
            if !toks.eat(b'(') {
                return Err(IdentityError::Parse("expected '(' after '^'".into()));
            }
            let mut tuple = Vec::new();
            loop {
                toks.skip_ws();
                let e = toks
                    .integer()
                    .ok_or_else(|| IdentityError::Parse("degree entry expected".into()))?;
                if e < 0 {
                    return Err(IdentityError::Parse("degree entries are nonnegative".into()));
                }
                tuple.push(e as u32);
                toks.skip_ws();
                if toks.eat(b',') {
                    continue;
                }
                if toks.eat(b')') {
                    break;
                }
                return Err(IdentityError::Parse("expected ',' or ')' in degree tuple".into()));
            }
            Tag::Component(tuple)
        } else {
            Tag::Plain
        };
        factors.push((v, tag));
    }
    if factors.is_empty() {
        return Err(IdentityError::Parse("empty monomial".into()));
    }
    Ok((coef, factors))
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == b {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn integer(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }
    fn rational(&mut self) -> Option<Scalar> {
        self.skip_ws();
        let start = self.pos;
        let num = self.integer()?;
        if self.pos < self.s.len() && self.s[self.pos] == b'/' {
            self.pos += 1;
            match self.integer() {
                Some(den) if den > 0 => {
                    return parse_scalar(&format!("{num}/{den}")).ok();
                }
                _ => {
                    self.pos = start;
                    return None;
                }
            }
        }
        Some(Scalar::from_integer(num.into()))
    }
}

/// Canonical rendering, inverse to `parse_polynomial`.
pub fn render_polynomial(p: &Polynomial) -> String {
    if p.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mono, coef)) in p.terms.iter().enumerate() {
        let neg = coef.is_negative();
        let abs = coef.abs();
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format_scalar(&abs));
            out.push('*');
        }
        for &v in &mono.perm {
            out.push('x');
            out.push_str(&(v as usize + 1).to_string());
            match &mono.tags[v as usize] {
                Tag::Plain => {}
                Tag::Star => out.push('\''),
                Tag::Component(g) => {
                    out.push_str("^(");
                    out.push_str(
                        &g.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
                    );
                    out.push(')');
                }
            }
        }
    }
    out
}
