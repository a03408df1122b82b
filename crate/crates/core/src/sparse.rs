//! Sparse vectors: sorted `(index, coefficient)` pairs with no zero entries.
//!
//! Products of basis elements, structure-constant columns and row-reduction
//! rows are all sparse in practice, so the hot paths work on this
//! representation and only densify at API boundaries.

use crate::scalar::Scalar;
use num_traits::Zero;

pub type SparseVec = Vec<(usize, Scalar)>;

/// Drops zero coefficients from dense coordinates.
pub fn sv_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn sv_to_dense(ambient: usize, v: &SparseVec) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); ambient];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

pub fn sv_is_zero(v: &SparseVec) -> bool {
    v.is_empty()
}

/// `a + coef * b`, merging sorted supports.
pub fn sv_add_scaled(a: &SparseVec, b: &SparseVec, coef: &Scalar) -> SparseVec {
    if coef.is_zero() || b.is_empty() {
        return a.clone();
    }
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, coef * &b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &a[i].1 + coef * &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (k, c) in &b[j..] {
        out.push((*k, coef * c));
    }
    out
}

pub fn sv_add(a: &SparseVec, b: &SparseVec) -> SparseVec {
    sv_add_scaled(a, b, &crate::scalar::int(1))
}

pub fn sv_scale(v: &SparseVec, coef: &Scalar) -> SparseVec {
    if coef.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, coef * c)).collect()
}

pub fn sv_neg(v: &SparseVec) -> SparseVec {
    v.iter().map(|(i, c)| (*i, -c)).collect()
}

/// Coefficient at `idx` (zero when absent).
pub fn sv_get(v: &SparseVec, idx: usize) -> Scalar {
    match v.binary_search_by_key(&idx, |(i, _)| *i) {
        Ok(pos) => v[pos].1.clone(),
        Err(_) => Scalar::zero(),
    }
}

/// Single basis vector `e_i`.
pub fn sv_unit(idx: usize) -> SparseVec {
    vec![(idx, crate::scalar::int(1))]
}
