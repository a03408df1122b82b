//! Dense univariate polynomials over the rationals, plus the numeric root
//! bootstrap used to recover rational eigenvalues.
//!
//! Coefficients are stored low degree first with no trailing zeros; the zero
//! polynomial is the empty vector.

use crate::matrix::Reducer;
use crate::scalar::{snap_rational, Scalar};
use crate::sparse::{sv_from_dense, SparseVec};
use num_traits::{One, ToPrimitive, Zero};

pub type Poly = Vec<Scalar>;

pub fn normalize(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn monic(p: &Poly) -> Poly {
    match p.last() {
        None => Vec::new(),
        Some(lead) => p.iter().map(|c| c / lead).collect(),
    }
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![Scalar::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    normalize(out)
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    normalize(out)
}

/// Euclidean division; the divisor must be nonzero.
pub fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    if rem.len() <= db {
        return (Vec::new(), normalize(rem));
    }
    let mut quo = vec![Scalar::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap() / lead;
        quo[dr - db] = c.clone();
        for (i, cb) in b.iter().enumerate() {
            let idx = dr - db + i;
            let t = &rem[idx] - &(&c * cb);
            rem[idx] = t;
        }
        rem = normalize(rem);
        if rem.is_empty() {
            break;
        }
    }
    (normalize(quo), rem)
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (normalize(a.clone()), normalize(b.clone()));
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let g = gcd(a, b);
    let (q, r) = divrem(&mul(a, b), &g);
    debug_assert!(r.is_empty());
    monic(&q)
}

pub fn derivative(p: &Poly) -> Poly {
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * Scalar::from_integer(i.into()));
    }
    normalize(out)
}

pub fn eval(p: &Poly, x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in p.iter().rev() {
        acc = &acc * x + c;
    }
    acc
}

/// Largest divisor with no repeated roots: `p / gcd(p, p')`.
pub fn squarefree_part(p: &Poly) -> Poly {
    if p.is_empty() {
        return Vec::new();
    }
    let g = gcd(p, &derivative(p));
    let (q, r) = divrem(p, &g);
    debug_assert!(r.is_empty());
    monic(&q)
}

/// Minimal polynomial of the linear map `apply` on the span of the iterates
/// of `seed` (monic).  `apply` must be linear on a space of dimension
/// `ambient`.
pub fn krylov_min_poly<F>(ambient: usize, seed: &[Scalar], apply: F) -> Poly
where
    F: Fn(&[Scalar]) -> Vec<Scalar>,
{
    let mut red = Reducer::new(ambient);
    let mut iterates: Vec<Vec<Scalar>> = Vec::new();
    let mut v = seed.to_vec();
    loop {
        let sv: SparseVec = sv_from_dense(&v);
        if !red.insert(sv) {
            // v depends on the earlier iterates; express it in the iterate
            // basis by solving a small system
            let k = iterates.len();
            let mut m = crate::matrix::Mat::zeros(ambient, k);
            for (j, it) in iterates.iter().enumerate() {
                for i in 0..ambient {
                    m[(i, j)] = it[i].clone();
                }
            }
            let sol = m.solve(&v).expect("v lies in the iterate span");
            let mut p = vec![Scalar::zero(); k + 1];
            for (i, c) in sol.iter().enumerate() {
                p[i] = -c.clone();
            }
            p[k] = Scalar::one();
            return normalize(p);
        }
        iterates.push(v.clone());
        v = apply(&v);
        assert_eq!(v.len(), ambient, "apply changed the dimension");
    }
}

/// Minimal polynomial of an operator given by column images, as the lcm of
/// the cyclic minimal polynomials of the standard basis vectors.
pub fn operator_min_poly<F>(ambient: usize, apply: F) -> Poly
where
    F: Fn(&[Scalar]) -> Vec<Scalar> + Copy,
{
    let mut acc: Poly = vec![Scalar::one()];
    for i in 0..ambient {
        let mut seed = vec![Scalar::zero(); ambient];
        seed[i] = Scalar::one();
        let p = krylov_min_poly(ambient, &seed, apply);
        acc = lcm(&acc, &p);
        if degree(&acc) == Some(ambient) {
            break; // cannot grow past the ambient dimension
        }
    }
    acc
}

/// All rational roots of `p`, found by numeric approximation, snapping to
/// small rationals, exact verification, and exact deflation.  Returns the
/// roots (with multiplicity stripped) and the fully deflated cofactor; a
/// cofactor of positive degree means irrational or complex roots remain.
pub fn rational_roots(p: &Poly) -> (Vec<Scalar>, Poly) {
    let mut work = squarefree_part(p);
    let mut roots = Vec::new();
    // linear factors come off exactly without numerics
    loop {
        if work.len() == 2 {
            roots.push(-(&work[0] / &work[1]));
            work = vec![Scalar::one()];
            break;
        }
        if work.len() <= 1 {
            break;
        }
        // strip a root at zero
        if work[0].is_zero() {
            roots.push(Scalar::zero());
            work.remove(0);
            continue;
        }
        let approx = durand_kerner(&work);
        let mut found = None;
        for (re, im) in approx {
            if im.abs() > 1e-7 {
                continue;
            }
            for max_den in [1u64, 12, 720, 1_000_000] {
                if let Some(cand) = snap_rational(re, max_den) {
                    if eval(&work, &cand).is_zero() {
                        found = Some(cand);
                        break;
                    }
                }
            }
            if found.is_some() {
                break;
            }
        }
        match found {
            Some(r) => {
                let divisor = vec![-r.clone(), Scalar::one()];
                let (q, rem) = divrem(&work, &divisor);
                debug_assert!(rem.is_empty());
                roots.push(r);
                work = q;
            }
            None => break, // nothing rational left that we can certify
        }
    }
    roots.sort();
    (roots, monic(&work))
}

/// Durand–Kerner simultaneous root iteration in double precision.
fn durand_kerner(p: &Poly) -> Vec<(f64, f64)> {
    let n = p.len() - 1;
    let lead = p.last().unwrap().to_f64().unwrap_or(1.0);
    let coeffs: Vec<f64> = p
        .iter()
        .map(|c| c.to_f64().unwrap_or(0.0) / lead)
        .collect();
    let eval_c = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0f64, 0.0f64);
        for c in coeffs.iter().rev() {
            acc = (acc.0 * z.0 - acc.1 * z.1 + c, acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    };
    // standard staggered starting points on a spiral
    let mut zs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let theta = 0.4 + 1.7 * k as f64;
            let r = 1.0 + 0.3 * k as f64 / n as f64;
            (r * theta.cos(), r * theta.sin())
        })
        .collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = (1.0f64, 0.0f64);
            for j in 0..n {
                if i != j {
                    let d = (zs[i].0 - zs[j].0, zs[i].1 - zs[j].1);
                    denom = (
                        denom.0 * d.0 - denom.1 * d.1,
                        denom.0 * d.1 + denom.1 * d.0,
                    );
                }
            }
            let val = eval_c(zs[i]);
            let den_norm = denom.0 * denom.0 + denom.1 * denom.1;
            if den_norm < 1e-300 {
                continue;
            }
            let step = (
                (val.0 * denom.0 + val.1 * denom.1) / den_norm,
                (val.1 * denom.0 - val.0 * denom.1) / den_norm,
            );
            zs[i] = (zs[i].0 - step.0, zs[i].1 - step.1);
            moved += step.0.abs() + step.1.abs();
        }
        if moved < 1e-14 {
            break;
        }
    }
    zs
}
