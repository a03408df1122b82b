//! Exact rational scalars.
//!
//! Every quantity in this crate is a `Scalar`: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator.  The type is
//! `num_rational::BigRational`, which maintains that canonical form on every
//! operation; the helpers here exist for terse construction, canonical
//! text formatting (`p/q`, integers without the `/1`), and parsing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Fraction `p/q`; panics on `q == 0`.
pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical text form: `p` when the denominator is one, otherwise `p/q`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` (optional leading sign, q > 0 after normalization).
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator in rational `{s}`"))?;
    let q: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("bad denominator in rational `{s}`"))?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(format!("zero denominator in rational `{s}`"));
    }
    Ok(BigRational::new(p, q))
}

/// Nearest rational to `x` with denominator at most `max_den`, via the
/// continued-fraction convergents.  Returns `None` for non-finite input.
pub fn snap_rational(x: f64, max_den: u64) -> Option<Scalar> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut x = x.abs();
    // convergents p/q of the continued fraction of |x|
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let fr = x - a;
        if fr < 1e-12 {
            break;
        }
        x = 1.0 / fr;
    }
    if q1.is_zero() {
        return None;
    }
    let mut r = BigRational::new(p1, q1);
    if negative {
        r = -r;
    }
    Some(r)
}

/// True when `x` is a (non-negative or negative) integer.
pub fn is_integer(x: &Scalar) -> bool {
    x.denom().is_one()
}

/// Sum of the absolute values of numerator and denominator; a cheap size
/// measure used by tests.
pub fn scalar_height(x: &Scalar) -> BigInt {
    x.numer().abs() + x.denom().abs()
}
