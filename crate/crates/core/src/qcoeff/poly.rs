//! Dense integer polynomials in `s = q^{1/2}`, ascending coefficient order.
//!
//! A polynomial is a `Vec<BigInt>` with no trailing zeros; the zero polynomial
//! is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn one() -> ZPoly {
    vec![BigInt::one()]
}

pub(crate) fn is_one(p: &[BigInt]) -> bool {
    p.len() == 1 && p[0].is_one()
}

pub(crate) fn degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

/// Number of leading (low-order) zero coefficients.
pub(crate) fn low_order(p: &[BigInt]) -> usize {
    p.iter().take_while(|c| c.is_zero()).count()
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if is_one(a) {
        return b.to_vec();
    }
    if is_one(b) {
        return a.to_vec();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// `a * s^shift + b` style accumulation: adds `c * s^offset * p` into `acc`.
pub(crate) fn add_shifted(acc: &mut ZPoly, p: &[BigInt], c: &BigInt, offset: usize) {
    if acc.len() < p.len() + offset {
        acc.resize(p.len() + offset, BigInt::zero());
    }
    for (i, x) in p.iter().enumerate() {
        acc[i + offset] += x * c;
    }
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Splits `p` into `(c, pp)` with `p = c * pp`, `pp` primitive and with
/// positive leading coefficient. `p` must be nonzero.
pub(crate) fn primitive_part(p: &[BigInt]) -> (BigInt, ZPoly) {
    let mut c = content(p);
    if p.last().expect("nonzero polynomial").is_negative() {
        c = -c;
    }
    if c.is_one() {
        return (c, p.to_vec());
    }
    let pp = p.iter().map(|x| x / &c).collect();
    (c, pp)
}

/// Pseudo-remainder of `a` by `b` (both nonzero, `deg a >= deg b`).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    while !r.is_empty() && r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &lr * y;
        }
        trim(&mut r);
    }
    r
}

/// Primitive gcd with positive leading coefficient (primitive PRS).
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() {
        return primitive_part(b).1;
    }
    if b.is_empty() {
        return primitive_part(a).1;
    }
    let (mut x, mut y) = (primitive_part(a).1, primitive_part(b).1);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return one();
        }
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive_part(&r).1 };
    }
    x
}

/// Exact division `a / b`; panics if the division is not exact over the integers.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if is_one(b) {
        return a.to_vec();
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut quot = vec![BigInt::zero(); r.len().saturating_sub(db).max(1)];
    while !r.is_empty() && r.len() > db {
        let (c, rem) = r.last().unwrap().div_rem(lb);
        assert!(rem.is_zero(), "inexact polynomial division");
        let shift = r.len() - 1 - db;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        quot[shift] = c;
        trim(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    trim(&mut quot);
    quot
}
