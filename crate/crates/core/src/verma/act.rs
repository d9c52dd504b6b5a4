//! Drinfeld generators acting on `M̄_q(λ) ≅ N_q⁻ v_λ` at `γ = 1`.
//!
//! Vectors are represented by the element `e` of `e · v_λ`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_rational::BigRational;

use super::hpoly::commutator_component;
use super::{HPolynomial, VermaError};
use crate::qalgebra::{normalize, Element};
use crate::qcoeff::{quantum_int, Coeff, QRat};

/// `−[2k]/k`, the coefficient of `x⁻_{l+k}` in `[h_k, x⁻_l]`.
pub fn h_coefficient(k: i64) -> QRat {
    let inv_k = QRat::from_rational(BigRational::new(1.into(), k.into()));
    -(&quantum_int(2 * k) * &inv_k)
}

/// `h_k`, which kills `v_λ` and shifts one factor at a time.
pub fn h_on(k: i64, e: &Element) -> Result<Element, VermaError> {
    if k == 0 {
        return Err(VermaError::HZero);
    }
    let c = Coeff::from(h_coefficient(k));
    let mut out = Element::zero();
    for (m, v) in e.terms() {
        let w = m.indices();
        let cv = &c * v;
        for i in 0..w.len() {
            let mut shifted = w.to_vec();
            shifted[i] += k;
            out += &normalize(&shifted, &cv);
        }
    }
    Ok(out)
}

/// `K^power`: a monomial vector of length `j` is scaled by `q^{power(λ(h) − 2j)}`.
pub fn k_on(power: i64, e: &Element, lambda_h: i64) -> Element {
    let mut out = Element::zero();
    for (m, v) in e.terms() {
        let f = QRat::q_pow(power * (lambda_h - 2 * m.len() as i64));
        out += &Element::from_monomial(m.clone(), v.scale(&f));
    }
    out
}

/// `D^power`: scaling by `q^{power(λ(d) + Σnᵢ)}`.
pub fn d_on(power: i64, e: &Element, lambda_d: i64) -> Element {
    let mut out = Element::zero();
    for (m, v) in e.terms() {
        let f = QRat::q_pow(power * (lambda_d + m.weight().degree));
        out += &Element::from_monomial(m.clone(), v.scale(&f));
    }
    out
}

type XplusCache = HashMap<(i64, Vec<i64>, i64), Element>;

thread_local! {
    static COMMUTATORS: RefCell<HashMap<i64, HPolynomial>> = RefCell::new(HashMap::new());
    static XPLUS: RefCell<XplusCache> = RefCell::new(HashMap::new());
}

fn commutator(p: i64) -> HPolynomial {
    if let Some(c) = COMMUTATORS.with(|m| m.borrow().get(&p).cloned()) {
        return c;
    }
    let c = commutator_component(p);
    COMMUTATORS.with(|m| m.borrow_mut().insert(p, c.clone()));
    c
}

fn xplus_word(k: i64, word: &[i64], lambda_h: i64) -> Element {
    let key = (k, word.to_vec(), lambda_h);
    if let Some(hit) = XPLUS.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut out = Element::zero();
    for i in 0..word.len() {
        let suffix = normalize(&word[i + 1..], &Coeff::one());
        let mut r = commutator(k + word[i]).apply(&suffix, lambda_h);
        for &n in word[..i].iter().rev() {
            if r.is_zero() {
                break;
            }
            r = r.left_mul_x(n);
        }
        out += &r;
    }
    XPLUS.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

/// `x⁺_k`: kills `v_λ` and is commuted past each `x⁻_{nᵢ}`, leaving
/// `(ψ(k+nᵢ) − φ(k+nᵢ))/(q − q^{−1})` on the tail.
pub fn xplus_on(k: i64, e: &Element, lambda_h: i64) -> Element {
    let mut out = Element::zero();
    for (m, v) in e.terms() {
        out.add_assign_scaled(&xplus_word(k, m.indices(), lambda_h), v);
    }
    out
}
