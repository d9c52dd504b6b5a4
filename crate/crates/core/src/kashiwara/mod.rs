//! The annihilation operators `Ω_ψ(p)` and `Ω_φ(p)` on `N_q⁻`.
//!
//! Both are evaluated by peeling the leftmost generator:
//!
//! ```text
//! Ω_ψ(k)(x_m w) = δ_{k,−m} γ^k w  + Σ_{r≥0} g(r)   γ^r x_{m+r} Ω_ψ(k−r)(w)
//! Ω_φ(k)(x_m w) = δ_{k,−m} γ^{−k} w + Σ_{r≥0} g_q(r) γ^r x_{m−r} Ω_φ(k+r)(w)
//! ```
//!
//! `Ω_ψ(j)(w)` vanishes for `j < −max(w)` and `Ω_φ(j)(w)` for `j > −min(w)`,
//! which makes both sums finite. The closed slot-by-slot expansions are kept
//! as independent oracles.

mod relations;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qalgebra::{normalize, Element, Monomial};
use crate::qcoeff::{g_coeff, gq_coeff, Coeff, HalfExp, QRat};

pub use relations::{
    check_identities, check_kashiwara_relation, Domain, Identity, Op, OpTerm, RelationKind, RelationReport,
    RelationResidual,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Psi,
    Phi,
}

/// `Ω_ψ(p)` or `Ω_φ(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Omega {
    pub family: Family,
    pub component: i64,
}

impl Omega {
    pub fn psi(p: i64) -> Self {
        Omega {
            family: Family::Psi,
            component: p,
        }
    }

    pub fn phi(p: i64) -> Self {
        Omega {
            family: Family::Phi,
            component: p,
        }
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.family {
            Family::Psi => "psi",
            Family::Phi => "phi",
        };
        write!(f, "Omega_{s}({})", self.component)
    }
}

pub(crate) fn g(r: i64) -> QRat {
    g_coeff(r).expect("nonnegative index")
}

pub(crate) fn gq(r: i64) -> QRat {
    gq_coeff(r).expect("nonnegative index")
}

fn gamma_term(e: i64, c: QRat) -> Coeff {
    Coeff::gamma_term(HalfExp(2 * e), c)
}

type CacheKey = (Family, i64, Vec<i64>);

thread_local! {
    static CACHE: RefCell<HashMap<CacheKey, Element>> = RefCell::new(HashMap::new());
}

/// Drops the per-thread memo table.
pub fn clear_omega_cache() {
    CACHE.with(|c| c.borrow_mut().clear());
}

/// Applies the operator to a (not necessarily normal) word by the recursion.
pub fn omega_apply_word(op: Omega, word: &[i64]) -> Element {
    let key = (op.family, op.component, word.to_vec());
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let out = match op.family {
        Family::Psi => psi_word(op.component, word),
        Family::Phi => phi_word(op.component, word),
    };
    CACHE.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

fn psi_word(k: i64, word: &[i64]) -> Element {
    let Some((&m, rest)) = word.split_first() else {
        return Element::zero();
    };
    let mut out = Element::zero();
    if k == -m {
        out += &normalize(rest, &Coeff::gamma_pow(k));
    }
    let Some(&top) = rest.iter().max() else {
        return out;
    };
    for r in 0..=k + top {
        let inner = omega_apply_word(Omega::psi(k - r), rest);
        if !inner.is_zero() {
            out.add_assign_scaled(&inner.left_mul_x(m + r), &gamma_term(r, g(r)));
        }
    }
    out
}

fn phi_word(k: i64, word: &[i64]) -> Element {
    let Some((&m, rest)) = word.split_first() else {
        return Element::zero();
    };
    let mut out = Element::zero();
    if k == -m {
        out += &normalize(rest, &Coeff::gamma_pow(-k));
    }
    let Some(&bottom) = rest.iter().min() else {
        return out;
    };
    for r in 0..=-bottom - k {
        let inner = omega_apply_word(Omega::phi(k + r), rest);
        if !inner.is_zero() {
            out.add_assign_scaled(&inner.left_mul_x(m - r), &gamma_term(r, gq(r)));
        }
    }
    out
}

/// `Ω(e)`, extended linearly over the monomials of `e`.
pub fn omega_apply(op: Omega, e: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        out.add_assign_scaled(&omega_apply_word(op, m.indices()), c);
    }
    out
}

/// All `(r₁,…,r_parts)` with `rᵢ ≥ 0` and `Σrᵢ = total`.
fn weak_compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if total < 0 {
        return Vec::new();
    }
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut tail in weak_compositions(total - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn closed_form(p: i64, word: &[i64], family: Family) -> Element {
    let mut out = Element::zero();
    for l in 0..word.len() {
        let (before, removed, after) = (&word[..l], word[l], &word[l + 1..]);
        let total = match family {
            Family::Psi => p + removed,
            Family::Phi => -removed - p,
        };
        for rs in weak_compositions(total, before.len()) {
            let mut c = QRat::one();
            let mut w = Vec::with_capacity(word.len() - 1);
            for (&n, &r) in before.iter().zip(&rs) {
                match family {
                    Family::Psi => {
                        c = &c * &g(r);
                        w.push(n + r);
                    }
                    Family::Phi => {
                        c = &c * &gq(r);
                        w.push(n - r);
                    }
                }
            }
            w.extend_from_slice(after);
            let gamma = match family {
                Family::Psi => p,
                Family::Phi => -p,
            };
            out += &normalize(&w, &gamma_term(gamma, c));
        }
    }
    out
}

/// `Ω_ψ(p)` by direct expansion over the removed slot.
pub fn omega_psi_closed(p: i64, m: &Monomial) -> Element {
    closed_form(p, m.indices(), Family::Psi)
}

/// `Ω_φ(p)` by direct expansion over the removed slot.
pub fn omega_phi_closed(p: i64, m: &Monomial) -> Element {
    closed_form(p, m.indices(), Family::Phi)
}

/// Whether the slot constraints admit any term of `Ω(p)` on the word:
/// slot `l` contributes only if the shift it must absorb is reachable.
pub fn omega_support_admits(op: Omega, word: &[i64]) -> bool {
    let p = op.component;
    word.iter().enumerate().any(|(l, &n)| {
        let total = match op.family {
            Family::Psi => p + n,
            Family::Phi => -n - p,
        };
        if l == 0 {
            total == 0
        } else {
            total >= 0
        }
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::qalgebra::{enumerate_up_to, parse_element, Weight};

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(omega_apply(Omega::psi(0), &el("x[0]")), Element::one());
        assert!(omega_apply(Omega::psi(3), &Element::one()).is_zero());
        assert!(omega_apply(Omega::phi(-3), &Element::one()).is_zero());
        assert_eq!(omega_apply(Omega::psi(0), &el("x[1]x[0]")), el("q^2 x[1]"));
        assert_eq!(omega_apply(Omega::psi(-1), &el("x[1]x[0]")), el("g^-1 x[0]"));
        assert_eq!(omega_apply(Omega::psi(-1), &el("x[1]x[1]")), el("(1+q^2) g^-1 x[1]"));
    }

    #[test]
    fn closed_examples() {
        let m = |v: &[i64]| Monomial::new(v.to_vec());
        assert_eq!(omega_psi_closed(0, &m(&[0])), Element::one());
        assert_eq!(omega_psi_closed(0, &m(&[1, 0])), el("q^2 x[1]"));
        assert!(omega_psi_closed(5, &m(&[0])).is_zero());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(omega_apply(Omega::phi(0), &el("x[0]")), Element::one());
        assert_eq!(omega_apply(Omega::phi(1), &el("x[-1]")), el("g^-1"));
        assert_eq!(omega_apply(Omega::phi(0), &el("x[1]x[0]")), el("q^-2 x[1]"));
        assert_eq!(omega_apply_word(Omega::phi(0), &[0, 1]), el("x[1]"));
    }

    #[test]
    fn oracle_equivalence_psi_and_phi() {
        for m in enumerate_up_to(3, -2, 2) {
            for p in -5..=5 {
                assert_eq!(
                    omega_apply(Omega::psi(p), &Element::from_monomial(m.clone(), Coeff::one())),
                    omega_psi_closed(p, &m),
                    "psi {p} on {m}"
                );
                assert_eq!(
                    omega_apply(Omega::phi(p), &Element::from_monomial(m.clone(), Coeff::one())),
                    omega_phi_closed(p, &m),
                    "phi {p} on {m}"
                );
            }
        }
    }

    #[test]
    fn locality_and_weight_shift() {
        for m in enumerate_up_to(3, -2, 2) {
            let w = m.weight();
            for p in -6..=6 {
                for op in [Omega::psi(p), Omega::phi(p)] {
                    let out = omega_apply_word(op, m.indices());
                    if out.is_zero() {
                        continue;
                    }
                    assert!(omega_support_admits(op, m.indices()), "{op} on {m}");
                    assert_eq!(
                        out.weight_of().ok(),
                        Some(Weight::new(w.length - 1, w.degree + p)),
                        "{op} on {m}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn recursion_is_well_defined(w in proptest::collection::vec(-2i64..=2, 0..=4), p in -4i64..=4) {
            for op in [Omega::psi(p), Omega::phi(p)] {
                let direct = omega_apply_word(op, &w);
                let via_normal = omega_apply(op, &normalize(&w, &Coeff::one()));
                prop_assert_eq!(direct, via_normal);
            }
        }
    }
}
