//! The algebra `N_q⁻`: words in the generators `x⁻_n` modulo the quantum Serre
//! relations, with the PBW basis of weakly decreasing monomials.

mod normal;
mod parse;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcoeff::{Coeff, QRat};

pub use normal::{
    confluence_probe, normalize, normalize_with, rewrite_measure, rewrite_once, ConfluenceReport, ConfluenceWitness,
    Strategy,
};
pub use parse::{parse_coeff, parse_element, ParseError};

/// A word `x⁻_{n₁}⋯x⁻_{n_k}`.
///
/// Ordered by length, then lexicographically with larger indices first, which
/// is the order terms are printed in.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(indices: Vec<i64>) -> Self {
        Monomial(indices)
    }

    pub(crate) fn from_normal(indices: Vec<i64>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] >= w[1]));
        Monomial(indices)
    }

    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn indices(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weakly decreasing indices.
    pub fn is_normal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn weight(&self) -> Weight {
        Weight {
            length: self.0.len(),
            degree: self.0.iter().sum(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for n in &self.0 {
            write!(f, "x[{n}]")?;
        }
        Ok(())
    }
}

/// The weight `−kα₁ + mδ` of a homogeneous element: `k` factors, index sum `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub length: usize,
    pub degree: i64,
}

impl Weight {
    pub fn new(length: usize, degree: i64) -> Self {
        Weight { length, degree }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.length, self.degree)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("the zero element has no weight")]
    ZeroElement,
    #[error("inhomogeneous element: {first} has weight {first_weight} but {second} has weight {second_weight}")]
    Inhomogeneous {
        first: Monomial,
        first_weight: Weight,
        second: Monomial,
        second_weight: Weight,
    },
}

/// A finite combination of normal monomials with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Self::scalar(Coeff::one())
    }

    pub fn scalar(c: Coeff) -> Self {
        let mut e = Element::zero();
        e.add_term(Monomial::unit(), c);
        e
    }

    /// The generator `x⁻_n`.
    pub fn x(n: i64) -> Self {
        let mut e = Element::zero();
        e.add_term(Monomial(vec![n]), Coeff::one());
        e
    }

    /// `c · x⁻_{w₁}⋯x⁻_{w_k}`, normalized.
    pub fn from_word(word: &[i64], c: &Coeff) -> Self {
        normalize(word, c)
    }

    pub fn from_monomial(m: Monomial, c: Coeff) -> Self {
        if m.is_normal() {
            let mut e = Element::zero();
            e.add_term(m, c);
            e
        } else {
            normalize(m.indices(), &c)
        }
    }

    /// Adds `c · m` for a normal monomial `m`.
    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Coeff {
        self.coeff_of(&Monomial::unit())
    }

    /// The scalar value, if this element has no monomial of positive length.
    pub fn as_scalar(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Monomial::unit()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Element {
        let mut out = Element::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn scale_qrat(&self, c: &QRat) -> Element {
        let mut out = Element::zero();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.scale(c));
        }
        out
    }

    pub fn add_assign_scaled(&mut self, other: &Element, c: &Coeff) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    /// Product in `N_q⁻`: concatenation followed by normal ordering.
    pub fn multiply(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut w = m1.0.clone();
                w.extend_from_slice(&m2.0);
                out += &normalize(&w, &(c1 * c2));
            }
        }
        out
    }

    /// Left multiplication by the generator `x⁻_n`.
    pub fn left_mul_x(&self, n: i64) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            let mut w = Vec::with_capacity(m.len() + 1);
            w.push(n);
            w.extend_from_slice(&m.0);
            if m.0.first().is_none_or(|&h| n >= h) {
                out.add_term(Monomial(w), c.clone());
            } else {
                out += &normalize(&w, c);
            }
        }
        out
    }

    /// The common weight of all terms.
    pub fn weight_of(&self) -> Result<Weight, AlgebraError> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(AlgebraError::ZeroElement)?;
        let w = first.weight();
        for m in it {
            if m.weight() != w {
                return Err(AlgebraError::Inhomogeneous {
                    first: first.clone(),
                    first_weight: w,
                    second: m.clone(),
                    second_weight: m.weight(),
                });
            }
        }
        Ok(w)
    }

    /// Specializes `γ = 1` in every coefficient.
    pub fn at_gamma_one(&self) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.at_gamma_one().into());
        }
        out
    }

    /// Restriction to the terms of a given weight.
    pub fn weight_component(&self, w: Weight) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl std::ops::AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl std::ops::Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&Coeff::from_int(-1))
    }
}

impl Element {
    /// Text of `e · v`, with `suffix` standing for `v` after each monomial.
    pub fn display_applied(&self, suffix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = if m.is_empty() { String::new() } else { m.to_string() };
            let base = format!("{mono}{suffix}");
            let term = if base.is_empty() {
                c.to_string()
            } else if c.is_one() {
                base
            } else if (-c).is_one() {
                format!("-{base}")
            } else if c.is_atomic() {
                format!("{c}*{base}")
            } else {
                format!("({c})*{base}")
            };
            match (i, term.strip_prefix('-')) {
                (0, _) => out.push_str(&term),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_applied(""))
    }
}

/// All normal monomials of the given length with indices in `[lo, hi]`,
/// optionally of a fixed degree, in lexicographically decreasing order.
pub fn enumerate_basis(length: usize, lo: i64, hi: i64, degree: Option<i64>) -> Vec<Monomial> {
    fn go(
        remaining: usize,
        lo: i64,
        top: i64,
        sum: i64,
        target: Option<i64>,
        cur: &mut Vec<i64>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            if target.is_none_or(|t| t == sum) {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        for n in (lo..=top).rev() {
            if let Some(t) = target {
                let r = remaining as i64;
                // remaining indices lie in [lo, n]
                if sum + n * r < t {
                    break;
                }
                if sum + n + lo * (r - 1) > t {
                    continue;
                }
            }
            cur.push(n);
            go(remaining - 1, lo, n, sum + n, target, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        go(length, lo, hi, 0, degree, &mut Vec::new(), &mut out);
    } else if length == 0 {
        out.push(Monomial::unit());
    }
    out
}

/// Normal monomials of every length `0..=max_length` with indices in `[lo, hi]`.
pub fn enumerate_up_to(max_length: usize, lo: i64, hi: i64) -> Vec<Monomial> {
    (0..=max_length)
        .flat_map(|k| enumerate_basis(k, lo, hi, None))
        .collect()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn q2() -> Coeff {
        Coeff::q_pow(2)
    }

    fn mono(v: &[i64]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    fn word(v: &[i64]) -> Element {
        Element::from_word(v, &Coeff::one())
    }

    #[test]
    fn serre_adjacent() {
        assert_eq!(word(&[0, 1]), Element::from_monomial(mono(&[1, 0]), q2()));
        assert_eq!(word(&[1, 0]), Element::from_monomial(mono(&[1, 0]), Coeff::one()));
    }

    #[test]
    fn serre_gap_two() {
        let mut expect = Element::from_monomial(mono(&[2, 0]), q2());
        expect.add_term(mono(&[1, 1]), &q2() - &Coeff::one());
        assert_eq!(word(&[0, 2]), expect);
        assert_eq!(Element::x(0).multiply(&Element::x(2)), expect);
        assert_eq!(expect.weight_of().unwrap(), Weight::new(2, 2));
    }

    #[test]
    fn multiply_units_and_ordered() {
        let a = word(&[2, -1]);
        assert_eq!(Element::one().multiply(&a), a);
        assert_eq!(a.multiply(&Element::one()), a);
        assert_eq!(Element::x(1).multiply(&Element::x(0)), word(&[1, 0]));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(word(&[2, 0]).weight_of().unwrap(), Weight::new(2, 2));
        assert_eq!(Element::one().weight_of().unwrap(), Weight::new(0, 0));
        assert_eq!(Element::zero().weight_of(), Err(AlgebraError::ZeroElement));
        let mixed = &Element::x(0) + &Element::x(1);
        match mixed.weight_of() {
            Err(AlgebraError::Inhomogeneous { first, second, .. }) => {
                assert_eq!(first, mono(&[1]));
                assert_eq!(second, mono(&[0]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_basis(2, 0, 1, None),
            vec![mono(&[1, 1]), mono(&[1, 0]), mono(&[0, 0])]
        );
        assert_eq!(enumerate_basis(2, 0, 2, Some(2)), vec![mono(&[2, 0]), mono(&[1, 1])]);
        assert_eq!(enumerate_basis(0, -3, 3, None), vec![Monomial::unit()]);
    }

    #[test]
    fn enumerate_degree_filter_matches_brute_force() {
        for len in 0..=4 {
            for d in -6..=6 {
                let brute: Vec<_> = enumerate_basis(len, -2, 2, None)
                    .into_iter()
                    .filter(|m| m.weight().degree == d)
                    .collect();
                assert_eq!(enumerate_basis(len, -2, 2, Some(d)), brute, "len {len} degree {d}");
            }
        }
    }

    #[test]
    fn serre_relation_is_zero() {
        // x_l x_{k+1} − q² x_{k+1} x_l − q² x_{l+1} x_k + x_k x_{l+1} = 0 in N_q⁻
        for k in -2..=2 {
            for l in -2..=2 {
                let mut r = word(&[l, k + 1]);
                r -= &word(&[k + 1, l]).scale(&q2());
                r -= &word(&[l + 1, k]).scale(&q2());
                r += &word(&[k, l + 1]);
                assert!(r.is_zero(), "k = {k}, l = {l}: {r}");
            }
        }
    }

    #[test]
    fn display_element() {
        assert_eq!(word(&[0, 2]).to_string(), "q^2*x[2]x[0] + (-1+q^2)*x[1]x[1]");
        assert_eq!(Element::zero().to_string(), "0");
        let e = &Element::one() - &Element::x(3);
        assert_eq!(e.to_string(), "1 - x[3]");
    }

    fn arb_word() -> impl proptest::strategy::Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, 0..=5)
    }

    fn short_word() -> impl proptest::strategy::Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, 0..=3)
    }

    proptest! {
        #[test]
        fn strategies_agree(w in arb_word()) {
            let l = normalize_with(&w, &Coeff::one(), super::Strategy::LeftmostFirst);
            let r = normalize_with(&w, &Coeff::one(), super::Strategy::RightmostFirst);
            prop_assert_eq!(l, r);
        }

        #[test]
        fn normalization_preserves_weight(w in arb_word()) {
            let e = word(&w);
            prop_assume!(!e.is_zero());
            let expect = Weight::new(w.len(), w.iter().sum());
            prop_assert_eq!(e.weight_of().unwrap(), expect);
        }

        #[test]
        fn multiplication_is_associative(a in short_word(), b in short_word(), c in short_word()) {
            let (a, b, c) = (word(&a), word(&b), word(&c));
            prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        }
    }
}
