//! Reduced imaginary Verma modules `M̄_q(λ)` at `γ = 1`, their finite direct
//! sums, and the operators acting on them.

mod act;
mod hpoly;
mod intertwine;
mod suite;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kashiwara::{omega_apply, Omega};
use crate::qalgebra::{Element, Monomial};
use crate::qcoeff::{Coeff, QRat};

pub use act::{d_on, h_coefficient, h_on, k_on, xplus_on};
pub use hpoly::{commutator_component, phi_component, psi_component, HPolynomial};
pub use intertwine::{verify_intertwining, IntertwiningFailure, IntertwiningReport, ModuleMap};
pub use suite::{module_relation_suite, simplicity_probe, ModuleRelation, ModuleResidual, ModuleSuiteReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VermaError {
    #[error("not in reduced category: lambda(h) must be nonzero")]
    NotReduced,
    #[error("h_0 is not a generator")]
    HZero,
    #[error("no component {0} in a sum of {1}")]
    UnknownComponent(usize, usize),
}

/// `λ` with `λ(c) = 0`, given by the integers `λ(h) ≠ 0` and `λ(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighestWeight {
    h: i64,
    d: i64,
}

impl HighestWeight {
    pub fn new(h: i64, d: i64) -> Result<Self, VermaError> {
        if h == 0 {
            return Err(VermaError::NotReduced);
        }
        Ok(HighestWeight { h, d })
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn d(&self) -> i64 {
        self.d
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h={},d={})", self.h, self.d)
    }
}

/// `M = ⊕ᵢ M̄_q(λᵢ)`, components numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectSum {
    weights: Vec<HighestWeight>,
}

impl DirectSum {
    pub fn new(weights: Vec<HighestWeight>) -> Self {
        DirectSum { weights }
    }

    pub fn single(w: HighestWeight) -> Self {
        DirectSum { weights: vec![w] }
    }

    pub fn weights(&self) -> &[HighestWeight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, id: usize) -> Result<HighestWeight, VermaError> {
        id.checked_sub(1)
            .and_then(|i| self.weights.get(i).copied())
            .ok_or(VermaError::UnknownComponent(id, self.weights.len()))
    }

    pub fn zero(&self) -> VermaVector {
        VermaVector {
            components: BTreeMap::new(),
            ambient: self.clone(),
        }
    }

    /// `e · v_{λ_id}` placed in component `id`.
    pub fn inject(&self, id: usize, e: &Element) -> Result<VermaVector, VermaError> {
        self.weight(id)?;
        let mut v = self.zero();
        v.set(id, e.at_gamma_one());
        Ok(v)
    }

    pub fn highest(&self, id: usize) -> Result<VermaVector, VermaError> {
        self.inject(id, &Element::one())
    }

    /// The component `id` of `v`.
    pub fn project(&self, id: usize, v: &VermaVector) -> Result<Element, VermaError> {
        self.weight(id)?;
        Ok(v.component(id))
    }
}

/// A vector of a direct sum, stored componentwise as `Σᵢ eᵢ · v_{λᵢ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VermaVector {
    components: BTreeMap<usize, Element>,
    ambient: DirectSum,
}

impl VermaVector {
    fn set(&mut self, id: usize, e: Element) {
        if e.is_zero() {
            self.components.remove(&id);
        } else {
            self.components.insert(id, e);
        }
    }

    pub fn ambient(&self) -> &DirectSum {
        &self.ambient
    }

    pub fn component(&self, id: usize) -> Element {
        self.components.get(&id).cloned().unwrap_or_default()
    }

    /// Nonzero components in increasing id.
    pub fn components(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.components.iter().map(|(i, e)| (*i, e))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `(component, monomial, coefficient)` for every term.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Monomial, &Coeff)> {
        self.components
            .iter()
            .flat_map(|(i, e)| e.terms().map(move |(m, c)| (*i, m, c)))
    }

    /// Applies `f(e, λ)` to every component.
    pub fn map_components<F>(&self, f: F) -> Result<VermaVector, VermaError>
    where
        F: Fn(&Element, HighestWeight) -> Result<Element, VermaError>,
    {
        let mut out = self.ambient.zero();
        for (&id, e) in &self.components {
            let w = self.ambient.weight(id)?;
            out.set(id, f(e, w)?);
        }
        Ok(out)
    }

    pub fn add(&self, other: &VermaVector) -> VermaVector {
        let mut out = self.clone();
        for (&id, e) in &other.components {
            let s = &out.component(id) + e;
            out.set(id, s);
        }
        out
    }

    pub fn sub(&self, other: &VermaVector) -> VermaVector {
        self.add(&other.scale(&QRat::from_int(-1)))
    }

    pub fn scale(&self, c: &QRat) -> VermaVector {
        let mut out = self.ambient.zero();
        for (&id, e) in &self.components {
            out.set(id, e.scale_qrat(c));
        }
        out
    }

    /// A copy of the same components inside another ambient sum.
    pub fn with_ambient(&self, ambient: DirectSum) -> VermaVector {
        VermaVector {
            components: self.components.clone(),
            ambient,
        }
    }

    pub fn act(&self, g: Generator) -> Result<VermaVector, VermaError> {
        self.map_components(|e, w| act_on_element(g, e, w))
    }

    pub fn act_chevalley(&self, c: Chevalley) -> Result<VermaVector, VermaError> {
        let mut cur = self.clone();
        for &g in c.drinfeld().iter().rev() {
            cur = cur.act(g)?;
        }
        Ok(cur)
    }

    /// `x̃⁻_m`.
    pub fn tilde_xminus(&self, m: i64) -> VermaVector {
        self.act(Generator::XMinus(m)).expect("x⁻ is total")
    }

    /// `Ω̃_ψ(m)`: `Ω_ψ(m)` on the `N_q⁻` part, specialized at `γ = 1`.
    pub fn tilde_omega(&self, m: i64) -> VermaVector {
        self.map_components(|e, _| Ok(omega_apply(Omega::psi(m), e).at_gamma_one()))
            .expect("Ω is total")
    }
}

impl fmt::Display for VermaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (id, e)) in self.components.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            let w = self.ambient.weight(*id).map_err(|_| fmt::Error)?;
            write!(f, "[{id}] {e} @ {w}")?;
        }
        Ok(())
    }
}

/// A Drinfeld generator, or a power of `K` or `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    XMinus(i64),
    XPlus(i64),
    H(i64),
    K(i64),
    D(i64),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::XMinus(n) => write!(f, "x-[{n}]"),
            Generator::XPlus(n) => write!(f, "x+[{n}]"),
            Generator::H(n) => write!(f, "h[{n}]"),
            Generator::K(p) => write!(f, "K^{p}"),
            Generator::D(p) => write!(f, "D^{p}"),
        }
    }
}

/// The action on `e · v_λ`.
pub fn act_on_element(g: Generator, e: &Element, w: HighestWeight) -> Result<Element, VermaError> {
    Ok(match g {
        Generator::XMinus(n) => e.left_mul_x(n),
        Generator::XPlus(n) => xplus_on(n, e, w.h()),
        Generator::H(n) => h_on(n, e)?,
        Generator::K(p) => k_on(p, e, w.h()),
        Generator::D(p) => d_on(p, e, w.d()),
    })
}

/// Chevalley generators of `U_q(ŝl(2))` and the inverses of the group-likes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chevalley {
    E0,
    E1,
    F0,
    F1,
    K0,
    K1,
    D,
    K0Inv,
    K1Inv,
    DInv,
}

impl Chevalley {
    pub const ALL: [Chevalley; 10] = [
        Chevalley::E0,
        Chevalley::E1,
        Chevalley::F0,
        Chevalley::F1,
        Chevalley::K0,
        Chevalley::K1,
        Chevalley::D,
        Chevalley::K0Inv,
        Chevalley::K1Inv,
        Chevalley::DInv,
    ];

    /// The image as a product of Drinfeld generators, written left to right.
    pub fn drinfeld(self) -> Vec<Generator> {
        use Generator::*;
        match self {
            Chevalley::E0 => vec![XMinus(1), K(-1)],
            Chevalley::F0 => vec![K(1), XPlus(-1)],
            Chevalley::E1 => vec![XPlus(0)],
            Chevalley::F1 => vec![XMinus(0)],
            Chevalley::K0 => vec![K(-1)],
            Chevalley::K1 => vec![K(1)],
            Chevalley::D => vec![D(1)],
            Chevalley::K0Inv => vec![K(1)],
            Chevalley::K1Inv => vec![K(-1)],
            Chevalley::DInv => vec![D(-1)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chevalley::E0 => "E0",
            Chevalley::E1 => "E1",
            Chevalley::F0 => "F0",
            Chevalley::F1 => "F1",
            Chevalley::K0 => "K0",
            Chevalley::K1 => "K1",
            Chevalley::D => "D",
            Chevalley::K0Inv => "K0^-1",
            Chevalley::K1Inv => "K1^-1",
            Chevalley::DInv => "D^-1",
        }
    }
}

impl std::str::FromStr for Chevalley {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Chevalley::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown Chevalley generator '{s}'"))
    }
}

/// Smallest `t ≤ cap` with `(x⁺_n)^t v = 0`.
pub fn nilpotency_probe(n: i64, v: &VermaVector, cap: usize) -> Option<usize> {
    if v.is_zero() {
        return Some(0);
    }
    let mut cur = v.clone();
    for t in 1..=cap {
        cur = cur.act(Generator::XPlus(n)).expect("x⁺ is total");
        if cur.is_zero() {
            return Some(t);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::parse_element;

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    fn single(h: i64, d: i64) -> DirectSum {
        DirectSum::single(HighestWeight::new(h, d).unwrap())
    }

    #[test]
    fn reduced_category_only() {
        assert_eq!(HighestWeight::new(0, 1), Err(VermaError::NotReduced));
    }

    #[test]
    fn tilde_xminus_examples() {
        let m = single(1, 0);
        let v = m.inject(1, &el("x[2]")).unwrap();
        assert_eq!(v.tilde_xminus(0).component(1), el("q^2 x[2]x[0] + (q^2-1) x[1]x[1]"));
        assert_eq!(m.highest(1).unwrap().tilde_xminus(1).component(1), el("x[1]"));
        assert!(m.zero().tilde_xminus(0).is_zero());
    }

    #[test]
    fn tilde_omega_examples() {
        let m = single(1, 0);
        let v = m.inject(1, &el("x[1]x[0]")).unwrap();
        assert_eq!(v.tilde_omega(-1).component(1), el("x[0]"));
        assert_eq!(v.tilde_omega(0).component(1), el("q^2 x[1]"));
        assert!(m.highest(1).unwrap().tilde_omega(5).is_zero());
    }

    #[test]
    fn chevalley_examples() {
        for j in [1, 2, -3] {
            let m = single(j, 0);
            let v = m.inject(1, &el("x[0]")).unwrap();
            assert_eq!(
                v.act_chevalley(Chevalley::E1).unwrap().component(1),
                el(&format!("[{j}]"))
            );
        }
        let m = single(2, 0);
        let v = m.highest(1).unwrap();
        assert_eq!(v.act_chevalley(Chevalley::F1).unwrap().component(1), el("x[0]"));
        assert_eq!(v.act_chevalley(Chevalley::K0).unwrap().component(1), el("q^-2"));
    }

    #[test]
    fn direct_sum_examples() {
        let s = DirectSum::new(vec![
            HighestWeight::new(1, 0).unwrap(),
            HighestWeight::new(3, 0).unwrap(),
        ]);
        assert_eq!(s.len(), 2);
        let e = el("x[1]x[0] + 2 x[2]x[-1]");
        let v = s.inject(1, &e).unwrap();
        assert_eq!(s.project(1, &v).unwrap(), e);
        assert!(s.project(2, &v).unwrap().is_zero());
        assert!(s.inject(3, &e).is_err());
        assert_eq!(v.to_string(), "[1] 2*x[2]x[-1] + x[1]x[0] @ (h=1,d=0)");
    }

    #[test]
    fn nilpotency_examples() {
        let m = single(1, 0);
        assert_eq!(nilpotency_probe(0, &m.inject(1, &el("x[0]")).unwrap(), 3), Some(2));
        assert_eq!(nilpotency_probe(0, &m.highest(1).unwrap(), 1), Some(1));
        let t = nilpotency_probe(2, &m.inject(1, &el("x[1]x[0]")).unwrap(), 4).unwrap();
        assert!(t <= 3);
    }
}
