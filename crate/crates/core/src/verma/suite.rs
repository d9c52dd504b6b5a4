//! The defining relations of the Drinfeld presentation at `γ = 1`, checked as
//! operator identities on monomial vectors of `M̄_q(λ)`.

use std::fmt;

use rayon::prelude::*;

use super::{act_on_element, commutator_component, h_coefficient, Generator, HighestWeight, VermaVector};
use crate::kashiwara::Domain;
use crate::qalgebra::{enumerate_up_to, Element, Monomial};
use crate::qcoeff::{Coeff, QRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleRelation {
    /// `[h_k, h_l] = 0`
    HH,
    /// `K x^±_k K^{−1} = q^{±2} x^±_k`
    KXMinus,
    KXPlus,
    /// `D x^±_k D^{−1} = q^k x^±_k`
    DXMinus,
    DXPlus,
    /// `D h_k D^{−1} = q^k h_k`
    DH,
    /// `[h_k, K] = 0`
    HK,
    /// `[h_k, x^±_l] = ±[2k]/k x^±_{k+l}`
    HXMinus,
    HXPlus,
    /// `[x⁺_k, x⁻_l] = (ψ(k+l) − φ(k+l))/(q − q^{−1})`
    XPlusXMinus,
    /// `x^±_{k+1}x^±_l − q^{±2}x^±_l x^±_{k+1} = q^{±2}x^±_k x^±_{l+1} − x^±_{l+1}x^±_k`
    SerrePlus,
    SerreMinus,
}

impl ModuleRelation {
    pub const ALL: [ModuleRelation; 12] = [
        ModuleRelation::HH,
        ModuleRelation::KXMinus,
        ModuleRelation::KXPlus,
        ModuleRelation::DXMinus,
        ModuleRelation::DXPlus,
        ModuleRelation::DH,
        ModuleRelation::HK,
        ModuleRelation::HXMinus,
        ModuleRelation::HXPlus,
        ModuleRelation::XPlusXMinus,
        ModuleRelation::SerrePlus,
        ModuleRelation::SerreMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModuleRelation::HH => "h-h",
            ModuleRelation::KXMinus => "K-xminus",
            ModuleRelation::KXPlus => "K-xplus",
            ModuleRelation::DXMinus => "D-xminus",
            ModuleRelation::DXPlus => "D-xplus",
            ModuleRelation::DH => "D-h",
            ModuleRelation::HK => "h-K",
            ModuleRelation::HXMinus => "h-xminus",
            ModuleRelation::HXPlus => "h-xplus",
            ModuleRelation::XPlusXMinus => "xplus-xminus",
            ModuleRelation::SerrePlus => "serre-xplus",
            ModuleRelation::SerreMinus => "serre-xminus",
        }
    }

    fn uses_h(self, which: usize) -> bool {
        use ModuleRelation::*;
        match self {
            HH => true,
            DH | HK | HXMinus | HXPlus => which == 0,
            _ => false,
        }
    }

    /// `LHS − RHS` as `(coefficient, generators left to right)` words.
    fn terms(self, k: i64, l: i64) -> Vec<(QRat, Vec<Generator>)> {
        use Generator::*;
        let one = QRat::one;
        let m1 = || QRat::from_int(-1);
        let q = QRat::q_pow;
        match self {
            ModuleRelation::HH => vec![(one(), vec![H(k), H(l)]), (m1(), vec![H(l), H(k)])],
            ModuleRelation::KXMinus => vec![(one(), vec![K(1), XMinus(k), K(-1)]), (-q(-2), vec![XMinus(k)])],
            ModuleRelation::KXPlus => vec![(one(), vec![K(1), XPlus(k), K(-1)]), (-q(2), vec![XPlus(k)])],
            ModuleRelation::DXMinus => vec![(one(), vec![D(1), XMinus(k), D(-1)]), (-q(k), vec![XMinus(k)])],
            ModuleRelation::DXPlus => vec![(one(), vec![D(1), XPlus(k), D(-1)]), (-q(k), vec![XPlus(k)])],
            ModuleRelation::DH => vec![(one(), vec![D(1), H(k), D(-1)]), (-q(k), vec![H(k)])],
            ModuleRelation::HK => vec![(one(), vec![H(k), K(1)]), (m1(), vec![K(1), H(k)])],
            ModuleRelation::HXMinus => vec![
                (one(), vec![H(k), XMinus(l)]),
                (m1(), vec![XMinus(l), H(k)]),
                (-h_coefficient(k), vec![XMinus(k + l)]),
            ],
            ModuleRelation::HXPlus => vec![
                (one(), vec![H(k), XPlus(l)]),
                (m1(), vec![XPlus(l), H(k)]),
                (h_coefficient(k), vec![XPlus(k + l)]),
            ],
            ModuleRelation::XPlusXMinus => vec![(one(), vec![XPlus(k), XMinus(l)]), (m1(), vec![XMinus(l), XPlus(k)])],
            ModuleRelation::SerrePlus => vec![
                (one(), vec![XPlus(k + 1), XPlus(l)]),
                (-q(2), vec![XPlus(l), XPlus(k + 1)]),
                (-q(2), vec![XPlus(k), XPlus(l + 1)]),
                (one(), vec![XPlus(l + 1), XPlus(k)]),
            ],
            ModuleRelation::SerreMinus => vec![
                (one(), vec![XMinus(k + 1), XMinus(l)]),
                (-q(-2), vec![XMinus(l), XMinus(k + 1)]),
                (-q(-2), vec![XMinus(k), XMinus(l + 1)]),
                (one(), vec![XMinus(l + 1), XMinus(k)]),
            ],
        }
    }

    /// `(LHS − RHS)(e · v_λ)`.
    pub fn residual(self, k: i64, l: i64, e: &Element, w: HighestWeight) -> Element {
        let mut out = Element::zero();
        for (c, word) in self.terms(k, l) {
            let mut cur = e.clone();
            for &g in word.iter().rev() {
                cur = act_on_element(g, &cur, w).expect("h indices are nonzero");
            }
            out += &cur.scale_qrat(&c);
        }
        if self == ModuleRelation::XPlusXMinus {
            out -= &commutator_component(k + l).apply(e, w.h());
        }
        out
    }
}

impl fmt::Display for ModuleRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleResidual {
    pub relation: ModuleRelation,
    pub components: (i64, i64),
    pub weight: HighestWeight,
    pub monomial: Monomial,
    pub residual: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSuiteReport {
    pub checked: usize,
    pub residuals: Vec<ModuleResidual>,
}

impl ModuleSuiteReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Every relation for every `(k, l) ∈ [lo, hi]²` (skipping `h_0`) on every
/// monomial vector of the domain, for each highest weight.
pub fn module_relation_suite(
    relations: &[ModuleRelation],
    weights: &[HighestWeight],
    (lo, hi): (i64, i64),
    domain: Domain,
) -> ModuleSuiteReport {
    let basis = enumerate_up_to(domain.max_length, domain.lo, domain.hi);
    let mut grid = Vec::new();
    for &rel in relations {
        for &w in weights {
            for k in lo..=hi {
                for l in lo..=hi {
                    if (rel.uses_h(0) && k == 0) || (rel.uses_h(1) && l == 0) {
                        continue;
                    }
                    for m in &basis {
                        grid.push((rel, w, k, l, m.clone()));
                    }
                }
            }
        }
    }
    let checked = grid.len();
    let residuals = grid
        .into_par_iter()
        .filter_map(|(relation, weight, k, l, monomial)| {
            let e = Element::from_monomial(monomial.clone(), Coeff::one());
            let residual = relation.residual(k, l, &e, weight);
            (!residual.is_zero()).then_some(ModuleResidual {
                relation,
                components: (k, l),
                weight,
                monomial,
                residual,
            })
        })
        .collect();
    ModuleSuiteReport { checked, residuals }
}

/// A sequence of `x⁺` indices (applied left to right) carrying the vector to a
/// nonzero multiple of a highest weight vector, searched depth-first with
/// indices in `[lo, hi]`.
pub fn simplicity_probe(v: &VermaVector, lo: i64, hi: i64) -> Option<Vec<i64>> {
    fn reaches_top(v: &VermaVector) -> bool {
        !v.is_zero() && v.terms().all(|(_, m, _)| m.is_empty())
    }
    fn go(v: &VermaVector, lo: i64, hi: i64, path: &mut Vec<i64>, depth: usize) -> bool {
        if reaches_top(v) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        for k in lo..=hi {
            let next = v.act(Generator::XPlus(k)).expect("x⁺ is total");
            if next.is_zero() {
                continue;
            }
            path.push(k);
            if go(&next, lo, hi, path, depth - 1) {
                return true;
            }
            path.pop();
        }
        false
    }
    if v.is_zero() {
        return None;
    }
    let depth = v.terms().map(|(_, m, _)| m.len()).max().unwrap_or(0);
    let mut path = Vec::new();
    go(v, lo, hi, &mut path, depth).then_some(path)
}
