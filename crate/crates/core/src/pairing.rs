//! The symmetric bilinear form on `N_q⁻` (at `γ = 1`) characterized by
//! `(x⁻_m a, b) = (a, Ω_ψ(−m) b)` and `(1, 1) = 1`.

use std::cell::RefCell;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::kashiwara::{omega_apply, Omega};
use crate::qalgebra::{enumerate_basis, AlgebraError, Element, Monomial, Weight};
use crate::qcoeff::{Coeff, HalfExp, QRat, Valuation};

type PairCache = HashMap<(Vec<i64>, Vec<i64>), QRat>;

thread_local! {
    static PAIR_CACHE: RefCell<PairCache> = RefCell::new(HashMap::new());
}

fn pair_words(a: &[i64], b: &Monomial) -> QRat {
    if a.len() != b.len() {
        return QRat::zero();
    }
    let key = (a.to_vec(), b.indices().to_vec());
    if let Some(v) = PAIR_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let v = match a.split_first() {
        None => QRat::one(),
        Some((&m, rest)) => {
            let b1 = Element::from_monomial(b.clone(), Coeff::one());
            let reduced = omega_apply(Omega::psi(-m), &b1).at_gamma_one();
            pair_with_element(rest, &reduced)
        }
    };
    PAIR_CACHE.with(|c| c.borrow_mut().insert(key, v.clone()));
    v
}

fn pair_with_element(a: &[i64], b: &Element) -> QRat {
    let mut acc = QRat::zero();
    for (m, c) in b.terms() {
        let v = pair_words(a, m);
        if !v.is_zero() {
            acc = &acc + &(&v * &c.at_gamma_one());
        }
    }
    acc
}

/// `(a, b)` with both arguments specialized at `γ = 1`.
pub fn pair(a: &Element, b: &Element) -> QRat {
    let b = b.at_gamma_one();
    let mut acc = QRat::zero();
    for (m, c) in a.at_gamma_one().terms() {
        let v = pair_with_element(m.indices(), &b);
        if !v.is_zero() {
            acc = &acc + &(&v * &c.at_gamma_one());
        }
    }
    acc
}

pub fn pair_monomials(a: &Monomial, b: &Monomial) -> QRat {
    pair_words(a.indices(), b)
}

/// Form values on the normal monomials of one weight inside a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub weight: Weight,
    pub basis: Vec<Monomial>,
    pub entries: Vec<Vec<QRat>>,
}

pub fn gram(weight: Weight, lo: i64, hi: i64) -> GramMatrix {
    let basis = enumerate_basis(weight.length, lo, hi, Some(weight.degree));
    gram_of(weight, basis)
}

pub fn gram_of(weight: Weight, basis: Vec<Monomial>) -> GramMatrix {
    let n = basis.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<QRat> = cells
        .par_iter()
        .map(|&(i, j)| pair_monomials(&basis[i], &basis[j]))
        .collect();
    let mut entries = vec![vec![QRat::zero(); n]; n];
    for (&(i, j), v) in cells.iter().zip(values) {
        entries[j][i] = v.clone();
        entries[i][j] = v;
    }
    GramMatrix { weight, basis, entries }
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Adds `delta` to the `(i, j)` entry only, leaving the transpose alone.
    pub fn perturb(&mut self, i: usize, j: usize, delta: &QRat) {
        self.entries[i][j] = &self.entries[i][j] + delta;
    }

    /// Entrywise class modulo `q²A₀`; `None` marks entries off `A₀`.
    pub fn residues_mod_q2(&self) -> Vec<Vec<Option<QRat>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(QRat::residue_mod_q2).collect())
            .collect()
    }

    /// Determinant over `Q(q^{1/2})` by Gaussian elimination.
    pub fn determinant(&self) -> QRat {
        let n = self.size();
        let mut a = self.entries.clone();
        let mut det = QRat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return QRat::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &sub;
                }
            }
        }
        det
    }
}

/// An entry breaking `(b_i, b_j) ≡ δ_{ij} mod q²A₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoViolation {
    pub row: Monomial,
    pub col: Monomial,
    pub value: QRat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoReport {
    pub weight: Weight,
    pub checked: usize,
    pub violations: Vec<OrthoViolation>,
}

impl OrthoReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn congruent_to_delta(v: &QRat, diagonal: bool) -> bool {
    let target = if diagonal { QRat::one() } else { QRat::zero() };
    (v - &target).valuation() >= Valuation::Finite(HalfExp(4))
}

pub fn orthonormality_report(g: &GramMatrix) -> OrthoReport {
    let mut violations = Vec::new();
    for (i, row) in g.entries.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !congruent_to_delta(v, i == j) {
                violations.push(OrthoViolation {
                    row: g.basis[i].clone(),
                    col: g.basis[j].clone(),
                    value: v.clone(),
                });
            }
        }
    }
    OrthoReport {
        weight: g.weight,
        checked: g.size() * g.size(),
        violations,
    }
}

/// Outcome of probing `(u, x_k) ∈ A₀` over the same-weight monomials of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeProbe {
    pub checked: usize,
    pub witness: Option<(Monomial, QRat)>,
}

impl LatticeProbe {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Finite probe of the form criterion for the lattice: every pairing of `u`
/// with a normal monomial of its weight inside `[lo, hi]` must be regular at `q = 0`.
pub fn lattice_membership_probe(u: &Element, lo: i64, hi: i64) -> Result<LatticeProbe, AlgebraError> {
    if u.is_zero() {
        return Ok(LatticeProbe {
            checked: 0,
            witness: None,
        });
    }
    let w = u.weight_of()?;
    let basis = enumerate_basis(w.length, lo, hi, Some(w.degree));
    let zero = Valuation::Finite(HalfExp(0));
    for (i, m) in basis.iter().enumerate() {
        let v = pair(u, &Element::from_monomial(m.clone(), Coeff::one()));
        if v.valuation() < zero {
            return Ok(LatticeProbe {
                checked: i + 1,
                witness: Some((m.clone(), v)),
            });
        }
    }
    Ok(LatticeProbe {
        checked: basis.len(),
        witness: None,
    })
}

/// Every weight `(k, d)` with `1 ≤ k ≤ max_length` realized by normal monomials in `[lo, hi]`.
pub fn weights_up_to(max_length: usize, lo: i64, hi: i64) -> Vec<Weight> {
    let mut out = vec![Weight::new(0, 0)];
    for k in 1..=max_length {
        let k64 = k as i64;
        for d in k64 * lo..=k64 * hi {
            out.push(Weight::new(k, d));
        }
    }
    out
}
