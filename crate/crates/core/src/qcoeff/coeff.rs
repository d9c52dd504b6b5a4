use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::qrat::{fmt_half_power, join_signed};
use super::{HalfExp, QError, QRat, Valuation};

/// A coefficient `Σ_e c_e γ^{e/2}` with `c_e ∈ Q(q^{1/2})`.
///
/// Keys are γ half-exponents; zero values are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Coeff {
    terms: BTreeMap<i64, QRat>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        QRat::one().into()
    }

    pub fn from_int(n: i64) -> Self {
        QRat::from_int(n).into()
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        QRat::q_pow(n).into()
    }

    /// `γ^{e/2}`.
    pub fn gamma_half_pow(e: i64) -> Self {
        Self::gamma_term(HalfExp(e), QRat::one())
    }

    /// `γ^n`.
    pub fn gamma_pow(n: i64) -> Self {
        Self::gamma_half_pow(2 * n)
    }

    /// `c γ^{e/2}`.
    pub fn gamma_term(e: HalfExp, c: QRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e.0, c);
        }
        Coeff { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(QRat::is_one)
    }

    /// `(γ half-exponent, value)` pairs in increasing γ-exponent.
    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &QRat)> {
        self.terms.iter().map(|(e, c)| (HalfExp(*e), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The single γ-term of a γ-homogeneous value.
    pub fn single_term(&self) -> Option<(HalfExp, &QRat)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// The γ-free part, if the value has no γ-dependence.
    pub fn as_qrat(&self) -> Option<QRat> {
        match self.terms.len() {
            0 => Some(QRat::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Specializes `γ = 1`.
    pub fn at_gamma_one(&self) -> QRat {
        self.terms.values().fold(QRat::zero(), |acc, c| &acc + c)
    }

    /// Minimum q-adic valuation over the γ-terms; `Infinity` for zero.
    pub fn valuation(&self) -> Valuation {
        self.terms
            .values()
            .map(QRat::valuation)
            .min()
            .unwrap_or(Valuation::Infinity)
    }

    pub fn is_regular_at_zero(&self) -> bool {
        self.valuation() >= Valuation::Finite(HalfExp(0))
    }

    /// Evaluates every γ-term at `q = 0`.
    pub fn reduce_at_zero(&self) -> Result<BTreeMap<HalfExp, BigRational>, QError> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = c.value_at_zero()?;
            if !v.is_zero() {
                out.insert(HalfExp(*e), v);
            }
        }
        Ok(out)
    }

    /// True iff `self − target ∈ q² A₀` (γ-free rational target).
    pub fn congruent_mod_q2(&self, target: &BigRational) -> bool {
        let diff = self - &Coeff::from(QRat::from_rational(target.clone()));
        diff.valuation() >= Valuation::Finite(HalfExp(4))
    }

    pub fn scale(&self, c: &QRat) -> Coeff {
        if c.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Division by a γ-homogeneous, nonzero value.
    pub fn div(&self, other: &Coeff) -> Result<Coeff, QError> {
        let (e, c) = match other.terms.len() {
            0 => return Err(QError::DivisionByZero),
            1 => other.single_term().unwrap(),
            _ => return Err(QError::InhomogeneousDivisor),
        };
        let inv = c.inv()?;
        Ok(Coeff {
            terms: self.terms.iter().map(|(g, v)| (g - e.0, v * &inv)).collect(),
        })
    }

    pub fn pow(&self, n: i64) -> Result<Coeff, QError> {
        let base = if n < 0 { Coeff::one().div(self)? } else { self.clone() };
        let mut acc = Coeff::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn insert_add(&mut self, e: i64, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// True when printing needs no surrounding parentheses as a factor.
    pub(crate) fn is_atomic(&self) -> bool {
        match self.single_term() {
            None => self.is_zero(),
            Some((_, c)) => c.is_monomial() || !c.is_laurent(),
        }
    }
}

impl From<QRat> for Coeff {
    fn from(c: QRat) -> Self {
        Coeff::gamma_term(HalfExp(0), c)
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;

    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;

    fn sub(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;

    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_add(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        -&self
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        &self + &rhs
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        &self - &rhs
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts = self.terms.iter().map(|(e, c)| {
            let body = c.to_string();
            if *e == 0 {
                return body;
            }
            let g = fmt_half_power('g', *e);
            if c.is_one() {
                g
            } else if (-c).is_one() {
                format!("-{g}")
            } else if c.is_monomial() || !c.is_laurent() {
                format!("{body}*{g}")
            } else {
                format!("({body})*{g}")
            }
        });
        write!(f, "{}", join_signed(parts))
    }
}
