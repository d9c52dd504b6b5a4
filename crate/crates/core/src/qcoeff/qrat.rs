use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{self, ZPoly};
use super::{HalfExp, QError, Valuation};

/// An element of `Q(q^{1/2})` in canonical form
/// `scale * s^shift * num(s) / den(s)` with `s = q^{1/2}`.
///
/// `num` and `den` are primitive integer polynomials with positive leading
/// coefficient and nonzero constant term, and are coprime. The s-adic order
/// of the value is therefore exactly `shift`. Zero is stored with an empty
/// `num`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QRat {
    scale: BigRational,
    shift: i64,
    num: ZPoly,
    den: ZPoly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat {
            scale: BigRational::zero(),
            shift: 0,
            num: Vec::new(),
            den: poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::monomial(r, HalfExp(0))
    }

    /// `c * q^{e/2}`.
    pub fn monomial(c: BigRational, e: HalfExp) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QRat {
            scale: c,
            shift: e.0,
            num: poly::one(),
            den: poly::one(),
        }
    }

    /// `q^{e/2}`.
    pub fn q_half_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), HalfExp(e))
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        Self::q_half_pow(2 * n)
    }

    /// Builds a Laurent polynomial from `(half-exponent, coefficient)` pairs.
    pub fn from_laurent<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| &acc + &Self::monomial(c, HalfExp(e)))
    }

    /// Canonicalizes `scale * s^shift * num / den` for arbitrary integer
    /// polynomials (`den` nonzero).
    pub(crate) fn from_parts(scale: BigRational, shift: i64, mut num: ZPoly, mut den: ZPoly) -> Self {
        poly::trim(&mut num);
        poly::trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() || scale.is_zero() {
            return Self::zero();
        }
        let ln = poly::low_order(&num);
        let ld = poly::low_order(&den);
        let shift = shift + ln as i64 - ld as i64;
        let (cn, mut pn) = poly::primitive_part(&num[ln..]);
        let (cd, mut pd) = poly::primitive_part(&den[ld..]);
        if pd.len() > 1 {
            let g = poly::gcd(&pn, &pd);
            if g.len() > 1 {
                pn = poly::div_exact(&pn, &g);
                pd = poly::div_exact(&pd, &g);
            }
        }
        QRat {
            scale: scale * BigRational::new(cn, cd),
            shift,
            num: pn,
            den: pd,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && poly::is_one(&self.num) && poly::is_one(&self.den) && self.scale.is_one()
    }

    /// True when the denominator is trivial, i.e. the value lies in `Q[q^{±1/2}]`.
    pub fn is_laurent(&self) -> bool {
        poly::is_one(&self.den)
    }

    /// True for a single term `c * q^{e/2}`.
    pub fn is_monomial(&self) -> bool {
        self.is_zero() || (poly::is_one(&self.num) && poly::is_one(&self.den))
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn shift(&self) -> HalfExp {
        HalfExp(self.shift)
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(HalfExp(self.shift))
        }
    }

    /// Value at `q = 0`; errors on a pole.
    pub fn value_at_zero(&self) -> Result<BigRational, QError> {
        match self.shift.cmp(&0) {
            _ if self.is_zero() => Ok(BigRational::zero()),
            Ordering::Greater => Ok(BigRational::zero()),
            Ordering::Equal => Ok(&self.scale * BigRational::new(self.num[0].clone(), self.den[0].clone())),
            Ordering::Less => Err(QError::PoleAtZero {
                valuation: HalfExp(self.shift),
            }),
        }
    }

    /// The constant value, if this is a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.shift == 0 && self.is_monomial() {
            Some(self.scale.clone())
        } else {
            None
        }
    }

    /// Expanded `(half-exponent, coefficient)` terms when this is a Laurent polynomial.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if !self.is_laurent() {
            return None;
        }
        Some(laurent_expand(&self.scale, self.shift, &self.num))
    }

    /// The q-adic expansion truncated to the terms `q^{e/2}` with `e < order`.
    pub fn truncate_below(&self, order: i64) -> QRat {
        if self.is_zero() || self.shift >= order {
            return Self::zero();
        }
        let n = (order - self.shift) as usize;
        let d0 = BigRational::from_integer(self.den[0].clone());
        let mut series: Vec<BigRational> = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = BigRational::from_integer(self.num.get(i).cloned().unwrap_or_default());
            for j in 1..=i.min(self.den.len() - 1) {
                c -= BigRational::from_integer(self.den[j].clone()) * &series[i - j];
            }
            series.push(c / &d0);
        }
        Self::from_laurent(
            series
                .into_iter()
                .enumerate()
                .map(|(i, c)| (self.shift + i as i64, &self.scale * c)),
        )
    }

    /// Class modulo `q²A₀`, as a polynomial in `q^{1/2}` of degree below `q²`;
    /// `None` off `A₀`.
    pub fn residue_mod_q2(&self) -> Option<QRat> {
        if self.valuation() < Valuation::Finite(HalfExp(0)) {
            return None;
        }
        Some(self.truncate_below(4))
    }

    pub fn inv(&self) -> Result<Self, QError> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(QRat {
            scale: self.scale.recip(),
            shift: -self.shift,
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, QError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self, QError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitutes `q -> q^{-1}` (so `s -> s^{-1}`).
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let rev = |p: &ZPoly| p.iter().rev().cloned().collect::<ZPoly>();
        // num(s^-1) = s^{-deg} rev(num)(s)
        let shift = -self.shift - poly::degree(&self.num) as i64 + poly::degree(&self.den) as i64;
        Self::from_parts(self.scale.clone(), shift, rev(&self.num), rev(&self.den))
    }
}

fn laurent_expand(scale: &BigRational, shift: i64, num: &[BigInt]) -> Vec<(i64, BigRational)> {
    num.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (shift + i as i64, scale * BigRational::from_integer(c.clone())))
        .collect()
}

impl Default for QRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a QRat> for &'a QRat {
    type Output = QRat;

    fn add(self, rhs: &QRat) -> QRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.shift.min(rhs.shift);
        let denom = self.scale.denom().lcm(rhs.scale.denom());
        let ma = self.scale.numer() * (&denom / self.scale.denom());
        let mb = rhs.scale.numer() * (&denom / rhs.scale.denom());
        let same_den = self.den == rhs.den;
        let (na, nb, den) = if same_den {
            (self.num.clone(), rhs.num.clone(), self.den.clone())
        } else {
            (
                poly::mul(&self.num, &rhs.den),
                poly::mul(&rhs.num, &self.den),
                poly::mul(&self.den, &rhs.den),
            )
        };
        let mut num = Vec::new();
        poly::add_shifted(&mut num, &na, &ma, (self.shift - low) as usize);
        poly::add_shifted(&mut num, &nb, &mb, (rhs.shift - low) as usize);
        QRat::from_parts(BigRational::new(BigInt::one(), denom), low, num, den)
    }
}

impl<'a> Sub<&'a QRat> for &'a QRat {
    type Output = QRat;

    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QRat> for &'a QRat {
    type Output = QRat;

    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        if self.is_laurent() && rhs.is_laurent() {
            // Gauss: the product of primitive polynomials is primitive.
            return QRat {
                scale: &self.scale * &rhs.scale,
                shift: self.shift + rhs.shift,
                num: poly::mul(&self.num, &rhs.num),
                den: poly::one(),
            };
        }
        QRat::from_parts(
            &self.scale * &rhs.scale,
            self.shift + rhs.shift,
            poly::mul(&self.num, &rhs.num),
            poly::mul(&self.den, &rhs.den),
        )
    }
}

impl Neg for &QRat {
    type Output = QRat;

    fn neg(self) -> QRat {
        let mut out = self.clone();
        out.scale = -out.scale;
        out
    }
}

impl Neg for QRat {
    type Output = QRat;

    fn neg(mut self) -> QRat {
        self.scale = -self.scale;
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Writes `q^{e/2}` (or `g^{e/2}`) in the textual grammar: `q`, `q^3`, `q^-2`,
/// `q^(1/2)`, `q^(-3/2)`.
pub(crate) fn fmt_half_power(letter: char, e: i64) -> String {
    match e {
        2 => letter.to_string(),
        _ if e % 2 == 0 => format!("{letter}^{}", e / 2),
        _ => format!("{letter}^({e}/2)"),
    }
}

/// Writes `c*q^{e/2}` with the conventions used by every printer in the crate.
pub(crate) fn fmt_term(c: &BigRational, e: i64, letter: char) -> String {
    if e == 0 {
        return c.to_string();
    }
    let p = fmt_half_power(letter, e);
    if c.is_one() {
        p
    } else if (-c).is_one() {
        format!("-{p}")
    } else {
        format!("{c}*{p}")
    }
}

pub(crate) fn join_signed(terms: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(&t);
        }
    }
    out
}

fn fmt_laurent(terms: &[(i64, BigRational)]) -> String {
    join_signed(terms.iter().map(|(e, c)| fmt_term(c, *e, 'q')))
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num = fmt_laurent(&laurent_expand(&self.scale, self.shift, &self.num));
        if self.is_laurent() {
            return write!(f, "{num}");
        }
        let den = fmt_laurent(&laurent_expand(&BigRational::one(), 0, &self.den));
        write!(f, "({num})/({den})")
    }
}

impl PartialOrd for QRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order, used only to keep printed output deterministic.
impl Ord for QRat {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.shift, &self.num, &self.den, &self.scale).cmp(&(other.shift, &other.num, &other.den, &other.scale))
    }
}
