//! Exact coefficients: rational functions in `q^{1/2}` over the rationals,
//! extended by Laurent powers of a formal central `γ^{1/2}`.
//!
//! All exponents are counted in half-units (`HalfExp(4)` is `q²`). Values are
//! kept in a canonical form, so structural equality is mathematical equality.
//!
//! The two families of structure constants `g(r)` live here as well:
//! [`g_coeff`] returns the Taylor coefficients of `(q² − t)/(1 − q²t)`
//! (`g(0) = q²`, `g(r) = (q⁴ − 1)q^{2(r−1)}`), which drive `Ω_ψ`;
//! [`gq_coeff`] returns those of `(q²t − 1)/(t − q²)`, which drive `Ω_φ`.

mod coeff;
mod poly;
mod qrat;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coeff::Coeff;
pub use qrat::QRat;

/// An exponent of `q^{1/2}` (or `γ^{1/2}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfExp(pub i64);

impl fmt::Display for HalfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// q-adic valuation; `Infinity` sorts above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(HalfExp),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<HalfExp> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinity => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a value that is not homogeneous in gamma")]
    InhomogeneousDivisor,
    #[error("index {0} must be nonnegative")]
    NegativeIndex(i64),
    #[error("pole at q = 0 (valuation {valuation} in powers of q)")]
    PoleAtZero { valuation: HalfExp },
}

/// The quantum integer `[n] = (qⁿ − q⁻ⁿ)/(q − q⁻¹)` as a Laurent polynomial.
pub fn quantum_int(n: i64) -> QRat {
    let sign = if n < 0 { -1 } else { 1 };
    let m = n.abs();
    QRat::from_laurent((0..m).map(|i| {
        (
            2 * (m - 1 - 2 * i),
            num_rational::BigRational::from_integer(sign.into()),
        )
    }))
}

/// `q − q⁻¹`.
pub fn q_minus_q_inv() -> QRat {
    &QRat::q_pow(1) - &QRat::q_pow(-1)
}

/// Coefficients of `g_{q^{-1}}(t) = (q² − t)/(1 − q²t)`:
/// `g(0) = q²`, `g(r) = (q⁴ − 1)q^{2(r−1)}`.
pub fn g_coeff(r: i64) -> Result<QRat, QError> {
    match r {
        _ if r < 0 => Err(QError::NegativeIndex(r)),
        0 => Ok(QRat::q_pow(2)),
        _ => Ok(&(&QRat::q_pow(4) - &QRat::one()) * &QRat::q_pow(2 * (r - 1))),
    }
}

/// Taylor coefficients of `g_q(t) = (q²t − 1)/(t − q²)`:
/// `g_q(0) = q⁻²`, `g_q(r) = (1 − q⁴)q^{−2r−2}`.
pub fn gq_coeff(r: i64) -> Result<QRat, QError> {
    g_coeff(r).map(|c| c.bar())
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use proptest::prelude::*;

    use super::*;

    fn q(n: i64) -> QRat {
        QRat::q_pow(n)
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn arith_examples() {
        assert_eq!(&QRat::q_half_pow(1) * &QRat::q_half_pow(1), q(1));
        let quot = (&q(4) - &QRat::one()).div(&(&q(2) - &QRat::one())).unwrap();
        assert_eq!(quot, &q(2) + &QRat::one());
        assert!((&q(2) - &q(2)).is_zero());
    }

    #[test]
    fn division_errors() {
        let zero = Coeff::zero();
        assert_eq!(Coeff::one().div(&zero), Err(QError::DivisionByZero));
        let mixed = &Coeff::one() + &Coeff::gamma_pow(1);
        assert_eq!(Coeff::one().div(&mixed), Err(QError::InhomogeneousDivisor));
        let ok = Coeff::one().div(&Coeff::gamma_pow(1)).unwrap();
        assert_eq!(ok, Coeff::gamma_pow(-1));
    }

    #[test]
    fn quantum_int_examples() {
        assert_eq!(quantum_int(1), QRat::one());
        assert_eq!(quantum_int(2), &q(1) + &q(-1));
        assert_eq!(quantum_int(-1), QRat::from_int(-1));
        assert!(quantum_int(0).is_zero());
        // closed form (qⁿ − q⁻ⁿ)/(q − q⁻¹)
        for n in -6..=6 {
            let closed = (&q(n) - &q(-n)).div(&q_minus_q_inv()).unwrap();
            assert_eq!(quantum_int(n), closed, "n = {n}");
        }
    }

    #[test]
    fn g_coeff_examples() {
        assert_eq!(g_coeff(0).unwrap(), q(2));
        assert_eq!(g_coeff(1).unwrap(), &q(4) - &QRat::one());
        assert_eq!(g_coeff(2).unwrap(), &(&q(4) - &QRat::one()) * &q(2));
        assert_eq!(g_coeff(-1), Err(QError::NegativeIndex(-1)));
    }

    #[test]
    fn g_coeff_two_displayed_forms_agree() {
        for r in 1..=10 {
            let left = &(&QRat::one() - &q(-4)) * &q(2 * (r + 1));
            assert_eq!(left, g_coeff(r).unwrap());
        }
    }

    /// Truncated power series in t with QRat coefficients.
    fn series_mul(a: &[QRat], b: &[QRat], n: usize) -> Vec<QRat> {
        let mut out = vec![QRat::zero(); n + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= n {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        out
    }

    #[test]
    fn gq_taylor_consistency() {
        // Σ g_q(r) t^r · (t − q²) − (q²t − 1) ≡ 0 mod t^{N+1}
        for n in 0..=12usize {
            let g: Vec<QRat> = (0..=n as i64).map(|r| gq_coeff(r).unwrap()).collect();
            let lin = [-q(2), QRat::one()];
            let mut prod = series_mul(&g, &lin, n);
            prod[0] = &prod[0] - &QRat::from_int(-1);
            if n >= 1 {
                prod[1] = &prod[1] - &q(2);
            }
            assert!(prod.iter().all(QRat::is_zero), "N = {n}");
        }
    }

    #[test]
    fn g_taylor_consistency_reciprocal() {
        // Σ g(r) t^r · (1 − q²t) − (q² − t) ≡ 0 mod t^{N+1}
        for n in 0..=12usize {
            let g: Vec<QRat> = (0..=n as i64).map(|r| g_coeff(r).unwrap()).collect();
            let lin = [QRat::one(), -q(2)];
            let mut prod = series_mul(&g, &lin, n);
            prod[0] = &prod[0] - &q(2);
            if n >= 1 {
                prod[1] = &prod[1] + &QRat::one();
            }
            assert!(prod.iter().all(QRat::is_zero), "N = {n}");
        }
    }

    #[test]
    fn g_values_do_not_expand_gq() {
        // g(0)(0 − q²) ≠ −1: the q-form and q⁻¹-form series are different.
        let lhs = &g_coeff(0).unwrap() * &(-q(2));
        assert_ne!(lhs, QRat::from_int(-1));
    }

    #[test]
    fn valuation_examples() {
        let c: Coeff = (&q(2) + &q(3)).into();
        assert_eq!(c.valuation(), Valuation::Finite(HalfExp(4)));
        let c: Coeff = (&q(4) - &QRat::one()).div(&(&q(2) - &QRat::one())).unwrap().into();
        assert_eq!(c.valuation(), Valuation::Finite(HalfExp(0)));
        assert_eq!(Coeff::zero().valuation(), Valuation::Infinity);
    }

    #[test]
    fn reduce_at_zero_examples() {
        let red = |c: QRat| {
            Coeff::from(c)
                .reduce_at_zero()
                .unwrap()
                .get(&HalfExp(0))
                .cloned()
                .unwrap_or_default()
        };
        assert_eq!(red(&QRat::one() + &q(2)), rat(1));
        assert_eq!(red(&q(2) - &QRat::one()), rat(-1));
        assert_eq!(red(QRat::q_half_pow(1)), rat(0));
        let pole = Coeff::from(q(-1)).reduce_at_zero();
        assert_eq!(pole, Err(QError::PoleAtZero { valuation: HalfExp(-2) }));
    }

    #[test]
    fn congruence_examples() {
        assert!(Coeff::from(&QRat::one() + &q(2)).congruent_mod_q2(&rat(1)));
        assert!(Coeff::from(q(2)).congruent_mod_q2(&rat(0)));
        assert!(!Coeff::from(q(1)).congruent_mod_q2(&rat(0)));
    }

    #[test]
    fn residues_mod_q2() {
        let one_plus = &QRat::one() + &q(2);
        assert!(one_plus.residue_mod_q2().unwrap().is_one());
        // 1/(1 − q) = 1 + q + q² + ⋯
        let f = QRat::one().div(&(&QRat::one() - &q(1))).unwrap();
        assert_eq!(f.residue_mod_q2().unwrap().to_string(), "1+q");
        assert_eq!(f.truncate_below(7).to_string(), "1+q+q^2+q^3");
        assert!(q(-1).residue_mod_q2().is_none());
        assert!(QRat::q_half_pow(3).residue_mod_q2().unwrap() == QRat::q_half_pow(3));
    }

    #[test]
    fn rational_function_canonical_form() {
        // 1/(1 − q²) has a nontrivial denominator and is regular at 0.
        let f = QRat::one().div(&(&QRat::one() - &q(2))).unwrap();
        assert!(!f.is_laurent());
        assert_eq!(f.value_at_zero().unwrap(), rat(1));
        assert_eq!(f.to_string(), "(-1)/(-1+q^2)");
        let back = &f * &(&QRat::one() - &q(2));
        assert!(back.is_one());
    }

    #[test]
    fn display_forms() {
        assert_eq!((&q(2) - &QRat::one()).to_string(), "-1+q^2");
        assert_eq!(QRat::q_half_pow(-3).to_string(), "q^(-3/2)");
        assert_eq!(
            (&QRat::from_ratio(3, 2) * &QRat::q_half_pow(1)).to_string(),
            "3/2*q^(1/2)"
        );
        let c = &Coeff::from(q(2)) + &Coeff::gamma_pow(-1);
        assert_eq!(c.to_string(), "g^-1+q^2");
        let c = &Coeff::gamma_pow(1) * &Coeff::from(&q(2) - &QRat::one());
        assert_eq!(c.to_string(), "(-1+q^2)*g");
    }

    fn arb_qrat() -> impl Strategy<Value = QRat> {
        (
            proptest::collection::vec((-4i64..=4, -6i64..=6), 1..4),
            proptest::collection::vec((0i64..=3, -3i64..=3), 0..3),
        )
            .prop_map(|(num, den)| {
                let n = QRat::from_laurent(num.into_iter().map(|(c, e)| (e, rat(c))));
                let d = QRat::from_laurent(den.into_iter().map(|(c, e)| (e, rat(c))));
                let d = if d.is_zero() { QRat::one() } else { d };
                n.div(&d).unwrap()
            })
    }

    fn arb_coeff() -> impl Strategy<Value = Coeff> {
        proptest::collection::vec((-2i64..=2, arb_qrat()), 1..3).prop_map(|ts| {
            ts.into_iter()
                .fold(Coeff::zero(), |acc, (g, c)| &acc + &Coeff::gamma_term(HalfExp(g), c))
        })
    }

    proptest! {
        #[test]
        fn canonical_after_mul_div(a in arb_coeff(), b in arb_qrat(), g in -3i64..=3) {
            prop_assume!(!b.is_zero());
            let b = Coeff::gamma_term(HalfExp(g), b);
            let back = (&a * &b).div(&b).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn valuation_is_additive(a in arb_qrat(), b in arb_qrat()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let va = a.valuation().finite().unwrap().0;
            let vb = b.valuation().finite().unwrap().0;
            prop_assert_eq!((&a * &b).valuation(), Valuation::Finite(HalfExp(va + vb)));
        }

        #[test]
        fn add_sub_roundtrip(a in arb_qrat(), b in arb_qrat()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn bar_is_involution(a in arb_qrat()) {
            prop_assert_eq!(a.bar().bar(), a);
        }
    }
}
