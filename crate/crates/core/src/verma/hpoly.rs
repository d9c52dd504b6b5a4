use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::act::{h_on, k_on};
use crate::qalgebra::Element;
use crate::qcoeff::{q_minus_q_inv, QRat};

/// `Σ c · K^a · h_{i₁}⋯h_{i_r}` in commuting symbols `h_i` and `K^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HPolynomial {
    terms: BTreeMap<(i64, Vec<i64>), QRat>,
}

/// Partitions of `n` as `(part, multiplicity)` lists, parts decreasing.
fn partitions(n: i64) -> Vec<Vec<(i64, u32)>> {
    fn go(n: i64, max: i64, cur: &mut Vec<(i64, u32)>, out: &mut Vec<Vec<(i64, u32)>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            for mult in 1..=(n / part) as u32 {
                cur.push((part, mult));
                go(n - part * mult as i64, part - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn factorial(m: u32) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

/// `K^{±1} · [z^{∓n}] exp(±(q − q^{−1}) Σ_{k≥1} h_{±k} z^{∓k})`.
fn exp_coefficient(n: i64, sign: i64) -> HPolynomial {
    let kpow = sign;
    let step = if sign > 0 { q_minus_q_inv() } else { -q_minus_q_inv() };
    let mut out = HPolynomial::default();
    for parts in partitions(n) {
        let mut c = QRat::one();
        let mut hs = Vec::new();
        for (part, mult) in parts {
            c = &c * &step.pow(mult as i64).expect("positive power");
            c = &c * &QRat::from_rational(BigRational::new(1.into(), factorial(mult)));
            hs.extend(std::iter::repeat_n(sign * part, mult as usize));
        }
        hs.sort_unstable();
        out.add(kpow, hs, c);
    }
    out
}

/// `ψ(n)`: `K` times the `z^{−n}` coefficient of the exponential; zero for `n < 0`.
pub fn psi_component(n: i64) -> HPolynomial {
    if n < 0 {
        return HPolynomial::default();
    }
    exp_coefficient(n, 1)
}

/// `φ(p)`: `K^{−1}` times the `z^{−p}` coefficient of the exponential in the `h_{−k}`; zero for `p > 0`.
pub fn phi_component(p: i64) -> HPolynomial {
    if p > 0 {
        return HPolynomial::default();
    }
    exp_coefficient(-p, -1)
}

/// `(ψ(p) − φ(p))/(q − q^{−1})`, the value of `[x⁺_k, x⁻_l]` at `k + l = p`.
pub fn commutator_component(p: i64) -> HPolynomial {
    let inv = q_minus_q_inv().inv().expect("nonzero");
    psi_component(p).sub(&phi_component(p)).scale(&inv)
}

impl HPolynomial {
    fn add(&mut self, kpow: i64, hs: Vec<i64>, c: QRat) {
        let slot = self.terms.entry((kpow, hs)).or_default();
        *slot = &*slot + &c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(K-power, h indices, coefficient)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &[i64], &QRat)> {
        self.terms.iter().map(|((k, hs), c)| (*k, hs.as_slice(), c))
    }

    pub fn sub(&self, other: &HPolynomial) -> HPolynomial {
        let mut out = self.clone();
        for ((k, hs), c) in &other.terms {
            out.add(*k, hs.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &QRat) -> HPolynomial {
        let mut out = HPolynomial::default();
        for ((k, hs), v) in &self.terms {
            out.add(*k, hs.clone(), v * c);
        }
        out
    }

    /// The operator on `M̄_q(λ)` with `λ(h) = lambda_h`.
    pub fn apply(&self, e: &Element, lambda_h: i64) -> Element {
        let mut out = Element::zero();
        for ((kpow, hs), c) in &self.terms {
            let mut cur = e.clone();
            for &h in hs {
                cur = h_on(h, &cur).expect("h indices are nonzero");
            }
            out += &k_on(*kpow, &cur, lambda_h).scale_qrat(c);
        }
        out
    }
}

impl fmt::Display for HPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((kpow, hs), c)) in self.terms.iter().enumerate() {
            let mut sym = match kpow {
                0 => String::new(),
                1 => "K".to_string(),
                k => format!("K^{k}"),
            };
            for h in hs {
                sym.push_str(&format!("h[{h}]"));
            }
            let body = c.to_string();
            let term = if sym.is_empty() {
                body
            } else if c.is_one() {
                sym
            } else if (-c).is_one() {
                format!("-{sym}")
            } else if c.is_monomial() {
                format!("{body}*{sym}")
            } else {
                format!("({body})*{sym}")
            };
            match (i, term.strip_prefix('-')) {
                (0, _) => write!(f, "{term}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn low_components() {
        assert_eq!(psi_component(0).to_string(), "K");
        assert_eq!(psi_component(1).to_string(), "(-q^-1+q)*Kh[1]");
        assert_eq!(phi_component(-1).to_string(), "(q^-1-q)*K^-1h[-1]");
        assert_eq!(phi_component(0).to_string(), "K^-1");
        assert!(psi_component(-1).is_zero());
        assert!(phi_component(1).is_zero());
        // ψ(2) = K((q−q⁻¹)h₂ + (q−q⁻¹)²h₁²/2)
        assert_eq!(psi_component(2).terms().count(), 2);
    }
}
