//! Infix parser for elements and coefficients.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | 'q' | 'g' | 'x[' int ']' | '[' int ']' | '(' expr ')'
//! exponent := int | '-' int | '(' int ('/' int)? ')'
//! ```
//!
//! `g` is γ and `[n]` the quantum integer. Products of `x` factors are
//! normalized, so the result is always in normal form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use super::Element;
use crate::qcoeff::{quantum_int, Coeff, HalfExp, QRat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                Tok::Int(s.parse().expect("digits"))
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            other => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: at,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let at = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(_) => self.err(at, format!("expected {what}")),
            None => self.err(at, format!("expected {what}, found end of input")),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let at = self.here();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            if self.peek() == Some(&Tok::Plus) {
                self.pos += 1;
            }
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => {
                let n: i64 = n.try_into().map_err(|_| ParseError {
                    position: at,
                    message: "integer out of range".into(),
                })?;
                Ok(if neg { -n } else { n })
            }
            _ => self.err(at, "expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<Element, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen | Tok::LBracket)
        )
    }

    fn term(&mut self) -> Result<Element, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.multiply(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let d = match d.as_scalar() {
                        Some(c) => c,
                        None => return self.err(at, "division by a non-scalar"),
                    };
                    acc = divide(&acc, &d).map_err(|e| ParseError {
                        position: at,
                        message: e.to_string(),
                    })?;
                }
                _ if self.starts_factor() => {
                    acc = acc.multiply(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Element, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Element, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        let (num, den) = if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let n = self.signed_int()?;
            let d = if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let d_at = self.here();
                let d = self.signed_int()?;
                if d == 0 {
                    return self.err(d_at, "zero denominator in exponent");
                }
                d
            } else {
                1
            };
            self.expect(Tok::RParen, "')'")?;
            (n, d)
        } else {
            (self.signed_int()?, 1)
        };
        raise(&base, num, den).map_err(|m| ParseError {
            position: at,
            message: m,
        })
    }

    fn atom(&mut self) -> Result<Element, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Element::scalar(
                QRat::from_rational(BigRational::from_integer(n)).into(),
            )),
            Some(Tok::Ident(name)) => match name.as_str() {
                "q" => Ok(Element::scalar(Coeff::q_pow(1))),
                "g" => Ok(Element::scalar(Coeff::gamma_pow(1))),
                "x" => {
                    self.expect(Tok::LBracket, "'[' after x")?;
                    let n = self.signed_int()?;
                    self.expect(Tok::RBracket, "']'")?;
                    Ok(Element::x(n))
                }
                other => self.err(at, format!("unknown symbol '{other}'")),
            },
            Some(Tok::LBracket) => {
                let n = self.signed_int()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Element::scalar(quantum_int(n).into()))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(_) => self.err(at, "unexpected token"),
            None => self.err(at, "unexpected end of input"),
        }
    }
}

fn divide(e: &Element, d: &Coeff) -> Result<Element, crate::qcoeff::QError> {
    let inv = Coeff::one().div(d)?;
    Ok(e.scale(&inv))
}

fn raise(base: &Element, num: i64, den: i64) -> Result<Element, String> {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    if den == 1 && num >= 0 {
        let mut acc = Element::one();
        for _ in 0..num {
            acc = acc.multiply(base);
        }
        return Ok(acc);
    }
    let c = base
        .as_scalar()
        .ok_or_else(|| "only scalars take negative or fractional exponents".to_string())?;
    if den == 1 {
        return c.pow(num).map(Element::scalar).map_err(|e| e.to_string());
    }
    // c γ^{e/2} with c = ±q^{s/2}: fractional powers of a monomial with unit scale
    let (ge, v) = c
        .single_term()
        .ok_or_else(|| "fractional exponent of a non-monomial".to_string())?;
    if !v.is_monomial() || !v.scale().is_one() {
        return Err("fractional exponent of a non-monomial".into());
    }
    let qe = v.shift().0 * num;
    let ge = ge.0 * num;
    if qe % den != 0 || ge % den != 0 {
        return Err(format!("exponent {num}/{den} leaves the half-integer powers"));
    }
    let scale = BigRational::one();
    Ok(Element::scalar(Coeff::gamma_term(
        HalfExp(ge / den),
        QRat::monomial(scale, HalfExp(qe / den)),
    )))
}

/// Parses an element; every product is normalized.
pub fn parse_element(text: &str) -> Result<Element, ParseError> {
    let toks = lex(text)?;
    let end = text.chars().count();
    if toks.is_empty() {
        return Err(ParseError {
            position: 0,
            message: "empty input".into(),
        });
    }
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err(p.here(), "unexpected trailing input");
    }
    Ok(e)
}

/// Parses a scalar coefficient.
pub fn parse_coeff(text: &str) -> Result<Coeff, ParseError> {
    let e = parse_element(text)?;
    e.as_scalar().ok_or(ParseError {
        position: 0,
        message: "expected a scalar, found an element with x factors".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::Monomial;

    #[test]
    fn serre_instance() {
        let e = parse_element("x[0]*x[1]").unwrap();
        assert_eq!(e.to_string(), "q^2*x[1]x[0]");
    }

    #[test]
    fn fractional_coefficient() {
        let e = parse_element("3/2*q^(1/2)*x[2]").unwrap();
        assert_eq!(e.num_terms(), 1);
        assert_eq!(e.to_string(), "3/2*q^(1/2)*x[2]");
    }

    #[test]
    fn cancellation() {
        assert!(parse_element("x[1]*x[0] - x[1]*x[0]").unwrap().is_zero());
    }

    #[test]
    fn juxtaposition_and_quantum_ints() {
        let a = parse_element("[2] x[0]x[1]").unwrap();
        let b = parse_element("(q + q^-1) * q^2 * x[1]*x[0]").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_coeff("[3]").unwrap(), parse_coeff("q^-2 + 1 + q^2").unwrap());
    }

    #[test]
    fn gamma_and_division() {
        let c = parse_coeff("(q^2 - 1)/(g q)").unwrap();
        assert_eq!(c.to_string(), "(-q^-1+q)*g^-1");
        assert_eq!(parse_coeff("g^(1/2)").unwrap(), Coeff::gamma_half_pow(1));
        assert_eq!(parse_coeff("1/(1-q^2)").unwrap().to_string(), "(-1)/(-1+q^2)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_element("x[0] + y").unwrap_err();
        assert_eq!(e.position, 7);
        assert!(e.message.contains("unknown symbol"));
        assert_eq!(parse_element("x[0] +").unwrap_err().position, 6);
        assert_eq!(parse_element("x[0] $").unwrap_err().position, 5);
        assert!(parse_element("1/(1+g)").is_err());
        assert!(parse_element("1/0").is_err());
        assert!(parse_element("x[1]/x[0]").is_err());
        assert!(parse_element("x[0]^-1").is_err());
    }

    #[test]
    fn format_roundtrip_examples() {
        for s in [
            "x[0]*x[2]",
            "1/(1-q^2) * x[3] - g^-1 x[0]x[0] + 5",
            "(q^(1/2) + g) x[-1] x[2] x[0]",
            "-x[4]",
            "0",
        ] {
            let e = parse_element(s).unwrap();
            let back = parse_element(&e.to_string()).unwrap();
            assert_eq!(back, e, "{s} printed as {e}");
        }
        assert_eq!(
            parse_element("x[2]x[0]").unwrap().coeff_of(&Monomial::new(vec![2, 0])),
            Coeff::one()
        );
    }
}
