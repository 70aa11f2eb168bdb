//! Text grammar for polynomials and field specifications.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | juxtaposition) unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants. Juxtaposition covers
//! `3x` and `2(x + y)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::poly::Poly;
use super::scalar::Q;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("division by a non-constant or zero expression")]
    BadDivision,
    #[error("exponent must be a nonnegative integer")]
    BadExponent,
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("invalid field specification {0:?}; expected QQ or GF(p)")]
    BadField(String),
    #[error("invalid point {0:?}; expected (a : b : c)")]
    BadPoint(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|p| p.1).collect();
            out.push((Tok::Num(text.parse().expect("digits")), pos));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|p| p.1).collect();
            out.push((Tok::Name(text), pos));
            i = j;
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else if c == '−' {
            out.push((Tok::Op('-'), pos));
            i += 1;
        } else if c == '·' {
            out.push((Tok::Op('*'), pos));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar(c, pos));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn arity(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Poly<Q>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Q>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ParseError::BadDivision);
                    }
                    acc = acc.scale(&(BigRational::from_integer(1.into()) / d.constant_term()));
                }
                Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::Op('(')) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<Q>, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<Q>, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.try_into().map_err(|_| ParseError::BadExponent)?;
                    Ok(base.pow(k))
                }
                Some(Tok::Op('(')) => {
                    let e = self.expr()?;
                    self.expect(')')?;
                    if !e.is_constant() {
                        return Err(ParseError::BadExponent);
                    }
                    let c = e.constant_term();
                    if !c.is_integer() || c < Q::zero() {
                        return Err(ParseError::BadExponent);
                    }
                    let k: u32 = c.to_integer().try_into().map_err(|_| ParseError::BadExponent)?;
                    Ok(base.pow(k))
                }
                _ => Err(ParseError::BadExponent),
            }
        } else {
            Ok(base)
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(d), _)) if *d == c => {
                self.pos += 1;
                Ok(())
            }
            Some((t, p)) => Err(ParseError::UnexpectedChar(tok_char(t), *p)),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn atom(&mut self) -> Result<Poly<Q>, ParseError> {
        let at = self.toks.get(self.pos).map(|t| t.1);
        match self.next() {
            Some(Tok::Num(n)) => Ok(Poly::constant(self.arity(), BigRational::from_integer(n))),
            Some(Tok::Name(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Poly::var(self.arity(), i)),
                None => Err(ParseError::UnknownVariable(name)),
            },
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => Err(ParseError::UnexpectedChar(tok_char(&t), at.unwrap_or(0))),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

fn tok_char(t: &Tok) -> char {
    match t {
        Tok::Op(c) => *c,
        Tok::Num(_) => '0',
        Tok::Name(n) => n.chars().next().unwrap_or('?'),
    }
}

/// Parses a polynomial with rational coefficients in the given variables.
pub fn parse_poly(s: &str, vars: &[&str]) -> Result<Poly<Q>, ParseError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ParseError::UnexpectedEnd);
    }
    let mut p = Parser { toks, pos: 0, vars };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::Trailing(p.toks[p.pos].1));
    }
    Ok(e)
}

/// Parses a rational literal such as `-71/51`.
pub fn parse_rational(s: &str) -> Result<Q, ParseError> {
    let p = parse_poly(s, &[])?;
    Ok(p.constant_term())
}

/// Coefficient field selected on the command line or in a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FromStr for FieldSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let t = s.trim();
        if t == "QQ" || t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ParseError::BadField(s.to_string()))?;
        let p: u64 = inner.trim().parse().map_err(|_| ParseError::BadField(s.to_string()))?;
        let prime = p > 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !prime {
            return Err(ParseError::BadField(s.to_string()));
        }
        Ok(FieldSpec::Prime(p))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, q_frac};

    #[test]
    fn grammar() {
        let v = ["x", "y", "z"];
        let a = parse_poly("(x*y - z^2)^2 - x*z^3", &v).unwrap();
        let b = parse_poly("x^2*y^2 - 2*x*y*z^2 + z^4 - x*z^3", &v).unwrap();
        assert_eq!(a, b);
        let c = parse_poly("3x - 2(y + 1)", &v).unwrap();
        assert_eq!(c, parse_poly("3*x - 2*y - 2", &v).unwrap());
        let d = parse_poly("(27x + 125y)/512", &v).unwrap();
        assert_eq!(d.coeff(&[1, 0, 0].into_iter().collect()), q_frac(27, 512));
        assert_eq!(parse_rational("-71/51").unwrap(), q_frac(-71, 51));
        assert_eq!(parse_poly("−x·y", &v).unwrap(), parse_poly("-x*y", &v).unwrap());
        assert_eq!(parse_poly("2^(3)", &v).unwrap().constant_term(), q(8));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_poly("w + 1", &["x"]), Err(ParseError::UnknownVariable(_))));
        assert!(matches!(parse_poly("x/y", &["x", "y"]), Err(ParseError::BadDivision)));
        assert!(parse_poly("x +", &["x"]).is_err());
        assert!(parse_poly("(x", &["x"]).is_err());
    }

    #[test]
    fn field_specs() {
        assert_eq!("QQ".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("GF(29)".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(29));
        assert!("GF(30)".parse::<FieldSpec>().is_err());
        assert!("RR".parse::<FieldSpec>().is_err());
    }
}
