//! Text input for rational functions in `t`.
//!
//! Grammar: integers, the variable `t`, `+ - * / ^` and parentheses;
//! exponents are non-negative integer literals.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{RatFun, UniPoly};
use crate::arith::{ArithError, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0} not invertible in {1}")]
    NotInvertible(String, String),
    #[error("division by zero at position {0}")]
    DivisionByZero(usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
}

/// Value plus the integer literal it came from, for error messages.
struct Val {
    f: RatFun,
    literal: Option<BigInt>,
}

impl Val {
    fn plain(f: RatFun) -> Self {
        Val { f, literal: None }
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = Val::plain(if c == b'+' { acc.f.add(&rhs.f) } else { acc.f.sub(&rhs.f) });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = Val::plain(if c == b'*' {
                acc.f.mul(&rhs.f)
            } else {
                match acc.f.div(&rhs.f) {
                    Ok(v) => v,
                    Err(_) => {
                        return Err(match rhs.literal {
                            Some(n) if !n.is_zero() => {
                                ParseError::NotInvertible(n.to_string(), self.field.to_string())
                            }
                            _ => ParseError::DivisionByZero(at),
                        })
                    }
                }
            });
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Val, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(Val { f: v.f.neg(), literal: v.literal.map(|n| -n) })
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Val, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: u64 = match text.parse() {
            Ok(e) if e <= 100_000 => e,
            _ => {
                self.pos = start;
                return self.err("exponent too large");
            }
        };
        let literal = base.literal.map(|n| num_traits::pow::pow(n, e as usize));
        Ok(Val { f: base.f.pow(e), literal })
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Val::plain(RatFun::t(self.field)))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                let c = self.field.from_bigint(&n);
                Ok(Val { f: RatFun::from_poly(&UniPoly::constant(self.field, c)), literal: Some(n) })
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_ratfun(text: &str, field: &Field) -> Result<RatFun, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, field };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(v.f)
}

pub fn parse_poly(text: &str, field: &Field) -> Result<UniPoly, ParseError> {
    let f = parse_ratfun(text, field)?;
    if !f.is_polynomial() {
        return Err(ParseError::Syntax { pos: 0, msg: "expected a polynomial".into() });
    }
    let inv = field.inv(&f.den().lc()).map_err(|_: ArithError| ParseError::DivisionByZero(0))?;
    Ok(f.num().scale(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_quotient() {
        let f = Field::Rational;
        let r = parse_ratfun("(t^2+1)/t", &f).unwrap();
        assert_eq!(r.num(), &UniPoly::from_i64s(&f, &[1, 0, 1]));
        assert_eq!(r.den(), &UniPoly::from_i64s(&f, &[0, 1]));
    }

    #[test]
    fn unbalanced_parenthesis() {
        let e = parse_ratfun("t^24-2*t^12+1)/(t^16+2*t^12+t^8)", &Field::Rational).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 13, .. }), "{e}");
    }

    #[test]
    fn literal_not_invertible() {
        let e = parse_ratfun("t^2/2", &Field::Prime(2)).unwrap_err();
        assert_eq!(e.to_string(), "2 not invertible in fp:2");
        assert!(matches!(parse_ratfun("t/(t-t)", &Field::Rational), Err(ParseError::DivisionByZero(1))));
    }

    #[test]
    fn round_trip_display() {
        let f = Field::Rational;
        for s in ["(t^24 - 2*t^12 + 1)/(t^16 + 2*t^12 + t^8)", "-1/2*t^3 + t", "t^2", "1/t"] {
            let r = parse_ratfun(s, &f).unwrap();
            assert_eq!(parse_ratfun(&r.to_string(), &f).unwrap(), r);
        }
    }
}
