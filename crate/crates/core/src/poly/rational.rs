//! Reduced rational functions `p(t)/q(t)`.

use std::fmt;

use super::UniPoly;
use crate::arith::{ArithError, Elem, Field};

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: UniPoly,
    den: UniPoly,
}

/// Reduces `p/q` to canonical form.
pub fn ratfun_reduce(p: &UniPoly, q: &UniPoly) -> Result<RatFun, ArithError> {
    if q.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    let f = p.field();
    if p.is_zero() {
        return Ok(RatFun { num: p.clone(), den: UniPoly::one(f) });
    }
    let g = p.gcd(q);
    let (mut n, mut d) = if g.is_one() { (p.clone(), q.clone()) } else { (p.div_exact(&g), q.div_exact(&g)) };
    let lc = d.lc();
    if !f.is_one(&lc) {
        let inv = f.inv(&lc)?;
        n = n.scale(&inv);
        d = d.scale(&inv);
    }
    Ok(RatFun { num: n, den: d })
}

impl RatFun {
    pub fn new(p: &UniPoly, q: &UniPoly) -> Result<Self, ArithError> {
        ratfun_reduce(p, q)
    }

    pub fn from_poly(p: &UniPoly) -> Self {
        RatFun { num: p.clone(), den: UniPoly::one(p.field()) }
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::from_poly(&UniPoly::constant(field, c))
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(&UniPoly::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(&UniPoly::one(field))
    }

    /// The rational function `t`.
    pub fn t(field: &Field) -> Self {
        Self::from_poly(&UniPoly::var(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `max(deg num, deg den)`; 0 for constants.
    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return ratfun_reduce(&self.num.add(&o.num), &self.den).unwrap();
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        ratfun_reduce(&n, &self.den.mul(&o.den)).unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        // cross-cancel first to keep the gcds small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = self.num.div_exact(&g1).mul(&o.num.div_exact(&g2));
        let d = self.den.div_exact(&g2).mul(&o.den.div_exact(&g1));
        let lc = d.lc();
        let f = self.field();
        let inv = f.inv(&lc).unwrap();
        RatFun { num: n.scale(&inv), den: d.scale(&inv) }
    }

    pub fn scale(&self, c: &Elem) -> Self {
        if self.field().is_zero(c) {
            return Self::zero(self.field());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        ratfun_reduce(&self.den, &self.num)
    }

    pub fn div(&self, o: &Self) -> Result<Self, ArithError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        RatFun { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Value at `a`, or `None` at a pole.
    pub fn eval(&self, a: &Elem) -> Option<Elem> {
        let d = self.den.eval(a);
        let f = self.field();
        if f.is_zero(&d) {
            return None;
        }
        Some(f.div(&self.num.eval(a), &d).unwrap())
    }

    /// Value at `a` in an extension `target`, or `None` at a pole.
    pub fn eval_in(&self, target: &Field, a: &Elem) -> Option<Elem> {
        let d = self.den.eval_in(target, a);
        if target.is_zero(&d) {
            return None;
        }
        Some(target.div(&self.num.eval_in(target, a), &d).unwrap())
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        ratfun_reduce(&n, &self.den.mul(&self.den)).unwrap()
    }

    /// `self(h(t))`
    pub fn compose(&self, h: &RatFun) -> RatFun {
        // homogenize: self = N/D of degree m; N(h) D(h) scaled by h_d^m
        let m = self.degree();
        let hom = |p: &UniPoly| {
            let mut acc = UniPoly::zero(self.field());
            for (i, c) in p.coeffs().iter().enumerate() {
                let term = h.num.pow(i as u64).mul(&h.den.pow((m - i) as u64)).scale(c);
                acc = acc.add(&term);
            }
            acc
        };
        ratfun_reduce(&hom(&self.num), &hom(&self.den)).unwrap()
    }

    pub fn embed(&self, target: &Field) -> Self {
        RatFun { num: self.num.embed(target), den: self.den.embed(target) }
    }

    /// Text form in the given variable.
    pub fn format_var(&self, var: &str) -> String {
        let n = self.num.format_var(var);
        if self.den.is_one() {
            return n;
        }
        let wrap = |s: String, p: &UniPoly| {
            let single = p.coeffs().iter().filter(|c| !p.field().is_zero(c)).count() <= 1;
            if single && !s.contains('/') {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(self.den.format_var(var), &self.den))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_var("t"))
    }
}
