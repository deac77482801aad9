//! Polynomials in `x` with coefficients in `K(t)`.

use std::fmt;

use super::{BiPoly, RatFun, UniPoly};
use crate::arith::{ArithError, Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPolyX {
    field: Field,
    coeffs: Vec<RatFun>,
}

impl RatPolyX {
    pub fn new(field: Field, mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPolyX { field, coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        RatPolyX { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::new(field.clone(), vec![RatFun::one(field)])
    }

    /// `x - a(t)`
    pub fn linear(a: &RatFun) -> Self {
        let f = a.field();
        Self::new(f.clone(), vec![a.neg(), RatFun::one(f)])
    }

    pub fn from_bipoly(p: &BiPoly) -> Self {
        Self::new(p.field().clone(), p.rows().iter().map(RatFun::from_poly).collect())
    }

    /// `B(x,t) / d(t)`
    pub fn from_bipoly_over(p: &BiPoly, d: &UniPoly) -> Result<Self, ArithError> {
        let coeffs = p.rows().iter().map(|r| RatFun::new(r, d)).collect::<Result<_, _>>()?;
        Ok(Self::new(p.field().clone(), coeffs))
    }

    /// `n(x) - h(t) d(x)` for `h = n/d`; up to scaling, the minimal
    /// polynomial of `t` over `K(h)`.
    pub fn phi(h: &RatFun) -> Self {
        let f = h.field();
        let n = h.num();
        let d = h.den();
        let len = n.coeffs().len().max(d.coeffs().len());
        let coeffs = (0..len)
            .map(|i| RatFun::constant(f, n.coeff(i)).sub(&h.scale(&d.coeff(i))))
            .collect();
        Self::new(f.clone(), coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RatFun::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> RatFun {
        self.coeffs.last().cloned().unwrap_or_else(|| RatFun::zero(&self.field))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        Self::new(self.field.clone(), self.coeffs.iter().map(|c| c.mul(&inv)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.field.clone(), (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.field.clone(), (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![RatFun::zero(&self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(self.field.clone(), out)
    }

    /// Division by a monic divisor.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self), ArithError> {
        if b.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if !b.is_monic() {
            return Err(ArithError::NotMonic);
        }
        let db = b.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut q = vec![RatFun::zero(&self.field); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db].clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..db {
                if !b.coeffs[i].is_zero() {
                    r[k + i] = r[k + i].sub(&c.mul(&b.coeffs[i]));
                }
            }
            r[k + db] = RatFun::zero(&self.field);
            q[k] = c;
        }
        r.truncate(db);
        Ok((Self::new(self.field.clone(), q), Self::new(self.field.clone(), r)))
    }

    pub fn rem(&self, b: &Self) -> Result<Self, ArithError> {
        Ok(self.divrem(b)?.1)
    }

    /// Substitutes `x = c`.
    pub fn eval_x(&self, c: &Elem) -> RatFun {
        let mut acc = RatFun::zero(&self.field);
        for k in self.coeffs.iter().rev() {
            acc = acc.scale(c).add(k);
        }
        acc
    }

    /// Common-denominator form `(B, d)` with `self = B/d`, `d` monic.
    pub fn to_bipoly(&self) -> (BiPoly, UniPoly) {
        let mut d = UniPoly::one(&self.field);
        for c in &self.coeffs {
            d = d.lcm(c.den());
        }
        let rows = self.coeffs.iter().map(|c| c.num().mul(&d.div_exact(c.den()))).collect();
        (BiPoly::new(self.field.clone(), rows), d)
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            let mut cs = c.to_string();
            let negative = cs.starts_with('-') && !cs[1..].contains([' ', '(']);
            if negative {
                cs.remove(0);
            }
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, _) if !cs.contains(['+', ' ', '-']) => format!("{cs}*{mono}"),
                _ => format!("({cs})*{mono}"),
            });
        }
        out
    }
}

impl fmt::Display for RatPolyX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}
