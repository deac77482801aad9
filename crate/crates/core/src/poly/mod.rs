//! Polynomials over a [`Field`].

pub mod bivariate;
pub mod dense;
pub mod int;
pub mod parse;
pub mod rational;
pub mod ratpolyx;
pub mod resultant;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::arith::{ArithError, Elem, Field};

pub use bivariate::BiPoly;
pub use rational::{ratfun_reduce, RatFun};
pub use ratpolyx::RatPolyX;

/// Dense univariate polynomial; coefficients little-endian, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(field: Field, coeffs: Vec<Elem>) -> Self {
        let coeffs = dense::trim(&field, coeffs);
        UniPoly { field, coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::new(field.clone(), vec![c])
    }

    /// The variable itself.
    pub fn var(field: &Field) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &Field, c: Elem, k: usize) -> Self {
        let mut v = vec![field.zero(); k];
        v.push(c);
        Self::new(field.clone(), v)
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Self {
        Self::new(field.clone(), coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        UniPoly { field: self.field.clone(), coeffs: dense::monic(&self.field, &self.coeffs) }
    }

    fn wrap(&self, coeffs: Vec<Elem>) -> Self {
        UniPoly { field: self.field.clone(), coeffs }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(dense::add(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(dense::sub(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn neg(&self) -> Self {
        self.wrap(dense::neg(&self.field, &self.coeffs))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(dense::mul(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Elem) -> Self {
        self.wrap(dense::scale(&self.field, &self.coeffs, c))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend_from_slice(&self.coeffs);
        self.wrap(v)
    }

    pub fn divrem(&self, other: &Self) -> Result<(Self, Self), ArithError> {
        self.same_field(other);
        if other.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (q, r) = dense::divrem(&self.field, &self.coeffs, &other.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    /// Remainder; panics on a zero divisor.
    pub fn rem(&self, other: &Self) -> Self {
        self.divrem(other).expect("nonzero divisor").1
    }

    /// Quotient when the division is known to be exact.
    pub fn div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.divrem(other).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.same_field(other);
        if matches!(self.field, Field::Rational) {
            return int::gcd_rational(self, other);
        }
        self.wrap(dense::gcd(&self.field, &self.coeffs, &other.coeffs))
    }

    /// `(g, s, t)` with `g = s*self + t*other`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        self.same_field(other);
        let (g, s, t) = dense::xgcd(&self.field, &self.coeffs, &other.coeffs);
        (self.wrap(g), self.wrap(s), self.wrap(t))
    }

    /// Monic lcm.
    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let g = self.gcd(other);
        self.div_exact(&g).mul(other).monic()
    }

    pub fn derivative(&self) -> Self {
        self.wrap(dense::derivative(&self.field, &self.coeffs))
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        dense::eval(&self.field, &self.coeffs, x)
    }

    /// Evaluates at an element of an extension `target` of the coefficient field.
    pub fn eval_in(&self, target: &Field, x: &Elem) -> Elem {
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            let c = target.embed(&self.field, c);
            acc = target.mul_add(&c, &acc, x);
        }
        acc
    }

    /// Coefficients mapped into an extension field.
    pub fn embed(&self, target: &Field) -> Self {
        if *target == self.field {
            return self.clone();
        }
        UniPoly::new(target.clone(), self.coeffs.iter().map(|c| target.embed(&self.field, c)).collect())
    }

    /// Coefficients projected back to a subfield, if they all lie in it.
    pub fn project(&self, target: &Field) -> Option<Self> {
        let v: Option<Vec<Elem>> = self.coeffs.iter().map(|c| self.field.project(target, c)).collect();
        v.map(|v| UniPoly::new(target.clone(), v))
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = UniPoly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&UniPoly::constant(&self.field, c.clone()));
        }
        acc
    }

    /// `self(x + a)`
    pub fn taylor_shift(&self, a: &Elem) -> Self {
        if self.field.is_zero(a) || self.is_constant() {
            return self.clone();
        }
        let lin = UniPoly::new(self.field.clone(), vec![a.clone(), self.field.one()]);
        self.compose(&lin)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = UniPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let f = &self.field;
        let base = dense::rem(f, &self.coeffs, &m.coeffs);
        let mut acc = dense::rem(f, &[f.one()], &m.coeffs);
        for i in (0..e.bits()).rev() {
            acc = dense::mulmod(f, &acc, &acc, &m.coeffs);
            if e.bit(i) {
                acc = dense::mulmod(f, &acc, &base, &m.coeffs);
            }
        }
        self.wrap(acc)
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).is_constant()
            }
        }
    }

    /// Irreducibility over a finite field: `gcd(f, x^{q^i} - x) = 1` for
    /// `i <= deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let q = self.field.cardinality().expect("irreducibility test needs a finite field");
        let m = self.monic();
        let x = UniPoly::var(&self.field);
        let mut h = x.clone();
        for _ in 0..n / 2 {
            h = h.pow_mod(&q, &m);
            if !m.gcd(&h.sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Canonical order: by degree, then coefficients from the top.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                let o = self.field.cmp_elem(a, b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }

    /// Text form in the given variable, highest degree first.
    pub fn format_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mut cs = f.format_elem(c);
            let negative = matches!(c, Elem::Q(_)) && cs.starts_with('-');
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
            let compound = cs.contains(['+', '-', '/', ' ']);
            if i == 0 {
                if compound && matches!(f, Field::Ext(_)) {
                    out.push_str(&format!("({cs})"));
                } else {
                    out.push_str(&cs);
                }
                continue;
            }
            if cs != "1" {
                if compound {
                    out.push_str(&format!("({cs})*"));
                } else {
                    out.push_str(&cs);
                    out.push('*');
                }
            }
            out.push_str(var);
            if i > 1 {
                out.push_str(&format!("^{i}"));
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_var("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_example() {
        let f = Field::Rational;
        let a = UniPoly::from_i64s(&f, &[0, 0, 0, 1]);
        let b = UniPoly::from_i64s(&f, &[-2, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, UniPoly::from_i64s(&f, &[4, 2, 1]));
        assert_eq!(r, UniPoly::from_i64s(&f, &[8]));
    }

    #[test]
    fn division_by_zero() {
        let f = Field::Rational;
        let a = UniPoly::from_i64s(&f, &[1, 1]);
        assert_eq!(a.divrem(&UniPoly::zero(&f)), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn gcd_is_monic() {
        let f = Field::Rational;
        let a = UniPoly::from_i64s(&f, &[-2, 0, 2]); // 2(x-1)(x+1)
        let b = UniPoly::from_i64s(&f, &[-3, 3]); // 3(x-1)
        assert_eq!(a.gcd(&b), UniPoly::from_i64s(&f, &[-1, 1]));
        assert_eq!(a.lcm(&b), UniPoly::from_i64s(&f, &[-1, 0, 1]));
    }

    #[test]
    fn irreducibility_over_f2() {
        let f = Field::Prime(2);
        assert!(UniPoly::from_i64s(&f, &[1, 1, 1]).is_irreducible());
        assert!(!UniPoly::from_i64s(&f, &[1, 0, 1]).is_irreducible());
        assert!(UniPoly::from_i64s(&f, &[1, 1, 0, 0, 1]).is_irreducible());
        assert!(!UniPoly::from_i64s(&f, &[1, 0, 1, 0, 1]).is_irreducible());
    }

    #[test]
    fn composition() {
        let f = Field::Rational;
        let g = UniPoly::from_i64s(&f, &[1, 0, 1]);
        let h = UniPoly::from_i64s(&f, &[0, 1, 0, 1]);
        assert_eq!(g.compose(&h), UniPoly::from_i64s(&f, &[1, 0, 1, 0, 2, 0, 1]));
    }

    #[test]
    fn display() {
        let f = Field::Rational;
        let p = UniPoly::from_i64s(&f, &[-1, 0, -2, 1]);
        assert_eq!(p.to_string(), "t^3 - 2*t^2 - 1");
        assert_eq!(UniPoly::zero(&f).to_string(), "0");
    }
}
