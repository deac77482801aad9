//! Polynomials in `K[t][x]`, stored as rows: row `i` is the coefficient of
//! `x^i`, itself a polynomial in `t`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{dense, UniPoly};
use crate::arith::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: Field,
    rows: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(field: Field, mut rows: Vec<UniPoly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { field, rows }
    }

    pub fn zero(field: &Field) -> Self {
        BiPoly { field: field.clone(), rows: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_t(&UniPoly::one(field))
    }

    /// A polynomial in `t` alone.
    pub fn from_t(p: &UniPoly) -> Self {
        Self::new(p.field().clone(), vec![p.clone()])
    }

    /// A polynomial in `x` alone.
    pub fn from_x(p: &UniPoly) -> Self {
        let f = p.field();
        Self::new(f.clone(), p.coeffs().iter().map(|c| UniPoly::constant(f, c.clone())).collect())
    }

    /// `x - t`
    pub fn x_minus_t(field: &Field) -> Self {
        let t = UniPoly::var(field);
        Self::new(field.clone(), vec![t.neg(), UniPoly::one(field)])
    }

    /// `n(x) d(t) - n(t) d(x)`
    pub fn nabla(num: &UniPoly, den: &UniPoly) -> Self {
        let f = num.field().clone();
        let size = num.coeffs().len().max(den.coeffs().len());
        if f == Field::Rational {
            // coefficient of x^i t^j is (n_i d_j - n_j d_i), over a common denominator
            let (n, dn) = dense::integers(num.coeffs());
            let (d, dd) = dense::integers(den.coeffs());
            let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
            let common = dn * dd;
            let rows = (0..size)
                .map(|i| {
                    let row = (0..size)
                        .map(|j| Elem::Q(BigRational::new(get(&n, i) * get(&d, j) - get(&n, j) * get(&d, i), common.clone())))
                        .collect();
                    UniPoly::new(f.clone(), row)
                })
                .collect();
            return Self::new(f, rows);
        }
        let rows = (0..size)
            .map(|i| {
                let row = (0..size)
                    .map(|j| f.sub(&f.mul(&num.coeff(i), &den.coeff(j)), &f.mul(&num.coeff(j), &den.coeff(i))))
                    .collect();
                UniPoly::new(f.clone(), row)
            })
            .collect();
        Self::new(f, rows)
    }

    /// From a map `(i, j) -> coefficient of x^i t^j`.
    pub fn from_terms(field: &Field, terms: &[(usize, usize, Elem)]) -> Self {
        let dx = terms.iter().map(|t| t.0).max().map_or(0, |d| d + 1);
        let mut rows = vec![UniPoly::zero(field); dx];
        for (i, j, c) in terms {
            rows[*i] = rows[*i].add(&UniPoly::monomial(field, c.clone(), *j));
        }
        Self::new(field.clone(), rows)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> &[UniPoly] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> UniPoly {
        self.rows.get(i).cloned().unwrap_or_else(|| UniPoly::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn lc_x(&self) -> UniPoly {
        self.rows.last().cloned().unwrap_or_else(|| UniPoly::zero(&self.field))
    }

    pub fn coeff(&self, i: usize, j: usize) -> Elem {
        self.rows.get(i).map_or_else(|| self.field.zero(), |r| r.coeff(j))
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.field, other.field, "bivariate polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n).map(|i| self.row(i).add(&other.row(i))).collect();
        Self::new(self.field.clone(), rows)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n).map(|i| self.row(i).sub(&other.row(i))).collect();
        Self::new(self.field.clone(), rows)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field.clone(), self.rows.iter().map(|r| r.neg()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        if self.field == Field::Rational {
            return self.mul_rational(other);
        }
        let mut rows = vec![UniPoly::zero(&self.field); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rows.iter().enumerate() {
                if !b.is_zero() {
                    rows[i + j] = rows[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(self.field.clone(), rows)
    }

    /// Integer convolution over a common denominator.
    fn mul_rational(&self, other: &Self) -> Self {
        let flat = |b: &Self| -> (Vec<Vec<BigInt>>, BigInt) {
            let all: Vec<Elem> = b.rows.iter().flat_map(|r| r.coeffs().iter().cloned()).collect();
            let (_, den) = dense::integers(&all);
            let rows = b.rows.iter().map(|r| r.coeffs().iter().map(|c| match c {
                Elem::Q(q) => q.numer() * (&den / q.denom()),
                _ => unreachable!(),
            }).collect()).collect();
            (rows, den)
        };
        let (a, da) = flat(self);
        let (b, db) = flat(other);
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new(); a.len() + b.len() - 1];
        for (i, ra) in a.iter().enumerate() {
            for (j, rb) in b.iter().enumerate() {
                if ra.is_empty() || rb.is_empty() {
                    continue;
                }
                let row = &mut out[i + j];
                if row.len() < ra.len() + rb.len() - 1 {
                    row.resize(ra.len() + rb.len() - 1, BigInt::zero());
                }
                for (k, x) in ra.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (l, y) in rb.iter().enumerate() {
                        if !y.is_zero() {
                            row[k + l] += x * y;
                        }
                    }
                }
            }
        }
        let den = da * db;
        let f = Field::Rational;
        let rows = out
            .into_iter()
            .map(|r| UniPoly::new(f.clone(), r.into_iter().map(|c| Elem::Q(BigRational::new(c, den.clone()))).collect()))
            .collect();
        Self::new(f, rows)
    }

    /// Multiplication by a polynomial in `t`.
    pub fn mul_t(&self, p: &UniPoly) -> Self {
        Self::new(self.field.clone(), self.rows.iter().map(|r| r.mul(p)).collect())
    }

    pub fn scale(&self, c: &Elem) -> Self {
        Self::new(self.field.clone(), self.rows.iter().map(|r| r.scale(c)).collect())
    }

    pub fn shift_x(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut rows = vec![UniPoly::zero(&self.field); k];
        rows.extend(self.rows.iter().cloned());
        Self::new(self.field.clone(), rows)
    }

    pub fn derivative_x(&self) -> Self {
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, r)| r.scale(&f.from_i64(i as i64)))
            .collect();
        Self::new(f.clone(), rows)
    }

    /// Substitutes `x = c`; the result is a polynomial in `t`.
    pub fn eval_x(&self, c: &Elem) -> UniPoly {
        let mut acc = UniPoly::zero(&self.field);
        for r in self.rows.iter().rev() {
            acc = acc.scale(c).add(r);
        }
        acc
    }

    /// Substitutes `t = a` with `a` in an extension `target` of the
    /// coefficient field; the result is a polynomial in `x` over `target`.
    pub fn eval_t(&self, target: &Field, a: &Elem) -> UniPoly {
        UniPoly::new(target.clone(), self.rows.iter().map(|r| r.eval_in(target, a)).collect())
    }

    /// Exchanges the roles of `x` and `t`.
    pub fn swap(&self) -> Self {
        let f = &self.field;
        let dt = self.deg_t().map_or(0, |d| d + 1);
        let rows = (0..dt)
            .map(|j| UniPoly::new(f.clone(), self.rows.iter().map(|r| r.coeff(j)).collect()))
            .collect();
        Self::new(f.clone(), rows)
    }

    pub fn embed(&self, target: &Field) -> Self {
        Self::new(target.clone(), self.rows.iter().map(|r| r.embed(target)).collect())
    }

    pub fn project(&self, target: &Field) -> Option<Self> {
        let rows: Option<Vec<UniPoly>> = self.rows.iter().map(|r| r.project(target)).collect();
        rows.map(|r| Self::new(target.clone(), r))
    }

    /// Applies `t -> t + a` to every row.
    pub fn shift_t(&self, a: &Elem) -> Self {
        Self::new(self.field.clone(), self.rows.iter().map(|r| r.taylor_shift(a)).collect())
    }

    /// Gcd of the rows (monic), the content with respect to `x`.
    pub fn content_x(&self) -> UniPoly {
        let mut g = UniPoly::zero(&self.field);
        for r in &self.rows {
            g = g.gcd(r);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with respect to `x`, scaled so that the leading
    /// coefficient in `x` is a monic polynomial in `t`.
    pub fn primitive_part_x(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_x();
        let mut p = if c.is_one() { self.clone() } else { self.div_t_exact(&c) };
        let lc = p.lc_x().lc();
        if !self.field.is_one(&lc) {
            p = p.scale(&self.field.inv(&lc).expect("nonzero"));
        }
        p
    }

    /// Divides every row by `p`, which must divide each row.
    pub fn div_t_exact(&self, p: &UniPoly) -> Self {
        Self::new(self.field.clone(), self.rows.iter().map(|r| r.div_exact(p)).collect())
    }

    /// Exact quotient in `K[t][x]`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.same_field(d);
        assert!(!d.is_zero(), "bivariate division by zero");
        if self.is_zero() {
            return Some(self.clone());
        }
        let dd = d.rows.len() - 1;
        let lc = d.lc_x();
        if self.rows.len() < d.rows.len() {
            return None;
        }
        let mut r = self.rows.clone();
        let mut q = vec![UniPoly::zero(&self.field); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.divrem(&lc).ok()?;
            if !rem.is_zero() {
                return None;
            }
            for (i, di) in d.rows.iter().enumerate().take(dd) {
                if !di.is_zero() {
                    r[k + i] = r[k + i].sub(&c.mul(di));
                }
            }
            r[k + dd] = UniPoly::zero(&self.field);
            q[k] = c;
        }
        if r.iter().any(|row| !row.is_zero()) {
            return None;
        }
        Some(Self::new(self.field.clone(), q))
    }

    /// Whether `d` divides `self`; fraction-free over the rationals.
    pub fn divides_into(&self, d: &Self) -> bool {
        match self.field {
            Field::Rational => super::int::bivariate_divides_rational(self, d),
            _ => self.div_exact(d).is_some(),
        }
    }

    /// Pseudo-remainder: `lc_x(b)^e * self = Q*b + R` with `e` given.
    /// `e` must be at least `deg_x(self) - deg_x(b) + 1` when that is positive.
    pub fn prem(&self, b: &Self, e: usize) -> Self {
        assert!(!b.is_zero());
        let db = b.rows.len() - 1;
        let lc = b.lc_x();
        // premultiply once; every elimination step then divides exactly by lc
        let mut r = self.mul_t(&lc.pow(e as u64));
        while let Some(dr) = r.deg_x() {
            if dr < db {
                break;
            }
            let top = r.lc_x();
            let c = top.div_exact(&lc);
            let shifted = b.mul_t(&c).shift_x(dr - db);
            r = r.sub(&shifted);
        }
        r
    }

    /// Canonical order: `deg_x`, then `deg_t`, then coefficients from the top row.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.deg_x()
            .cmp(&other.deg_x())
            .then_with(|| self.deg_t().cmp(&other.deg_t()))
            .then_with(|| {
                for (a, b) in self.rows.iter().rev().zip(other.rows.iter().rev()) {
                    let o = a.cmp_canonical(b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }

    /// Text form as a polynomial in `x` and `t`.
    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for i in (0..self.rows.len()).rev() {
            let row = &self.rows[i];
            for j in (0..row.coeffs().len()).rev() {
                let c = &row.coeffs()[j];
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
                let mut mono = Vec::new();
                if i > 0 {
                    mono.push(if i > 1 { format!("x^{i}") } else { "x".into() });
                }
                if j > 0 {
                    mono.push(if j > 1 { format!("t^{j}") } else { "t".into() });
                }
                let compound = cs.contains(['+', '-', '/', ' ']);
                let cs = if compound && (!mono.is_empty() || matches!(f, Field::Ext(_))) {
                    format!("({cs})")
                } else {
                    cs
                };
                if mono.is_empty() {
                    out.push_str(&cs);
                } else {
                    if cs != "1" {
                        out.push_str(&cs);
                        out.push('*');
                    }
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nabla_of_t4_factors_exactly() {
        let f = Field::Rational;
        let n = UniPoly::from_i64s(&f, &[0, 0, 0, 0, 1]);
        let nab = BiPoly::nabla(&n, &UniPoly::one(&f));
        let g1 = BiPoly::x_minus_t(&f);
        let q = nab.div_exact(&g1).unwrap();
        assert_eq!(q.deg_x(), Some(3));
        assert!(nab.div_exact(&BiPoly::from_x(&UniPoly::from_i64s(&f, &[1, 1]))).is_none());
        assert_eq!(nab.format(), "x^4 - t^4");
    }

    #[test]
    fn swap_twice_is_identity() {
        let f = Field::Prime(5);
        let p = BiPoly::from_terms(&f, &[(2, 1, Elem::P(3)), (0, 3, Elem::P(1)), (1, 0, Elem::P(4))]);
        assert_eq!(p.swap().swap(), p);
        assert_eq!(p.swap().deg_x(), Some(3));
    }

    #[test]
    fn pseudo_remainder_identity() {
        let f = Field::Rational;
        let t = UniPoly::var(&f);
        let a = BiPoly::from_terms(&f, &[(3, 0, f.one()), (0, 2, f.one())]);
        let b = BiPoly::new(f.clone(), vec![UniPoly::one(&f), t.clone()]); // t x + 1
        let r = a.prem(&b, 3);
        assert!(r.deg_x().map_or(true, |d| d == 0));
        // lc^3 a - r is divisible by b
        let lhs = a.mul_t(&t.pow(3)).sub(&r);
        assert!(lhs.div_exact(&b).is_some());
    }
}
