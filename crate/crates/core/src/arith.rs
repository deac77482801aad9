//! Exact base-field arithmetic.
//!
//! A [`Field`] is a runtime descriptor: the rationals, a prime field `F_p`, or
//! a simple algebraic extension `B[y]/(m(y))` of another finite field `B`.
//! Elements ([`Elem`]) carry no descriptor; all operations go through the
//! field, which keeps polynomial coefficient vectors compact. [`FieldElement`]
//! pairs a value with its descriptor for checked, boundary-level use.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not invertible in {1}")]
    NotInvertible(String, String),
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("cannot parse field element {0:?}")]
    ParseElement(String),
    #[error("operation requires a finite field, got {0}")]
    NotFinite(String),
    #[error("modulus is not a monic irreducible polynomial of positive degree")]
    BadModulus,
    #[error("divisor is not monic")]
    NotMonic,
}

/// Field element value. Canonical: rationals in lowest terms with positive
/// denominator, residues in `[0, p)`, extension elements as coefficient
/// vectors over the base without trailing zeros (zero is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Q(BigRational),
    P(u64),
    E(Vec<Elem>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    base: Field,
    /// Monic, irreducible over `base`; index i holds the coefficient of y^i.
    modulus: Vec<Elem>,
    characteristic: u64,
    /// Cardinality is `characteristic ^ prime_degree`.
    prime_degree: u32,
    depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
    Ext(Arc<Extension>),
}

impl Field {
    pub fn rationals() -> Field {
        Field::Rational
    }

    pub fn prime(p: u64) -> Result<Field, ArithError> {
        if !is_prime_u64(p) {
            return Err(ArithError::InvalidDescriptor(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(ArithError::InvalidDescriptor(format!("prime {p} too large")));
        }
        Ok(Field::Prime(p))
    }

    /// `base[y]/(modulus)`; the modulus must be monic and irreducible over `base`.
    pub fn extension(base: Field, modulus: Vec<Elem>) -> Result<Field, ArithError> {
        if !base.is_finite() {
            return Err(ArithError::NotFinite(base.to_string()));
        }
        let m = UniPoly::new(base.clone(), modulus);
        if m.degree().unwrap_or(0) < 1 || !m.is_monic() || !m.is_irreducible() {
            return Err(ArithError::BadModulus);
        }
        Ok(Self::extension_unchecked(base, m.into_coeffs()))
    }

    pub(crate) fn extension_unchecked(base: Field, modulus: Vec<Elem>) -> Field {
        let deg = modulus.len() as u32 - 1;
        let characteristic = base.characteristic();
        let prime_degree = base.prime_degree() * deg;
        let depth = base.depth() + 1;
        Field::Ext(Arc::new(Extension {
            base,
            modulus,
            characteristic,
            prime_degree,
            depth,
        }))
    }

    /// Parses `q`, `fp:<p>` or `fp:<p>^<k>`.
    pub fn parse(text: &str) -> Result<Field, ArithError> {
        let s = text.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let rest = s
            .strip_prefix("fp:")
            .ok_or_else(|| ArithError::InvalidDescriptor(s.to_string()))?;
        let bad = || ArithError::InvalidDescriptor(s.to_string());
        let (p, k) = match rest.split_once('^') {
            Some((p, k)) => (p.parse::<u64>().map_err(|_| bad())?, k.parse::<usize>().map_err(|_| bad())?),
            None => (rest.parse::<u64>().map_err(|_| bad())?, 1),
        };
        if k == 0 {
            return Err(bad());
        }
        let fp = Field::prime(p)?;
        make_extension(&fp, k)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
            Field::Ext(e) => e.characteristic,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Field::Rational)
    }

    /// Degree over the prime field (1 for `F_p`, 0 for the rationals).
    pub fn prime_degree(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(_) => 1,
            Field::Ext(e) => e.prime_degree,
        }
    }

    fn depth(&self) -> u32 {
        match self {
            Field::Ext(e) => e.depth,
            _ => 0,
        }
    }

    pub fn cardinality(&self) -> Option<BigUint> {
        match self {
            Field::Rational => None,
            _ => Some(BigUint::from(self.characteristic()).pow(self.prime_degree())),
        }
    }

    /// Cardinality if it fits in a `u64`.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.cardinality().and_then(|c| c.to_u64())
    }

    pub fn base(&self) -> Option<&Field> {
        match self {
            Field::Ext(e) => Some(&e.base),
            _ => None,
        }
    }

    /// Degree over the immediate base (1 for non-extensions).
    pub fn ext_degree(&self) -> usize {
        match self {
            Field::Ext(e) => e.modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn modulus(&self) -> Option<&[Elem]> {
        match self {
            Field::Ext(e) => Some(&e.modulus),
            _ => None,
        }
    }

    /// The class of `y` in an extension.
    pub fn generator(&self) -> Option<Elem> {
        match self {
            Field::Ext(e) => {
                if e.modulus.len() == 2 {
                    // degree one: y is the root of the linear modulus
                    Some(Elem::E(trim_vec(&e.base, vec![e.base.neg(&e.modulus[0])])))
                } else {
                    Some(Elem::E(vec![e.base.zero(), e.base.one()]))
                }
            }
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            Field::Rational => Elem::Q(BigRational::zero()),
            Field::Prime(_) => Elem::P(0),
            Field::Ext(_) => Elem::E(Vec::new()),
        }
    }

    pub fn one(&self) -> Elem {
        match self {
            Field::Rational => Elem::Q(BigRational::one()),
            Field::Prime(_) => Elem::P(1),
            Field::Ext(e) => Elem::E(vec![e.base.one()]),
        }
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match self {
            Field::Rational => Elem::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Elem::P(v.rem_euclid(*p as i64) as u64),
            Field::Ext(e) => Elem::E(trim_vec(&e.base, vec![e.base.from_i64(v)])),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self {
            Field::Rational => Elem::Q(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Elem::P(bigint_mod(v, *p)),
            Field::Ext(e) => Elem::E(trim_vec(&e.base, vec![e.base.from_bigint(v)])),
        }
    }

    /// Maps `a/b` into the field; fails when `b` vanishes in the field.
    pub fn from_rational(&self, v: &BigRational) -> Result<Elem, ArithError> {
        match self {
            Field::Rational => Ok(Elem::Q(v.clone())),
            _ => {
                let n = self.from_bigint(v.numer());
                let d = self.from_bigint(v.denom());
                self.div(&n, &d).map_err(|_| {
                    ArithError::NotInvertible(v.denom().to_string(), self.to_string())
                })
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Q(q) => q.is_zero(),
            Elem::P(v) => *v == 0,
            Elem::E(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match (self, a) {
            (_, Elem::Q(q)) => q.is_one(),
            (_, Elem::P(v)) => *v == 1,
            (Field::Ext(e), Elem::E(c)) => c.len() == 1 && e.base.is_one(&c[0]),
            _ => false,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (_, Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Field::Prime(p), Elem::P(x), Elem::P(y)) => {
                let s = x + y;
                Elem::P(if s >= *p { s - p } else { s })
            }
            (Field::Ext(e), Elem::E(x), Elem::E(y)) => Elem::E(vec_add(&e.base, x, y)),
            _ => panic!("element/field mismatch in add"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (_, Elem::Q(x)) => Elem::Q(-x),
            (Field::Prime(p), Elem::P(x)) => Elem::P(if *x == 0 { 0 } else { p - x }),
            (Field::Ext(e), Elem::E(x)) => Elem::E(x.iter().map(|c| e.base.neg(c)).collect()),
            _ => panic!("element/field mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (_, Elem::Q(x), Elem::Q(y)) => Elem::Q(x - y),
            (Field::Prime(p), Elem::P(x), Elem::P(y)) => Elem::P(if x >= y { x - y } else { p - y + x }),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (_, Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Field::Prime(p), Elem::P(x), Elem::P(y)) => Elem::P(mulmod(*x, *y, *p)),
            (Field::Ext(e), Elem::E(x), Elem::E(y)) => Elem::E(e.mul(x, y)),
            _ => panic!("element/field mismatch in mul"),
        }
    }

    /// `a + b*c`
    pub fn mul_add(&self, a: &Elem, b: &Elem, c: &Elem) -> Elem {
        match (self, a, b, c) {
            (Field::Prime(p), Elem::P(x), Elem::P(y), Elem::P(z)) => {
                Elem::P(((*x as u128 + *y as u128 * *z as u128) % *p as u128) as u64)
            }
            _ => self.add(a, &self.mul(b, c)),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem, ArithError> {
        if self.is_zero(a) {
            return Err(ArithError::DivisionByZero);
        }
        Ok(match (self, a) {
            (_, Elem::Q(x)) => Elem::Q(x.recip()),
            (Field::Prime(p), Elem::P(x)) => Elem::P(inv_mod(*x, *p)),
            (Field::Ext(e), Elem::E(x)) => Elem::E(e.inv(x)),
            _ => panic!("element/field mismatch in inv"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Inverse Frobenius `a^(1/p)` in a finite field.
    pub fn pth_root(&self, a: &Elem) -> Elem {
        match self {
            Field::Prime(_) => a.clone(),
            Field::Ext(e) => {
                let exp = BigUint::from(e.characteristic).pow(e.prime_degree - 1);
                self.pow_big(a, &exp)
            }
            Field::Rational => panic!("pth_root over the rationals"),
        }
    }

    /// Deterministic enumeration: for the rationals the non-negative integers,
    /// for finite fields all elements (base-q digits, least significant digit
    /// is the constant coefficient). Indices below the base cardinality map
    /// to embedded base elements.
    pub fn element(&self, index: u64) -> Option<Elem> {
        match self {
            Field::Rational => Some(self.from_i64(index as i64)),
            Field::Prime(p) => (index < *p).then_some(Elem::P(index)),
            Field::Ext(e) => {
                if let Some(card) = self.cardinality_u64() {
                    if index >= card {
                        return None;
                    }
                }
                let q = e.base.cardinality_u64();
                let mut digits = Vec::new();
                let mut rest = index;
                while rest > 0 {
                    match q {
                        Some(q) => {
                            digits.push(e.base.element(rest % q)?);
                            rest /= q;
                        }
                        None => {
                            digits.push(e.base.element(rest)?);
                            rest = 0;
                        }
                    }
                }
                Some(Elem::E(trim_vec(&e.base, digits)))
            }
        }
    }

    /// Embeds an element of `src` into `self`, where `self` is `src` or a
    /// tower of extensions over it.
    pub fn embed(&self, src: &Field, a: &Elem) -> Elem {
        if self == src {
            return a.clone();
        }
        match self {
            Field::Ext(e) => {
                let inner = e.base.embed(src, a);
                Elem::E(trim_vec(&e.base, vec![inner]))
            }
            _ => panic!("{src} does not embed into {self}"),
        }
    }

    /// Inverse of [`Field::embed`]: the element of `target` equal to `a`, if any.
    pub fn project(&self, target: &Field, a: &Elem) -> Option<Elem> {
        if self == target {
            return Some(a.clone());
        }
        match (self, a) {
            (Field::Ext(e), Elem::E(c)) => match c.len() {
                0 => Some(target.zero()),
                1 => e.base.project(target, &c[0]),
                _ => None,
            },
            _ => None,
        }
    }

    /// Coordinates of `a` over the immediate base, padded to the extension
    /// degree. Non-extensions yield `[a]`.
    pub fn coordinates(&self, a: &Elem) -> Vec<Elem> {
        match (self, a) {
            (Field::Ext(e), Elem::E(c)) => {
                let mut v = c.clone();
                v.resize(e.modulus.len() - 1, e.base.zero());
                v
            }
            _ => vec![a.clone()],
        }
    }

    /// Builds an extension element from base coordinates.
    pub fn from_coordinates(&self, coords: Vec<Elem>) -> Elem {
        match self {
            Field::Ext(e) => {
                let reduced = e.reduce(coords);
                Elem::E(reduced)
            }
            _ => coords.into_iter().next().unwrap_or_else(|| self.zero()),
        }
    }

    /// Total order used for canonical sorting. Rationals compare by absolute
    /// value with positive before negative; residues numerically; extension
    /// elements by length then coefficients from the top.
    pub fn cmp_elem(&self, a: &Elem, b: &Elem) -> Ordering {
        match (self, a, b) {
            (_, Elem::Q(x), Elem::Q(y)) => x
                .abs()
                .cmp(&y.abs())
                .then_with(|| x.is_negative().cmp(&y.is_negative())),
            (_, Elem::P(x), Elem::P(y)) => x.cmp(y),
            (Field::Ext(e), Elem::E(x), Elem::E(y)) => x.len().cmp(&y.len()).then_with(|| {
                for (u, v) in x.iter().rev().zip(y.iter().rev()) {
                    let o = e.base.cmp_elem(u, v);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }),
            _ => panic!("element/field mismatch in cmp"),
        }
    }

    /// Text form of an element: `a/b` for rationals, the residue for prime
    /// fields, a polynomial in the generator for extensions.
    pub fn format_elem(&self, a: &Elem) -> String {
        match (self, a) {
            (_, Elem::Q(q)) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            (_, Elem::P(v)) => v.to_string(),
            (Field::Ext(e), Elem::E(c)) => {
                if c.is_empty() {
                    return "0".to_string();
                }
                let var = generator_name(e.depth);
                let mut out = String::new();
                for (i, co) in c.iter().enumerate().rev() {
                    if e.base.is_zero(co) {
                        continue;
                    }
                    let cs = e.base.format_elem(co);
                    let cs = if cs.contains(['+', '-', ' ']) && !(e.base.is_one(co) && i > 0) {
                        format!("({cs})")
                    } else {
                        cs
                    };
                    if !out.is_empty() {
                        out.push('+');
                    }
                    match i {
                        0 => out.push_str(&cs),
                        _ => {
                            if !e.base.is_one(co) {
                                out.push_str(&cs);
                                out.push('*');
                            }
                            out.push_str(var);
                            if i > 1 {
                                out.push_str(&format!("^{i}"));
                            }
                        }
                    }
                }
                out
            }
            _ => panic!("element/field mismatch in format"),
        }
    }

    /// Parses the text produced by [`Field::format_elem`].
    pub fn parse_elem(&self, text: &str) -> Result<Elem, ArithError> {
        let s = text.trim();
        let bad = || ArithError::ParseElement(s.to_string());
        match self {
            Field::Rational | Field::Prime(_) => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(ArithError::DivisionByZero);
                }
                self.from_rational(&BigRational::new(n, d))
            }
            Field::Ext(e) => {
                let var = generator_name(e.depth);
                let mut acc = self.zero();
                let gen = self.generator().ok_or_else(bad)?;
                for term in split_terms(s) {
                    let term = term.trim();
                    if term.is_empty() {
                        return Err(bad());
                    }
                    let (coef, power) = match term.find(var) {
                        None => (strip_parens(term), 0u64),
                        Some(pos) => {
                            let before = term[..pos].trim_end_matches('*');
                            let after = &term[pos + var.len()..];
                            let power = match after.strip_prefix('^') {
                                Some(k) => k.parse::<u64>().map_err(|_| bad())?,
                                None if after.is_empty() => 1,
                                None => return Err(bad()),
                            };
                            let coef = if before.is_empty() { "1" } else { strip_parens(before) };
                            (coef, power)
                        }
                    };
                    let c = e.base.parse_elem(coef)?;
                    let c = self.embed(&e.base, &c);
                    acc = self.add(&acc, &self.mul(&c, &self.pow(&gen, power)));
                }
                Ok(acc)
            }
        }
    }
}

fn generator_name(depth: u32) -> &'static str {
    match depth {
        1 => "y",
        2 => "z",
        _ => "w",
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

/// Splits on top-level `+`.
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
            Field::Ext(e) => {
                if let Field::Prime(p) = e.base {
                    let searched = make_extension(&e.base, e.modulus.len() - 1).ok();
                    if searched.as_ref() == Some(self) {
                        return write!(f, "fp:{p}^{}", e.prime_degree);
                    }
                }
                let m = UniPoly::new(e.base.clone(), e.modulus.clone());
                write!(f, "{}[{}]/({})", e.base, generator_name(e.depth), m.format_var(generator_name(e.depth)))
            }
        }
    }
}

impl Extension {
    fn reduce(&self, mut v: Vec<Elem>) -> Vec<Elem> {
        let b = &self.base;
        let d = self.modulus.len() - 1;
        while v.len() > d {
            let top = v.pop().unwrap();
            if b.is_zero(&top) {
                continue;
            }
            let off = v.len() - d;
            for (i, m) in self.modulus[..d].iter().enumerate() {
                v[off + i] = b.sub(&v[off + i], &b.mul(&top, m));
            }
        }
        trim_vec(b, v)
    }

    fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        if x.is_empty() || y.is_empty() {
            return Vec::new();
        }
        let b = &self.base;
        let mut prod = vec![b.zero(); x.len() + y.len() - 1];
        for (i, u) in x.iter().enumerate() {
            if b.is_zero(u) {
                continue;
            }
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = b.mul_add(&prod[i + j], u, v);
            }
        }
        self.reduce(prod)
    }

    /// Extended Euclid against the modulus.
    fn inv(&self, x: &[Elem]) -> Vec<Elem> {
        let b = &self.base;
        let (g, s, _) = crate::poly::dense::xgcd(b, x, &self.modulus);
        debug_assert_eq!(g.len(), 1, "modulus not irreducible");
        let ginv = b.inv(&g[0]).expect("nonzero gcd");
        let s: Vec<Elem> = s.iter().map(|c| b.mul(c, &ginv)).collect();
        self.reduce(s)
    }
}

pub(crate) fn trim_vec(f: &Field, mut v: Vec<Elem>) -> Vec<Elem> {
    while v.last().is_some_and(|c| f.is_zero(c)) {
        v.pop();
    }
    v
}

fn vec_add(f: &Field, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let n = x.len().max(y.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (x.get(i), y.get(i)) {
            (Some(a), Some(b)) => f.add(a, b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim_vec(f, out)
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

pub(crate) fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `F_{q^degree}` over the finite field `base`, with the first irreducible
/// monic modulus in ascending lexicographic order.
pub fn make_extension(base: &Field, degree: usize) -> Result<Field, ArithError> {
    if !base.is_finite() {
        return Err(ArithError::NotFinite(base.to_string()));
    }
    if degree == 0 {
        return Err(ArithError::InvalidDescriptor("extension degree 0".into()));
    }
    if degree == 1 {
        return Ok(base.clone());
    }
    let mut index = 0u64;
    loop {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let q = base.cardinality_u64().unwrap_or(u64::MAX);
        let mut rest = index;
        for _ in 0..degree {
            coeffs.push(base.element(rest % q).expect("digit below cardinality"));
            rest /= q;
        }
        if rest > 0 {
            // every monic polynomial of this degree tried
            return Err(ArithError::BadModulus);
        }
        coeffs.push(base.one());
        let m = UniPoly::new(base.clone(), coeffs);
        if m.is_irreducible() {
            return Ok(Field::extension_unchecked(base.clone(), m.into_coeffs()));
        }
        index += 1;
    }
}

/// A value together with its field, for checked arithmetic at API boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn new(field: Field, value: Elem) -> Self {
        FieldElement { field, value }
    }

    pub fn parse(field: &Field, text: &str) -> Result<Self, ArithError> {
        Ok(FieldElement::new(field.clone(), field.parse_elem(text)?))
    }

    pub fn zero(field: &Field) -> Self {
        FieldElement::new(field.clone(), field.zero())
    }

    pub fn one(field: &Field) -> Self {
        FieldElement::new(field.clone(), field.one())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.field != other.field {
            return Err(ArithError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.div(&self.value, &other.value)?))
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        Ok(FieldElement::new(self.field.clone(), self.field.inv(&self.value)?))
    }

    pub fn neg(&self) -> Self {
        FieldElement::new(self.field.clone(), self.field.neg(&self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Elem {
        Elem::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn rational_sum() {
        let f = Field::Rational;
        assert_eq!(f.add(&q(1, 2), &q(1, 3)), q(5, 6));
    }

    #[test]
    fn prime_product() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.mul(&Elem::P(3), &Elem::P(5)), Elem::P(1));
    }

    #[test]
    fn inverse_in_f4() {
        let f4 = make_extension(&Field::Prime(2), 2).unwrap();
        let y = f4.generator().unwrap();
        let inv = f4.inv(&y).unwrap();
        // y(y+1) = y^2 + y = 1 mod y^2+y+1
        let y_plus_1 = f4.add(&y, &f4.one());
        assert_eq!(inv, y_plus_1);
        assert!(f4.is_one(&f4.mul(&y, &y_plus_1)));
    }

    #[test]
    fn f4_modulus_is_y2_y_1() {
        let f4 = make_extension(&Field::Prime(2), 2).unwrap();
        assert_eq!(f4.modulus().unwrap(), &[Elem::P(1), Elem::P(1), Elem::P(1)]);
        assert_eq!(f4.to_string(), "fp:2^2");
    }

    #[test]
    fn extension_degree_one_is_identity() {
        let f3 = Field::Prime(3);
        assert_eq!(make_extension(&f3, 1).unwrap(), f3);
    }

    #[test]
    fn extension_of_rationals_fails() {
        assert!(matches!(make_extension(&Field::Rational, 2), Err(ArithError::NotFinite(_))));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = Field::Rational;
        assert_eq!(f.div(&q(1, 1), &q(0, 1)), Err(ArithError::DivisionByZero));
        let a = FieldElement::new(f.clone(), q(1, 1));
        assert!(a.div(&FieldElement::zero(&f)).is_err());
    }

    #[test]
    fn mismatched_fields_are_an_error() {
        let a = FieldElement::one(&Field::Rational);
        let b = FieldElement::one(&Field::Prime(5));
        assert!(matches!(a.add(&b), Err(ArithError::FieldMismatch(_, _))));
    }

    #[test]
    fn descriptor_text() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("fp:7919").unwrap(), Field::Prime(7919));
        let f16 = Field::parse("fp:2^4").unwrap();
        assert_eq!(f16.cardinality_u64(), Some(16));
        assert_eq!(f16.to_string(), "fp:2^4");
        assert!(Field::parse("fp:8").is_err());
        assert!(Field::parse("zz").is_err());
    }

    #[test]
    fn rational_text_is_canonical() {
        let f = Field::Rational;
        let v = f.parse_elem("4/-6").unwrap();
        assert_eq!(v, q(-2, 3));
        assert_eq!(f.format_elem(&v), "-2/3");
    }

    #[test]
    fn not_invertible_in_fp() {
        let f2 = Field::Prime(2);
        assert!(f2.parse_elem("1/2").is_err());
        assert_eq!(f2.parse_elem("-1").unwrap(), Elem::P(1));
    }

    #[test]
    fn enumeration_of_extension_starts_with_base() {
        let f9 = make_extension(&Field::Prime(3), 2).unwrap();
        let all: Vec<Elem> = (0..9).map(|i| f9.element(i).unwrap()).collect();
        assert!(f9.element(9).is_none());
        for (i, e) in all.iter().take(3).enumerate() {
            assert_eq!(f9.project(&Field::Prime(3), e), Some(Elem::P(i as u64)));
        }
        let mut dedup = all.clone();
        dedup.sort_by(|a, b| f9.cmp_elem(a, b));
        dedup.dedup();
        assert_eq!(dedup.len(), 9);
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let f8 = make_extension(&Field::Prime(2), 3).unwrap();
        for i in 0..8 {
            let a = f8.element(i).unwrap();
            let r = f8.pth_root(&a);
            assert_eq!(f8.pow(&r, 2), a);
        }
    }

    #[test]
    fn tower_embedding_round_trip() {
        let f4 = make_extension(&Field::Prime(2), 2).unwrap();
        let f16 = make_extension(&f4, 2).unwrap();
        assert_eq!(f16.cardinality_u64(), Some(16));
        let y = f4.generator().unwrap();
        let e = f16.embed(&f4, &y);
        assert_eq!(f16.project(&f4, &e), Some(y));
        assert_eq!(f16.project(&Field::Prime(2), &e), None);
        let one = f16.embed(&Field::Prime(2), &Elem::P(1));
        assert!(f16.is_one(&one));
    }

    #[test]
    fn miller_rabin() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes.len(), 25);
        assert!(is_prime_u64(7919));
        assert!(!is_prime_u64(7917));
        assert!(is_prime_u64(1_000_000_007));
    }
}
