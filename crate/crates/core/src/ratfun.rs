//! Rational-function constructions: Möbius units, normal forms,
//! composition, the bivariate polynomial `n(x)d(t) - n(t)d(x)`, and the
//! preprocessing that makes the minimal polynomial monic and separable.

use std::fmt;

use thiserror::Error;

use crate::arith::{Elem, Field};
use crate::poly::{ratfun_reduce, BiPoly, RatFun, RatPolyX, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("expected a non-constant rational function")]
    Constant,
    #[error("singular unit")]
    SingularUnit,
    #[error("removing Frobenius powers did not make {0} separable")]
    Inseparable(String),
}

/// `x -> (a x + b)/(c x + d)` with `ad - bc != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    field: Field,
    a: Elem,
    b: Elem,
    c: Elem,
    d: Elem,
}

impl Unit {
    pub fn new(field: &Field, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Self, RatFunError> {
        let det = field.sub(&field.mul(&a, &d), &field.mul(&b, &c));
        if field.is_zero(&det) {
            return Err(RatFunError::SingularUnit);
        }
        Ok(Unit { field: field.clone(), a, b, c, d })
    }

    pub fn identity(field: &Field) -> Self {
        Unit { field: field.clone(), a: field.one(), b: field.zero(), c: field.zero(), d: field.one() }
    }

    /// `x - k`
    pub fn translation(field: &Field, k: &Elem) -> Self {
        Unit { field: field.clone(), a: field.one(), b: field.neg(k), c: field.zero(), d: field.one() }
    }

    /// `1/x`
    pub fn reciprocal(field: &Field) -> Self {
        Unit { field: field.clone(), a: field.zero(), b: field.one(), c: field.one(), d: field.zero() }
    }

    /// `s x`, `s != 0`
    pub fn scaling(field: &Field, s: &Elem) -> Self {
        Unit { field: field.clone(), a: s.clone(), b: field.zero(), c: field.zero(), d: field.one() }
    }

    pub fn is_identity(&self) -> bool {
        let f = &self.field;
        f.is_zero(&self.b) && f.is_zero(&self.c) && f.is_one(&f.div(&self.a, &self.d).unwrap())
    }

    /// `self ∘ inner`
    pub fn after(&self, inner: &Unit) -> Unit {
        let f = &self.field;
        let m = |x: &Elem, y: &Elem, z: &Elem, w: &Elem| f.add(&f.mul(x, y), &f.mul(z, w));
        Unit {
            field: f.clone(),
            a: m(&self.a, &inner.a, &self.b, &inner.c),
            b: m(&self.a, &inner.b, &self.b, &inner.d),
            c: m(&self.c, &inner.a, &self.d, &inner.c),
            d: m(&self.c, &inner.b, &self.d, &inner.d),
        }
    }

    pub fn inverse(&self) -> Unit {
        let f = &self.field;
        Unit { field: f.clone(), a: self.d.clone(), b: f.neg(&self.b), c: f.neg(&self.c), d: self.a.clone() }
    }

    /// `self ∘ g`
    pub fn apply(&self, g: &RatFun) -> RatFun {
        let (p, q) = (g.num(), g.den());
        let num = p.scale(&self.a).add(&q.scale(&self.b));
        let den = p.scale(&self.c).add(&q.scale(&self.d));
        ratfun_reduce(&num, &den).expect("unit keeps the denominator nonzero")
    }

    /// The unit as a rational function of `t`.
    pub fn as_ratfun(&self) -> RatFun {
        self.apply(&RatFun::t(&self.field))
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_ratfun())
    }
}

/// `g ∘ h`; `h` must be non-constant.
pub fn compose(g: &RatFun, h: &RatFun) -> Result<RatFun, RatFunError> {
    if h.is_constant() {
        return Err(RatFunError::Constant);
    }
    Ok(g.compose(h))
}

/// The normalized generator of `K(f)` and the unit `u` with `u ∘ f` equal to it.
pub fn normal_form(f: &RatFun) -> Result<(RatFun, Unit), RatFunError> {
    if f.is_constant() {
        return Err(RatFunError::Constant);
    }
    let field = f.field().clone();
    let mut cur = f.clone();
    let mut unit = Unit::identity(&field);
    let push = |u: Unit, cur: &mut RatFun, unit: &mut Unit| {
        *cur = u.apply(cur);
        *unit = u.after(unit);
    };
    let deg = |g: &RatFun| (g.num().deg0(), g.den().deg0());
    let at0 = |p: &UniPoly| p.coeff(0);
    if deg(&cur).0 == deg(&cur).1 {
        let k = field.div(&cur.num().lc(), &cur.den().lc()).unwrap();
        push(Unit::translation(&field, &k), &mut cur, &mut unit);
    }
    if deg(&cur).0 < deg(&cur).1 && !field.is_zero(&at0(cur.num())) {
        push(Unit::reciprocal(&field), &mut cur, &mut unit);
    }
    if deg(&cur).0 > deg(&cur).1 && !field.is_zero(&at0(cur.num())) {
        let q0 = at0(cur.den());
        if field.is_zero(&q0) {
            // numerator and denominator swap; the new numerator vanishes at 0
            push(Unit::reciprocal(&field), &mut cur, &mut unit);
        } else {
            let k = field.div(&at0(cur.num()), &q0).unwrap();
            push(Unit::translation(&field, &k), &mut cur, &mut unit);
        }
    }
    let (m, n) = deg(&cur);
    if m < n {
        let qm = cur.den().coeff(m);
        if !field.is_zero(&qm) {
            let c = field.div(&qm, &cur.num().lc()).unwrap();
            let u = Unit::new(&field, field.one(), field.zero(), field.neg(&c), field.one()).unwrap();
            push(u, &mut cur, &mut unit);
        }
    }
    let lc = cur.num().lc();
    if !field.is_one(&lc) {
        let s = field.inv(&lc).unwrap();
        push(Unit::scaling(&field, &s), &mut cur, &mut unit);
    }
    Ok((cur, unit))
}

/// Whether `f` satisfies the normalization conditions.
pub fn is_normalized(f: &RatFun) -> bool {
    let (p, q) = (f.num(), f.den());
    if f.is_constant() || !p.is_monic() || !q.is_monic() || !f.field().is_zero(&p.coeff(0)) {
        return false;
    }
    let (m, n) = (p.deg0(), q.deg0());
    m > n || (m < n && f.field().is_zero(&q.coeff(m)))
}

/// Normal form, inverted when the numerator has the smaller degree so that
/// the numerator is monic of full degree. Returns `(g, u)` with `g = u ∘ f`.
pub fn generator_form(f: &RatFun) -> Result<(RatFun, Unit), RatFunError> {
    let (g, u) = normal_form(f)?;
    if g.num().deg0() < g.den().deg0() {
        let r = Unit::reciprocal(f.field());
        return Ok((r.apply(&g), r.after(&u)));
    }
    Ok((g, u))
}

/// `n(x) d(t) - n(t) d(x)`
pub fn build_nabla(f: &RatFun) -> BiPoly {
    BiPoly::nabla(f.num(), f.den())
}

/// `n(x) - f(t) d(x)`
pub fn build_phi(f: &RatFun) -> RatPolyX {
    RatPolyX::phi(f)
}

/// Numerator of the derivative, `n' d - n d'`.
pub fn derivative_numerator(f: &RatFun) -> UniPoly {
    f.num().derivative().mul(f.den()).sub(&f.num().mul(&f.den().derivative()))
}

/// `f` with every exponent divided by `p`; requires `f ∈ K(t^p)`.
fn frobenius_peel(f: &RatFun, p: usize) -> RatFun {
    let take = |u: &UniPoly| UniPoly::new(u.field().clone(), u.coeffs().iter().step_by(p).cloned().collect());
    ratfun_reduce(&take(f.num()), &take(f.den())).unwrap()
}

#[derive(Clone, Debug)]
pub struct PreparedInput {
    pub original: RatFun,
    /// `original` with the Frobenius tail removed: `original = peeled ∘ t^(p^s)`.
    pub peeled: RatFun,
    /// Generator form of `peeled`.
    pub working: RatFun,
    /// `working = left_unit ∘ peeled`.
    pub left_unit: Unit,
    pub frobenius_exponent: u32,
}

impl PreparedInput {
    pub fn characteristic(&self) -> u64 {
        self.original.field().characteristic()
    }
}

pub fn prepare(f: &RatFun) -> Result<PreparedInput, RatFunError> {
    if f.is_constant() {
        return Err(RatFunError::Constant);
    }
    let p = f.field().characteristic() as usize;
    let mut peeled = f.clone();
    let mut s = 0;
    while p > 0 && derivative_numerator(&peeled).is_zero() {
        peeled = frobenius_peel(&peeled, p);
        s += 1;
    }
    let (working, left_unit) = generator_form(&peeled)?;
    if working.degree() > 1 && derivative_numerator(&working).is_zero() {
        return Err(RatFunError::Inseparable(f.to_string()));
    }
    Ok(PreparedInput { original: f.clone(), peeled, working, left_unit, frobenius_exponent: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfun;

    fn q(s: &str) -> RatFun {
        parse_ratfun(s, &Field::Rational).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        for (input, expected) in [
            ("2*t^2+3", "t^2"),
            ("1/t", "t"),
            ("t/(t^2+1)", "t/(t^2 + 1)"),
            ("(t^12-1)/(t^8+t^4)", "(t^8 + t^4)/(t^12 - 1)"),
        ] {
            let f = q(input);
            let (g, u) = normal_form(&f).unwrap();
            assert_eq!(g.to_string(), expected, "{input}");
            assert_eq!(u.apply(&f), g);
            assert!(is_normalized(&g));
            assert_eq!(normal_form(&g).unwrap().0, g);
        }
        assert_eq!(normal_form(&q("3")), Err(RatFunError::Constant));
    }

    #[test]
    fn unit_inverse_round_trip() {
        let f = Field::Rational;
        let u = Unit::new(&f, f.from_i64(2), f.from_i64(1), f.from_i64(1), f.from_i64(1)).unwrap();
        assert!(u.after(&u.inverse()).is_identity());
        let g = q("(t^3-1)/(t^2+t)");
        assert_eq!(u.inverse().apply(&u.apply(&g)), g);
        assert!(Unit::new(&f, f.one(), f.one(), f.one(), f.one()).is_err());
    }

    #[test]
    fn compositions() {
        assert_eq!(compose(&q("t^2"), &q("t^3")).unwrap(), q("t^6"));
        assert_eq!(compose(&q("(t^3-1)/(t^2+t)"), &q("t^4")).unwrap(), q("(t^12-1)/(t^8+t^4)"));
        let chain = [q("t^2"), q("(t^3-1)/(t^2+t)"), q("t^2"), q("t^2")];
        let all = chain.iter().skip(1).fold(chain[0].clone(), |acc, h| compose(&acc, h).unwrap());
        assert_eq!(all, q("(t^24-2*t^12+1)/(t^16+2*t^12+t^8)"));
        assert!(compose(&q("t"), &q("5")).is_err());
    }

    #[test]
    fn nabla_and_phi() {
        let f = q("(t^2+1)/t");
        let nab = build_nabla(&f);
        assert_eq!(nab, nab.swap().neg());
        assert_eq!(nab.format(), "x^2*t - x*t^2 - x + t");
        let phi = build_phi(&q("t^2"));
        assert_eq!(phi.to_string(), "x^2 - t^2");
    }

    #[test]
    fn prepare_examples() {
        let prep = prepare(&q("2*t^2+3")).unwrap();
        assert_eq!(prep.frobenius_exponent, 0);
        assert_eq!(prep.working, q("t^2"));

        let f2 = Field::Prime(2);
        let prep = prepare(&parse_ratfun("t^4", &f2).unwrap()).unwrap();
        assert_eq!(prep.frobenius_exponent, 2);
        assert_eq!(prep.working, RatFun::t(&f2));

        let prep = prepare(&parse_ratfun("t^6+t^2", &f2).unwrap()).unwrap();
        assert_eq!(prep.frobenius_exponent, 1);
        assert_eq!(prep.working, parse_ratfun("t^3+t", &f2).unwrap());
    }

    #[test]
    fn generator_form_has_monic_numerator() {
        let (g, u) = generator_form(&q("t/(t^2+1)")).unwrap();
        assert_eq!(g, q("t+1/t"));
        assert_eq!(u.apply(&q("t/(t^2+1)")), g);
    }
}
