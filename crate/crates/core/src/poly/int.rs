//! Integer-coefficient helpers for polynomials over the rationals, and a
//! small-prime modular gcd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BiPoly, UniPoly};
use crate::arith::{bigint_mod, inv_mod, is_prime_u64, mulmod, Elem, Field};

/// Content (positive gcd of the coefficients); zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Scales a rational polynomial to a primitive integer polynomial with
/// positive leading coefficient.
pub fn primitive_integer(p: &UniPoly) -> Vec<BigInt> {
    let rats: Vec<&BigRational> = p
        .coeffs()
        .iter()
        .map(|c| match c {
            Elem::Q(q) => q,
            _ => panic!("expected rational coefficients"),
        })
        .collect();
    let mut den = BigInt::one();
    for q in &rats {
        den = den.lcm(q.denom());
    }
    let mut v: Vec<BigInt> = rats.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let c = content(&v);
    if !c.is_zero() && !c.is_one() {
        for x in v.iter_mut() {
            *x /= &c;
        }
    }
    if v.last().is_some_and(|l| l.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

pub fn from_integers(v: &[BigInt]) -> UniPoly {
    let f = Field::Rational;
    UniPoly::new(f.clone(), v.iter().map(|c| f.from_bigint(c)).collect())
}

/// Image of a rational polynomial in `F_p[x]`, if no denominator vanishes.
pub fn reduce_rational(a: &UniPoly, p: u64) -> Option<UniPoly> {
    let target = Field::Prime(p);
    let coeffs: Option<Vec<Elem>> = a
        .coeffs()
        .iter()
        .map(|c| match c {
            Elem::Q(q) => {
                let d = bigint_mod(q.denom(), p);
                (d != 0).then(|| Elem::P(mulmod(bigint_mod(q.numer(), p), inv_mod(d, p), p)))
            }
            _ => panic!("expected rational coefficients"),
        })
        .collect();
    coeffs.map(|c| UniPoly::new(target, c))
}

pub fn reduce_mod(v: &[BigInt], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = v.iter().map(|c| bigint_mod(c, p)).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

pub fn rem_u64(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = r.pop().unwrap();
        if top == 0 {
            continue;
        }
        let c = mulmod(top, inv, p);
        let off = r.len() - db;
        for i in 0..db {
            r[off + i] = (r[off + i] + p - mulmod(c, b[i], p)) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

pub fn monic_u64(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

pub fn gcd_u64(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = monic_u64(a, p);
    let mut r1 = monic_u64(b, p);
    while !r1.is_empty() {
        let r = rem_u64(&r0, &r1, p);
        r0 = r1;
        r1 = monic_u64(&r, p);
    }
    r0
}

/// Descending primes below 2^61, used for modular algorithms.
pub fn large_primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 61) - 1;
    std::iter::from_fn(move || {
        loop {
            n -= 2;
            if is_prime_u64(n) {
                return Some(n);
            }
        }
    })
}

fn symmetric(v: &BigInt, m: &BigInt) -> BigInt {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn divides_over_q(d: &UniPoly, a: &UniPoly) -> bool {
    a.is_zero() || a.rem(d).is_zero()
}

/// Monic gcd over the rationals via modular images and CRT.
pub fn gcd_rational(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let f = Field::Rational;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return UniPoly::one(&f);
    }
    let ai = primitive_integer(a);
    let bi = primitive_integer(b);
    let lc_gcd = ai.last().unwrap().gcd(bi.last().unwrap());
    let mut best_deg = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last_candidate: Option<Vec<BigInt>> = None;
    for p in large_primes() {
        let la = bigint_mod(ai.last().unwrap(), p);
        let lb = bigint_mod(bi.last().unwrap(), p);
        if la == 0 || lb == 0 {
            continue;
        }
        let ap = reduce_mod(&ai, p);
        let bp = reduce_mod(&bi, p);
        let g = gcd_u64(&ap, &bp, p);
        let d = g.len() - 1;
        if d == 0 {
            return UniPoly::one(&f);
        }
        if d > best_deg {
            continue;
        }
        let scale = bigint_mod(&lc_gcd, p);
        let g: Vec<u64> = g.iter().map(|&c| mulmod(c, scale, p)).collect();
        if d < best_deg {
            best_deg = d;
            acc = g.iter().map(|&c| BigInt::from(c)).collect();
            modulus = BigInt::from(p);
            last_candidate = None;
            continue;
        }
        // CRT: x = acc mod modulus, x = g mod p
        let pm = BigInt::from(p);
        let m_mod_p = bigint_mod(&modulus, p);
        let m_inv = inv_mod(m_mod_p, p);
        for (x, &gc) in acc.iter_mut().zip(&g) {
            let xr = bigint_mod(x, p);
            let diff = (gc + p - xr) % p;
            let k = mulmod(diff, m_inv, p);
            *x += &modulus * BigInt::from(k);
        }
        modulus *= &pm;
        let cand: Vec<BigInt> = acc.iter().map(|c| symmetric(c, &modulus)).collect();
        if last_candidate.as_ref() == Some(&cand) {
            let c = content(&cand);
            let prim: Vec<BigInt> = cand.iter().map(|x| x / &c).collect();
            let g = from_integers(&prim).monic();
            if divides_over_q(&g, a) && divides_over_q(&g, b) {
                return g;
            }
        }
        last_candidate = Some(cand);
    }
    unreachable!()
}

/// `[x^i][t^j]` integer coefficients of a rational bivariate polynomial,
/// scaled to be primitive.
pub fn primitive_bivariate(b: &BiPoly) -> Vec<Vec<BigInt>> {
    let mut den = BigInt::one();
    for r in b.rows() {
        for c in r.coeffs() {
            if let Elem::Q(q) = c {
                den = den.lcm(q.denom());
            }
        }
    }
    let m: Vec<Vec<BigInt>> = b
        .rows()
        .iter()
        .map(|r| {
            r.coeffs()
                .iter()
                .map(|c| match c {
                    Elem::Q(q) => q.numer() * (&den / q.denom()),
                    _ => panic!("expected rational coefficients"),
                })
                .collect()
        })
        .collect();
    let g = content(&m.iter().flatten().cloned().collect::<Vec<_>>());
    if g.is_zero() || g.is_one() {
        return m;
    }
    m.into_iter().map(|r| r.into_iter().map(|c| c / &g).collect()).collect()
}

fn trim_int(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn itrim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    trim_int(&mut v);
    v
}

pub(crate) fn iadd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    itrim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect())
}

pub(crate) fn isub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    itrim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect())
}

pub(crate) fn iscale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    itrim(a.iter().map(|x| x * c).collect())
}

pub(crate) fn imul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    itrim(mul_int(a, b))
}

/// Exact quotient of integer polynomials, or `None`.
fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = a.to_vec();
    trim_int(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    let db = b.len() - 1;
    if r.len() < b.len() {
        return None;
    }
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate().take(db) {
            if !bi.is_zero() {
                r[k + i] -= &c * bi;
            }
        }
        r[k + db] = BigInt::zero();
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Whether `b | a` in `Q[x, t]`; see [`integer_bivariate_divides`].
pub fn bivariate_divides_rational(a: &BiPoly, b: &BiPoly) -> bool {
    assert!(!b.is_zero());
    integer_bivariate_divides(primitive_bivariate(a), primitive_bivariate(b))
}

/// Integer coefficients `[x^i][t^j]` of `n(x)d(t) - n(t)d(x)` up to a
/// positive rational factor.
pub fn nabla_integer(num: &UniPoly, den: &UniPoly) -> Vec<Vec<BigInt>> {
    let (n, _) = super::dense::integers(num.coeffs());
    let (d, _) = super::dense::integers(den.coeffs());
    let size = n.len().max(d.len());
    let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    (0..size).map(|i| (0..size).map(|j| get(&n, i) * get(&d, j) - get(&n, j) * get(&d, i)).collect()).collect()
}

/// Whether `b | a` for integer bivariate polynomials, decided over the
/// rationals. Fraction-free: once `b` is made primitive the quotient, if
/// any, is integral (Gauss's lemma). A modular image rejects most
/// non-divisors cheaply; the top coefficient of `b` is a unit there, so a
/// rejection is exact.
pub fn integer_bivariate_divides(mut az: Vec<Vec<BigInt>>, mut bz: Vec<Vec<BigInt>>) -> bool {
    for row in az.iter_mut().chain(bz.iter_mut()) {
        trim_int(row);
    }
    while az.last().is_some_and(|r| r.is_empty()) {
        az.pop();
    }
    while bz.last().is_some_and(|r| r.is_empty()) {
        bz.pop();
    }
    assert!(!bz.is_empty(), "bivariate division by zero");
    if az.is_empty() {
        return true;
    }
    let g = content(&bz.iter().flatten().cloned().collect::<Vec<_>>());
    if !g.is_one() {
        bz = bz.into_iter().map(|r| r.into_iter().map(|c| c / &g).collect()).collect();
    }
    let (da, db) = (az.len() - 1, bz.len() - 1);
    let deg_t = |m: &[Vec<BigInt>]| m.iter().map(|r| r.len()).max().unwrap_or(0);
    if da < db || deg_t(&az) < deg_t(&bz) {
        return false;
    }
    let top = bz[db].last().expect("nonzero leading row").clone();
    if let Some(p) = large_primes().find(|&p| bigint_mod(&top, p) != 0) {
        let fp = Field::Prime(p);
        let image = |m: &[Vec<BigInt>]| {
            BiPoly::new(
                fp.clone(),
                m.iter().map(|r| UniPoly::new(fp.clone(), r.iter().map(|c| Elem::P(bigint_mod(c, p))).collect())).collect(),
            )
        };
        if image(&az).div_exact(&image(&bz)).is_none() {
            return false;
        }
    }
    let mut r = az;
    let lb = &bz[db];
    for k in (0..=da - db).rev() {
        if r[k + db].is_empty() {
            continue;
        }
        let Some(c) = div_exact_int(&r[k + db], lb) else { return false };
        for (i, bi) in bz.iter().enumerate().take(db) {
            if bi.is_empty() {
                continue;
            }
            let prod = mul_int(&c, bi);
            let row = &mut r[k + i];
            if row.len() < prod.len() {
                row.resize(prod.len(), BigInt::zero());
            }
            for (x, y) in row.iter_mut().zip(&prod) {
                *x -= y;
            }
            trim_int(row);
        }
        r[k + db].clear();
    }
    r.iter().all(|row| row.is_empty())
}


#[cfg(test)]
mod bivariate_tests {
    use super::*;

    #[test]
    fn fraction_free_divisibility() {
        let q = Field::Rational;
        let a = BiPoly::nabla(&UniPoly::from_i64s(&q, &[0, 0, 0, 0, 1]), &UniPoly::one(&q));
        let b = BiPoly::nabla(&UniPoly::from_i64s(&q, &[0, 0, 1]), &UniPoly::one(&q));
        let c = BiPoly::nabla(&UniPoly::from_i64s(&q, &[0, 0, 0, 1]), &UniPoly::one(&q));
        let half = b.scale(&q.from_i64(3).clone());
        assert!(bivariate_divides_rational(&a, &b));
        assert!(bivariate_divides_rational(&a, &half));
        assert!(!bivariate_divides_rational(&a, &c));
        assert_eq!(bivariate_divides_rational(&a, &c), a.div_exact(&c).is_some());
    }
}
