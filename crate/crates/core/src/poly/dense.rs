//! Coefficient-slice kernels shared by the polynomial types. Slices are
//! little-endian (index i is the coefficient of x^i); results are trimmed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{trim_vec, Elem, Field};

const KARATSUBA_CUTOFF: usize = 32;

pub fn trim(f: &Field, v: Vec<Elem>) -> Vec<Elem> {
    trim_vec(f, v)
}

pub fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = f.add(o, s);
    }
    trim(f, out)
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => f.neg(y),
            (None, None) => unreachable!(),
        });
    }
    trim(f, out)
}

pub fn neg(f: &Field, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn scale(f: &Field, a: &[Elem], c: &Elem) -> Vec<Elem> {
    if f.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| f.mul(x, c)).collect()
}

fn mul_school(f: &Field, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.mul_add(&out[i + j], x, y);
        }
    }
}

fn add_into(f: &Field, out: &mut [Elem], src: &[Elem]) {
    for (o, s) in out.iter_mut().zip(src) {
        *o = f.add(o, s);
    }
}

fn sub_into(f: &Field, out: &mut [Elem], src: &[Elem]) {
    for (o, s) in out.iter_mut().zip(src) {
        *o = f.sub(o, s);
    }
}

fn pad_add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// Accumulates `a*b` into `out` (length at least `a.len()+b.len()-1`).
fn mul_rec(f: &Field, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        mul_school(f, a, b, out);
        return;
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        mul_school(f, a, b, out);
        return;
    }
    let mut z0 = vec![f.zero(); a0.len() + b0.len() - 1];
    mul_rec(f, a0, b0, &mut z0);
    let mut z2 = vec![f.zero(); a1.len() + b1.len() - 1];
    mul_rec(f, a1, b1, &mut z2);
    let sa = pad_add(f, a0, a1);
    let sb = pad_add(f, b0, b1);
    let mut z1 = vec![f.zero(); sa.len() + sb.len() - 1];
    mul_rec(f, &sa, &sb, &mut z1);
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    add_into(f, &mut out[..z0.len()], &z0);
    add_into(f, &mut out[h..h + z1.len()], &z1);
    add_into(f, &mut out[2 * h..2 * h + z2.len()], &z2);
}

pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if matches!(f, Field::Rational) && a.len() > 1 && b.len() > 1 {
        return mul_rational(a, b);
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    mul_rec(f, a, b, &mut out);
    trim(f, out)
}

/// Integer numerators over a common denominator.
pub(crate) fn integers(v: &[Elem]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, e| acc.lcm(rational(e).denom()));
    let nums = v
        .iter()
        .map(|e| {
            let x = rational(e);
            if x.denom() == &den {
                x.numer().clone()
            } else {
                x.numer() * (&den / x.denom())
            }
        })
        .collect();
    (nums, den)
}

fn rational(e: &Elem) -> &BigRational {
    match e {
        Elem::Q(q) => q,
        _ => panic!("expected rational coefficients"),
    }
}

/// Clears denominators and convolves integers, so only one reduction per
/// output coefficient is needed.
fn mul_rational(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (ai, da) = integers(a);
    let (bi, db) = integers(b);
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in ai.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in bi.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    let den = da * db;
    let v = out.into_iter().map(|c| Elem::Q(BigRational::new(c, den.clone()))).collect();
    trim(&Field::Rational, v)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let lc_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let mut q = vec![f.zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if f.is_zero(top) {
            continue;
        }
        let c = f.mul(top, &lc_inv);
        for (i, bi) in b.iter().enumerate().take(db) {
            r[k + i] = f.sub(&r[k + i], &f.mul(&c, bi));
        }
        r[k + db] = f.zero();
        q[k] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    divrem(f, a, b).1
}

pub fn monic(f: &Field, a: &[Elem]) -> Vec<Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) if f.is_one(lc) => a.to_vec(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut r0 = monic(f, a);
    let mut r1 = monic(f, b);
    while !r1.is_empty() {
        let r = rem(f, &r0, &r1);
        r0 = r1;
        r1 = monic(f, &r);
    }
    r0
}

/// `(g, s, t)` with `g = s*a + t*b` and `g` monic (or zero).
pub fn xgcd(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>, Vec<Elem>) {
    let one = vec![f.one()];
    let (mut r0, mut s0, mut t0) = (a.to_vec(), one.clone(), Vec::new());
    let (mut r1, mut s1, mut t1) = (b.to_vec(), Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero");
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

pub fn eval(f: &Field, a: &[Elem], x: &Elem) -> Elem {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.mul_add(c, &acc, x);
    }
    acc
}

pub fn derivative(f: &Field, a: &[Elem]) -> Vec<Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
        .collect();
    trim(f, out)
}

/// `a*b mod m`
pub fn mulmod(f: &Field, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
    rem(f, &mul(f, a, b), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: &[u64]) -> Vec<Elem> {
        v.iter().map(|&c| Elem::P(c)).collect()
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let f = Field::Prime(1_000_003);
        let a: Vec<Elem> = (0..77u64).map(|i| Elem::P((i * i * 31 + 7) % 1_000_003)).collect();
        let b: Vec<Elem> = (0..95u64).map(|i| Elem::P((i * 17 + 3) % 1_000_003)).collect();
        let mut school = vec![f.zero(); a.len() + b.len() - 1];
        mul_school(&f, &a, &b, &mut school);
        assert_eq!(mul(&f, &a, &b), trim(&f, school));
    }

    #[test]
    fn xgcd_identity() {
        let f = Field::Prime(7);
        let a = fp(&[1, 0, 0, 1]);
        let b = fp(&[3, 1]);
        let (g, s, t) = xgcd(&f, &a, &b);
        let lhs = add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b));
        assert_eq!(lhs, g);
        assert_eq!(g, gcd(&f, &a, &b));
    }
}
