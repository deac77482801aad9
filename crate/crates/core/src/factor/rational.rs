//! Univariate factorization over the rationals: squarefree decomposition,
//! factorization modulo a small prime, quadratic Hensel lifting and subset
//! recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::finite::factor_finite;
use crate::arith::{bigint_mod, is_prime_u64, Elem, Field};
use crate::poly::int::{
    content, from_integers, gcd_u64, iadd as add, imul as mul, iscale as scale, isub as sub, itrim as trim,
    primitive_integer, reduce_mod,
};
use crate::poly::UniPoly;

type IPoly = Vec<BigInt>;

fn modp(v: &[BigInt], m: &BigInt) -> IPoly {
    trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

/// Division by a monic polynomial modulo `m`.
fn divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (IPoly, IPoly) {
    let db = b.len() - 1;
    let mut r = modp(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for i in 0..db {
            r[k + i] = (&r[k + i] - &c * &b[i]).mod_floor(m);
        }
        r[k + db] = BigInt::zero();
        q[k] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn to_ipoly(p: &UniPoly) -> IPoly {
    p.coeffs()
        .iter()
        .map(|c| match c {
            Elem::P(v) => BigInt::from(*v),
            _ => panic!("expected prime field coefficients"),
        })
        .collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// One quadratic step: from `f = g h mod m`, `s g + t h = 1 mod m` to the
/// same relations mod `m^2`. `h` monic.
fn hensel_step(f: &[BigInt], g: &[BigInt], h: &[BigInt], s: &[BigInt], t: &[BigInt], m: &BigInt) -> (IPoly, IPoly, IPoly, IPoly) {
    let m2 = m * m;
    let e = modp(&sub(f, &mul(g, h)), &m2);
    let (q, r) = divrem_monic(&mul(s, &e), h, &m2);
    let g2 = modp(&add(g, &add(&mul(t, &e), &mul(&q, g))), &m2);
    let h2 = modp(&add(h, &r), &m2);
    let b = modp(&sub(&add(&mul(s, &g2), &mul(t, &h2)), &[BigInt::one()]), &m2);
    let (c, d) = divrem_monic(&mul(s, &b), &h2, &m2);
    let s2 = modp(&sub(s, &d), &m2);
    let t2 = modp(&sub(t, &add(&mul(t, &b), &mul(&c, &g2))), &m2);
    (g2, h2, s2, t2)
}

/// Lifts the monic factorization `f = lc * prod factors (mod p)` to
/// `mod p^(2^k) >= bound`; returns monic lifts and the final modulus.
fn multifactor_lift(f: &IPoly, factors: &[UniPoly], p: u64, bound: &BigInt) -> (Vec<IPoly>, BigInt) {
    let mut modulus = BigInt::from(p);
    while &modulus <= bound {
        modulus = &modulus * &modulus;
    }
    (lift_tree(f, factors, p, &modulus), modulus)
}

fn lift_tree(f: &IPoly, factors: &[UniPoly], p: u64, target: &BigInt) -> Vec<IPoly> {
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        let inv = mod_inverse(&lc, target);
        return vec![modp(&scale(f, &inv), target)];
    }
    let field = factors[0].field().clone();
    let half = factors.len() / 2;
    let prod = |fs: &[UniPoly]| fs.iter().fold(UniPoly::one(&field), |acc, x| acc.mul(x));
    let a = prod(&factors[..half]);
    let b = prod(&factors[half..]);
    let (gcd, s, t) = a.scale(&field.from_bigint(&lc)).xgcd(&b);
    debug_assert!(gcd.is_one());
    let mut g = scale(&to_ipoly(&a), &lc);
    let mut h = to_ipoly(&b);
    let (mut s, mut t) = (to_ipoly(&s), to_ipoly(&t));
    let mut m = BigInt::from(p);
    g = modp(&g, &m);
    while &m < target {
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    // g carries the leading coefficient
    let inv = mod_inverse(&lc, target);
    let g_monic = modp(&scale(&g, &inv), target);
    let mut out = lift_tree(&g_monic, &factors[..half], p, target);
    out.extend(lift_tree(&h, &factors[half..], p, target));
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> IPoly {
    let half = m >> 1;
    trim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn primitive(v: IPoly) -> IPoly {
    let c = content(&v);
    let mut v: IPoly = if c.is_one() || c.is_zero() { v } else { v.into_iter().map(|x| x / &c).collect() };
    if v.last().is_some_and(|l| l.is_negative()) {
        v = v.into_iter().map(|x| -x).collect();
    }
    v
}

/// Exact quotient over the integers, if `d` divides `a`.
fn div_exact_int(a: &[BigInt], d: &[BigInt]) -> Option<IPoly> {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    let lc = &d[dd];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + dd].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for i in 0..=dd {
            r[k + i] -= &c * &d[i];
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| trim(q))
}

fn choose_prime(g: &IPoly) -> u64 {
    let lc = g.last().unwrap();
    let mut p = 3u64;
    loop {
        if is_prime_u64(p) && bigint_mod(lc, p) != 0 {
            let gp = reduce_mod(g, p);
            let dp: Vec<u64> = gp.iter().enumerate().skip(1).map(|(i, &c)| (c as u128 * i as u128 % p as u128) as u64).collect();
            let mut dp = dp;
            while dp.last() == Some(&0) {
                dp.pop();
            }
            if !dp.is_empty() && gcd_u64(&gp, &dp, p).len() == 1 {
                return p;
            }
        }
        p += 2;
    }
}

/// Irreducible factors of a squarefree primitive integer polynomial.
fn factor_squarefree_int(g: &IPoly) -> Vec<IPoly> {
    let n = g.len() - 1;
    if n <= 1 {
        return vec![g.clone()];
    }
    let p = choose_prime(g);
    let fp = Field::Prime(p);
    let gp = UniPoly::new(fp.clone(), g.iter().map(|c| fp.from_bigint(c)).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let modular: Vec<UniPoly> = factor_finite(&gp, &mut rng).into_iter().map(|(u, _)| u).collect();
    if modular.len() == 1 {
        return vec![g.clone()];
    }
    let lc = g.last().unwrap().abs();
    let norm2 = g.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + 1;
    let bound = BigInt::from(2) * &lc * (BigInt::one() << n) * norm2;
    let (lifted, m) = multifactor_lift(g, &modular, p, &bound);

    let mut remaining: Vec<IPoly> = lifted;
    let mut rest = g.clone();
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let mut hit = None;
        for subset in subsets(remaining.len(), k) {
            let lc = rest.last().unwrap().clone();
            // constant-term pretest
            let c0 = subset.iter().fold(lc.clone(), |acc, &i| (acc * remaining[i].first().cloned().unwrap_or_default()).mod_floor(&m));
            let c0 = symmetric(&[c0], &m).first().cloned().unwrap_or_default();
            let r0 = &rest[0] * &lc;
            if !c0.is_zero() && !r0.is_zero() && !(&r0 % &c0).is_zero() {
                continue;
            }
            let cand = subset.iter().fold(vec![lc.clone()], |acc, &i| modp(&mul(&acc, &remaining[i]), &m));
            let cand = primitive(symmetric(&cand, &m));
            if let Some(q) = div_exact_int(&rest, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => k += 1,
        }
    }
    found.push(primitive(rest));
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        cur = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                break Some(next);
            }
        };
        Some(out)
    })
}

/// Yun's squarefree decomposition over the rationals (monic parts).
fn squarefree_rational(g: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let g = g.monic();
    if g.is_constant() {
        return out;
    }
    let d = g.derivative();
    let a0 = g.gcd(&d);
    if a0.is_one() {
        return vec![(g, 1)];
    }
    let mut b = g.div_exact(&a0);
    let mut c = d.div_exact(&a0);
    let mut dd = c.sub(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&dd);
        b = b.div_exact(&a);
        c = dd.div_exact(&a);
        dd = c.sub(&b.derivative());
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Monic irreducible factors over the rationals with multiplicities, sorted
/// canonically.
pub fn factor_rational(g: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_rational(g) {
        let ip = primitive_integer(&part);
        for fac in factor_squarefree_int(&ip) {
            out.push((from_integers(&fac).monic(), mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(&Field::Rational, c)
    }

    #[test]
    fn cyclotomic_split() {
        let fac = factor_rational(&q(&[-1, 0, 0, 0, 1]));
        let polys: Vec<UniPoly> = fac.iter().map(|p| p.0.clone()).collect();
        assert_eq!(polys, vec![q(&[1, 1]), q(&[-1, 1]), q(&[1, 0, 1])]);
    }

    #[test]
    fn x4_plus_1_irreducible() {
        // splits modulo every prime, so recombination has to do the work
        let fac = factor_rational(&q(&[1, 0, 0, 0, 1]));
        assert_eq!(fac, vec![(q(&[1, 0, 0, 0, 1]), 1)]);
    }

    #[test]
    fn non_monic_with_multiplicity() {
        let a = q(&[1, 3]); // 3x + 1
        let b = q(&[-2, 0, 5]); // 5x^2 - 2
        let c = q(&[7, 1, 0, 2]); // 2x^3 + x + 7
        let g = a.pow(2).mul(&b).mul(&c).scale(&Field::Rational.from_i64(-6));
        let fac = factor_rational(&g);
        let prod = fac.iter().fold(UniPoly::one(&Field::Rational), |acc, (p, m)| acc.mul(&p.pow(*m as u64)));
        assert_eq!(prod, g.monic());
        assert_eq!(fac.len(), 3);
        assert!(fac.contains(&(a.monic(), 2)));
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // (x^2-2)(x^2-3)(x^2-5) times x^4 - 10x^2 + 1
        let g = q(&[-2, 0, 1]).mul(&q(&[-3, 0, 1])).mul(&q(&[-5, 0, 1])).mul(&q(&[1, 0, -10, 0, 1]));
        let fac = factor_rational(&g);
        assert_eq!(fac.len(), 4);
        assert!(fac.iter().any(|(p, _)| *p == q(&[1, 0, -10, 0, 1])));
    }

    #[test]
    fn subset_enumeration() {
        let all: Vec<Vec<usize>> = subsets(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(subsets(3, 0).count(), 1);
    }
}
