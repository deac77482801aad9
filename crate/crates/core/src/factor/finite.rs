//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree and equal-degree splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{Elem, Field};
use crate::poly::UniPoly;

/// Uniform random element of a finite field.
pub fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    match f {
        Field::Prime(p) => Elem::P(rng.gen_range(0..*p)),
        Field::Ext(_) => {
            let base = f.base().unwrap();
            let coords = (0..f.ext_degree()).map(|_| random_elem(base, rng)).collect();
            f.from_coordinates(coords)
        }
        Field::Rational => panic!("random element of an infinite field"),
    }
}

/// `g(x)^(1/p)` for `g` with zero derivative.
fn pth_root_poly(g: &UniPoly) -> UniPoly {
    let f = g.field();
    let p = f.characteristic() as usize;
    let coeffs = g.coeffs().iter().step_by(p).map(|c| f.pth_root(c)).collect();
    UniPoly::new(f.clone(), coeffs)
}

/// Squarefree decomposition of a monic polynomial: pairs `(s_i, i)` with
/// `g = prod s_i^i`, each `s_i` squarefree and nonconstant.
pub fn squarefree_decomposition(g: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if g.is_constant() {
        return out;
    }
    let d = g.derivative();
    if d.is_zero() {
        let p = g.field().characteristic() as usize;
        for (s, i) in squarefree_decomposition(&pth_root_poly(g)) {
            out.push((s, i * p));
        }
        return out;
    }
    let mut c = g.gcd(&d);
    let mut w = g.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let p = g.field().characteristic() as usize;
        for (s, j) in squarefree_decomposition(&pth_root_poly(&c)) {
            out.push((s, j * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
pub fn distinct_degree(g: &UniPoly) -> Vec<(UniPoly, usize)> {
    let f = g.field();
    let q = f.cardinality().expect("finite field");
    let x = UniPoly::var(f);
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg0() >= 2 * d {
        h = h.pow_mod(&q, &rest);
        let gg = rest.gcd(&h.sub(&x));
        if !gg.is_one() {
            rest = rest.div_exact(&gg);
            h = h.rem(&rest);
            out.push((gg, d));
        }
        d += 1;
    }
    if rest.deg0() > 0 {
        let k = rest.deg0();
        out.push((rest, k));
    }
    out
}

/// Splits a squarefree monic product of irreducibles of degree `d`.
pub fn equal_degree(g: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = g.deg0();
    if n == d {
        return vec![g.clone()];
    }
    let f = g.field();
    let q = f.cardinality().expect("finite field");
    loop {
        let a = UniPoly::new(f.clone(), (0..n).map(|_| random_elem(f, rng)).collect());
        if a.is_constant() {
            continue;
        }
        let b = if f.characteristic() == 2 {
            // trace map a + a^2 + ... + a^(2^(k-1)), q^d = 2^k
            let k = f.prime_degree() as usize * d;
            let two = BigUint::from(2u32);
            let mut term = a.rem(g);
            let mut acc = term.clone();
            for _ in 1..k {
                term = term.pow_mod(&two, g);
                acc = acc.add(&term);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) >> 1;
            a.pow_mod(&e, g).sub(&UniPoly::one(f))
        };
        let h = g.gcd(&b);
        if !h.is_constant() && h.deg0() < n {
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&g.div_exact(&h), d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted canonically.
pub fn factor_finite(g: &UniPoly, rng: &mut ChaCha8Rng) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    for (s, mult) in squarefree_decomposition(&g.monic()) {
        for (part, d) in distinct_degree(&s) {
            for irr in equal_degree(&part, d, rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn x4_minus_1_mod_5() {
        let f = Field::Prime(5);
        let g = UniPoly::from_i64s(&f, &[-1, 0, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = factor_finite(&g, &mut rng);
        let roots: Vec<UniPoly> = (1..5).map(|a| UniPoly::from_i64s(&f, &[-a, 1])).collect();
        let mut expected = roots.clone();
        expected.sort_by(|a, b| a.cmp_canonical(b));
        assert_eq!(fac.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn squarefree_in_characteristic_two() {
        let f = Field::Prime(2);
        // (x+1)^2 (x^2+x+1)^3 x^4
        let a = UniPoly::from_i64s(&f, &[1, 1]).pow(2);
        let b = UniPoly::from_i64s(&f, &[1, 1, 1]).pow(3);
        let c = UniPoly::var(&f).pow(4);
        let g = a.mul(&b).mul(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fac = factor_finite(&g, &mut rng);
        let mults: Vec<usize> = fac.iter().map(|p| p.1).collect();
        assert_eq!(fac.len(), 3);
        let prod = fac.iter().fold(UniPoly::one(&f), |acc, (p, m)| acc.mul(&p.pow(*m as u64)));
        assert_eq!(prod, g);
        assert!(mults.contains(&4) && mults.contains(&3) && mults.contains(&2));
    }

    #[test]
    fn splitting_over_f4_and_seed_independence() {
        let f4 = crate::arith::make_extension(&Field::Prime(2), 2).unwrap();
        // x^4 - x splits completely over F_4
        let g = UniPoly::new(f4.clone(), vec![f4.zero(), f4.one(), f4.zero(), f4.zero(), f4.one()]);
        let a = factor_finite(&g, &mut ChaCha8Rng::seed_from_u64(1));
        let b = factor_finite(&g, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(a.iter().all(|(p, m)| p.deg0() == 1 && *m == 1));
    }
}
