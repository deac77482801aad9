//! Factoring `∇` over the rationals by lifting modulo word-size primes.
//! The grouping of local factors is found modulo the first usable prime;
//! integer coefficients come from CRT over further primes, and the result is
//! accepted only after exact re-multiplication over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{from_series, lift_tree, monic_series, recombine_groups, series_mul, Series};
use crate::arith::{bigint_mod, inv_mod, mulmod, Elem, Field};
use crate::poly::int::{content, large_primes, reduce_rational};
use crate::poly::{BiPoly, UniPoly};

const MAX_PRIMES: usize = 400;

/// Coefficients `[x^i][t^j]`.
type IMat = Vec<Vec<BigInt>>;

fn primitive_matrix(w: &BiPoly) -> IMat {
    let q = |c: &Elem| match c {
        Elem::Q(q) => q.clone(),
        _ => panic!("expected rational coefficients"),
    };
    let mut den = BigInt::one();
    for r in w.rows() {
        for c in r.coeffs() {
            den = den.lcm(q(c).denom());
        }
    }
    let m: IMat = w
        .rows()
        .iter()
        .map(|r| r.coeffs().iter().map(|c| { let c = q(c); c.numer() * (&den / c.denom()) }).collect())
        .collect();
    let g = content(&m.iter().flatten().cloned().collect::<Vec<_>>());
    m.into_iter().map(|r| r.into_iter().map(|c| c / &g).collect()).collect()
}

fn reduce_matrix(m: &IMat, p: u64) -> BiPoly {
    let f = Field::Prime(p);
    let rows = m.iter().map(|r| UniPoly::new(f.clone(), r.iter().map(|c| Elem::P(bigint_mod(c, p))).collect())).collect();
    BiPoly::new(f, rows)
}

fn reduce_elem(a: &Elem, p: u64) -> Option<Elem> {
    match a {
        Elem::Q(q) => {
            let d = bigint_mod(q.denom(), p);
            (d != 0).then(|| Elem::P(mulmod(bigint_mod(q.numer(), p), inv_mod(d, p), p)))
        }
        _ => None,
    }
}

fn as_u64(e: &Elem) -> u64 {
    match e {
        Elem::P(v) => *v,
        _ => unreachable!(),
    }
}

fn symmetric(v: &BigInt, m: &BigInt) -> BigInt {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Lifted local factors of `w` modulo `p`, or `None` if `p` is unusable.
fn lift_mod_p(wz: &IMat, t0: &Elem, local: &[UniPoly], precision: usize, p: u64) -> Option<(BiPoly, Elem, Vec<Series>)> {
    let wp = reduce_matrix(wz, p);
    let fp = Field::Prime(p);
    if wp.deg_x() != Some(wz.len() - 1) || wp.lc_x().degree() != wz.last().map(|r| r.len() - 1) {
        return None;
    }
    let t0p = reduce_elem(t0, p)?;
    let spec = wp.eval_t(&fp, &t0p);
    if spec.degree() != wp.deg_x() || !spec.is_squarefree() {
        return None;
    }
    let local_p: Vec<UniPoly> = local.iter().map(|g| reduce_rational(g, p)).collect::<Option<_>>()?;
    if local_p.iter().zip(local).any(|(a, b)| a.degree() != b.degree()) {
        return None;
    }
    let series = monic_series(&wp.shift_t(&t0p), precision);
    let lifted = lift_tree(&series, &local_p, precision);
    Some((wp, t0p, lifted))
}

/// Factor of `wp` from a group of lifted factors, scaled so the top
/// coefficient of its `x`-leading coefficient is `scale`.
fn group_image(wp: &BiPoly, t0p: &Elem, lifted: &[Series], group: &[usize], precision: usize, scale: u64) -> BiPoly {
    let f = wp.field();
    let lc = wp.lc_x().taylor_shift(t0p);
    let mut cand: Series = (0..precision).map(|i| UniPoly::constant(f, lc.coeff(i))).collect();
    for &i in group {
        cand = series_mul(&cand, &lifted[i], precision);
    }
    from_series(f, &cand).shift_t(&f.neg(t0p)).primitive_part_x().scale(&Elem::P(scale))
}

/// Factors of the rational `w` (not including content), or `None` when the
/// modular images cannot be certified and the caller should lift exactly.
pub(super) fn factor_modular(w: &BiPoly, t0: &Elem, local: &[UniPoly], precision: usize) -> Option<Vec<BiPoly>> {
    let wz = primitive_matrix(w);
    let top = wz.last()?.last()?.clone();
    let mut groups: Option<Vec<Vec<usize>>> = None;
    let mut shapes: Vec<(usize, usize)> = Vec::new();
    let mut acc: Vec<IMat> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<IMat>> = None;
    for p in large_primes().take(MAX_PRIMES) {
        let scale = bigint_mod(&top, p);
        if scale == 0 {
            continue;
        }
        let Some((wp, t0p, lifted)) = lift_mod_p(&wz, t0, local, precision, p) else { continue };
        let images: Vec<BiPoly> = match &groups {
            None => {
                let found = recombine_groups(&wp, &Field::Prime(p), &t0p, lifted.clone(), precision);
                let gs: Vec<Vec<usize>> = found.into_iter().map(|(g, _)| g).collect();
                let images: Vec<BiPoly> = gs.iter().map(|g| group_image(&wp, &t0p, &lifted, g, precision, scale)).collect();
                shapes = images.iter().map(|b| (b.deg_x().unwrap_or(0), b.deg_t().unwrap_or(0))).collect();
                groups = Some(gs);
                images
            }
            Some(gs) => gs.iter().map(|g| group_image(&wp, &t0p, &lifted, g, precision, scale)).collect(),
        };
        if images.iter().zip(&shapes).any(|(b, s)| (b.deg_x().unwrap_or(0), b.deg_t().unwrap_or(0)) != *s) {
            continue;
        }
        // CRT: acc = acc mod modulus, image mod p
        if acc.is_empty() {
            acc = images
                .iter()
                .zip(&shapes)
                .map(|(b, &(dx, dt))| (0..=dx).map(|i| (0..=dt).map(|j| BigInt::from(as_u64(&b.coeff(i, j)))).collect()).collect())
                .collect();
            modulus = BigInt::from(p);
            continue;
        }
        let m_inv = inv_mod(bigint_mod(&modulus, p), p);
        for (mat, b) in acc.iter_mut().zip(&images) {
            for (i, row) in mat.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    let xr = bigint_mod(x, p);
                    let diff = (as_u64(&b.coeff(i, j)) + p - xr) % p;
                    *x += &modulus * BigInt::from(mulmod(diff, m_inv, p));
                }
            }
        }
        modulus *= BigInt::from(p);
        let cand: Vec<IMat> =
            acc.iter().map(|m| m.iter().map(|r| r.iter().map(|c| symmetric(c, &modulus)).collect()).collect()).collect();
        if previous.as_ref() == Some(&cand) {
            if let Some(found) = certify(w, &cand) {
                return Some(found);
            }
        }
        previous = Some(cand);
    }
    None
}

/// Primitive rational factors from integer candidates, if their product is
/// `w` up to a constant.
fn certify(w: &BiPoly, cand: &[IMat]) -> Option<Vec<BiPoly>> {
    let f = Field::Rational;
    let factors: Vec<BiPoly> = cand
        .iter()
        .map(|m| {
            let rows = m.iter().map(|r| UniPoly::new(f.clone(), r.iter().map(|c| f.from_bigint(c)).collect())).collect();
            BiPoly::new(f.clone(), rows).primitive_part_x()
        })
        .collect();
    if factors.iter().any(|g| g.deg_x().unwrap_or(0) == 0) {
        return None;
    }
    let prod = factors.iter().fold(BiPoly::one(&f), |acc, g| acc.mul(g));
    let lc = w.lc_x().lc();
    (prod.scale(&lc) == *w).then_some(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfun;
    use num_traits::Signed;

    #[test]
    fn symmetric_range() {
        let m = BigInt::from(7);
        assert_eq!(symmetric(&BigInt::from(5), &m), BigInt::from(-2));
        assert_eq!(symmetric(&BigInt::from(3), &m), BigInt::from(3));
        assert!(!symmetric(&BigInt::from(-1), &m).is_positive());
    }

    #[test]
    fn matches_exact_lifting() {
        let q = Field::Rational;
        for s in ["(t^6 + 2*t^4 + t^2 + 1)", "(t^4 - 2*t + 1/3)^2 - 5*(t^4 - 2*t + 1/3)", "(t^3 + t)/(t^2 - 3)"] {
            let f = parse_ratfun(s, &q).unwrap();
            let f = crate::ratfun::prepare(&f).unwrap().working;
            let exact = super::super::factor_nabla_exact(&f, 0).unwrap();
            let fast = super::super::factor_nabla(&f, 0).unwrap();
            assert_eq!(exact.factors, fast.factors, "{s}");
        }
    }
}
