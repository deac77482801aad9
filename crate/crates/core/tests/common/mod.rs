#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratdec_core::{Field, RatFun, UniPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_poly(rng: &mut ChaCha8Rng, field: &Field, deg: usize) -> UniPoly {
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
    UniPoly::from_i64s(field, &coeffs)
}

/// A random rational function of degree exactly `deg` with coefficients in
/// `[-3, 3]`; a third of the time a polynomial.
pub fn random_ratfun(rng: &mut ChaCha8Rng, field: &Field, deg: usize) -> RatFun {
    loop {
        let poly = rng.gen_ratio(1, 3);
        let num = random_poly(rng, field, deg);
        let dd = rng.gen_range(0..=deg);
        let den = if poly { UniPoly::one(field) } else { random_poly(rng, field, dd) };
        if den.is_zero() {
            continue;
        }
        let Ok(g) = RatFun::new(&num, &den) else { continue };
        if g.degree() == deg {
            return g;
        }
    }
}

/// `g ∘ h` or `g ∘ h ∘ k` with component degrees drawn from `2..=4`.
pub fn random_composite(rng: &mut ChaCha8Rng, field: &Field, parts: usize) -> (RatFun, Vec<RatFun>) {
    let comps: Vec<RatFun> = (0..parts).map(|_| {
        let d = rng.gen_range(2..=4);
        random_ratfun(rng, field, d)
    }).collect();
    let f = comps.iter().skip(1).fold(comps[0].clone(), |acc, c| acc.compose(c));
    (f, comps)
}
