//! Resultants with respect to `x` over `K[t]`, by the subresultant PRS.
//!
//! Convention: `res(A, B) = lc(A)^deg(B) * prod B(theta)` over the roots
//! `theta` of `A`.

use super::{BiPoly, UniPoly};

pub fn resultant_x(a: &BiPoly, b: &BiPoly) -> UniPoly {
    let f = a.field().clone();
    let (Some(da), Some(db)) = (a.deg_x(), b.deg_x()) else {
        return UniPoly::zero(&f);
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        negate = da % 2 == 1 && db % 2 == 1;
    }
    if b.deg_x() == Some(0) {
        let r = b.lc_x().pow(a.deg_x().unwrap() as u64);
        return if negate { r.neg() } else { r };
    }
    let mut g = UniPoly::one(&f);
    let mut h = UniPoly::one(&f);
    loop {
        let (da, db) = (a.deg_x().unwrap(), b.deg_x().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.prem(&b, delta + 1);
        a = b;
        let divisor = g.mul(&h.pow(delta as u64));
        b = r.div_t_exact(&divisor);
        g = a.lc_x();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u64).div_exact(&h.pow(delta as u64 - 1))
        };
        match b.deg_x() {
            None => return UniPoly::zero(&f),
            Some(0) => {
                let deg_a = a.deg_x().unwrap() as u64;
                let res = b.lc_x().pow(deg_a).div_exact(&h.pow(deg_a - 1));
                return if negate { res.neg() } else { res };
            }
            Some(_) => {}
        }
    }
}
