//! Decompositions from subfield partitions: generators, left components,
//! complete decompositions along maximal chains and minimal polynomial
//! decompositions.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::Field;
use crate::factor::FactorSet;
use crate::lattice::{Partition, SubfieldLattice};
use crate::linalg::Matrix;
use crate::poly::{BiPoly, RatFun, UniPoly};
use crate::ratfun::{generator_form, PreparedInput, RatFunError, Unit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("{h} is not a right component of {f}")]
    NotRightComponent { f: String, h: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("minimal decomposition component {0} is not a polynomial")]
    NotPolynomial(String),
    #[error("expected a separable polynomial input")]
    Precondition,
    #[error(transparent)]
    RatFun(#[from] RatFunError),
}

/// `f = components[0] ∘ components[1] ∘ ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<RatFun>,
    /// Lattice indices from `K(t)` down to `K(f)`.
    pub chain: Vec<usize>,
}

impl Decomposition {
    pub fn compose(&self) -> RatFun {
        let mut it = self.components.iter().rev();
        let first = it.next().expect("non-empty").clone();
        it.fold(first, |acc, g| g.compose(&acc))
    }
}

/// Generator of the subfield with partition `p`: the first non-constant
/// coefficient (lowest power of `x`) of the product of the factors in the
/// block containing `1`, in generator form.
pub fn luroth_generator(p: &Partition, factors: &FactorSet) -> Result<RatFun, DecompError> {
    let field = factors.field();
    let (g, m) = p.first_block().iter().fold((BiPoly::one(field), UniPoly::one(field)), |(g, m), &j| {
        (g.mul(&factors.factors[j]), m.mul(&factors.leading_coeffs[j]))
    });
    for row in g.rows() {
        let c = RatFun::new(row, &m).expect("nonzero denominator");
        if !c.is_constant() {
            return Ok(generator_form(&c)?.0);
        }
    }
    Err(DecompError::Verification(format!("block product of {p} has constant coefficients")))
}

/// The unique `g` with `f = g ∘ h`, from the linear system
/// `f_n * B(h) = f_d * A(h)` in the coefficients of `g = A/B`.
pub fn left_component(f: &RatFun, h: &RatFun) -> Result<RatFun, DecompError> {
    let not_right = || DecompError::NotRightComponent { f: f.to_string(), h: h.to_string() };
    let field = f.field();
    let (n, k) = (f.degree(), h.degree());
    if k == 0 || n % k != 0 {
        return Err(not_right());
    }
    let m = n / k;
    // H_i = h_n^i h_d^(m - i)
    let hn_pows = powers(h.num(), m);
    let hd_pows = powers(h.den(), m);
    let basis: Vec<UniPoly> = (0..=m).map(|i| hn_pows[i].mul(&hd_pows[m - i])).collect();
    let columns: Vec<UniPoly> = basis
        .iter()
        .map(|b| f.den().mul(b).neg())
        .chain(basis.iter().map(|b| f.num().mul(b)))
        .collect();
    let rows = columns.iter().filter_map(UniPoly::degree).max().map_or(0, |d| d + 1);
    let matrix = Matrix::from_rows(
        field,
        columns.len(),
        (0..rows).map(|s| columns.iter().map(|c| c.coeff(s)).collect()).collect(),
    );
    let kernel = matrix.nullspace();
    if kernel.len() != 1 {
        return Err(not_right());
    }
    let v = &kernel[0];
    let a = UniPoly::new(field.clone(), v[..=m].to_vec());
    let b = UniPoly::new(field.clone(), v[m + 1..].to_vec());
    let g = RatFun::new(&a, &b).map_err(|_| not_right())?;
    if g.degree() != m || g.compose(h) != *f {
        return Err(not_right());
    }
    Ok(g)
}

fn powers(p: &UniPoly, m: usize) -> Vec<UniPoly> {
    let mut out = vec![UniPoly::one(p.field())];
    for i in 0..m {
        out.push(out[i].mul(p));
    }
    out
}

/// `t^p`
fn frobenius(field: &Field) -> RatFun {
    let p = field.characteristic() as usize;
    RatFun::from_poly(&UniPoly::monomial(field, field.one(), p))
}

/// Moves the unit relating the working form back to the input into the
/// leftmost component, then appends the Frobenius tail.
pub(crate) fn finish(input: &PreparedInput, mut components: Vec<RatFun>) -> Vec<RatFun> {
    let undo: Unit = input.left_unit.inverse();
    let field = input.original.field();
    for _ in 0..input.frobenius_exponent {
        components.push(frobenius(field));
    }
    match components.first_mut() {
        Some(first) => *first = undo.apply(first),
        // the input itself is a unit
        None => components.push(undo.as_ratfun()),
    }
    components
}

/// One decomposition per maximal chain, each verified by recomposition.
/// Returns the decompositions and whether the chain limit truncated them.
pub fn complete_decompositions(
    input: &PreparedInput,
    lattice: Option<&SubfieldLattice>,
    factors: Option<&FactorSet>,
    max_chains: Option<usize>,
) -> Result<(Vec<Decomposition>, bool), DecompError> {
    let (Some(lattice), Some(factors)) = (lattice, factors) else {
        // working form of degree one: only the Frobenius tail remains
        let components = finish(input, Vec::new());
        let dec = Decomposition { components, chain: Vec::new() };
        verify(input, &dec)?;
        return Ok((vec![dec], false));
    };
    let (chains, truncated) = lattice.maximal_chains(max_chains);
    let mut generators: HashMap<usize, RatFun> = HashMap::new();
    let mut out = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut us = Vec::with_capacity(chain.len());
        for &k in &chain {
            if !generators.contains_key(&k) {
                generators.insert(k, chain_generator(k, lattice, factors, input)?);
            }
            us.push(generators[&k].clone());
        }
        let mut components = Vec::with_capacity(chain.len() - 1);
        for w in us.windows(2).rev() {
            components.push(left_component(&w[1], &w[0])?);
        }
        let dec = Decomposition { components: finish(input, components), chain };
        verify(input, &dec)?;
        out.push(dec);
    }
    Ok((out, truncated))
}

fn chain_generator(
    k: usize,
    lattice: &SubfieldLattice,
    factors: &FactorSet,
    input: &PreparedInput,
) -> Result<RatFun, DecompError> {
    let p = &lattice.partitions[k];
    if p.is_single_block() {
        return Ok(input.working.clone());
    }
    if p.is_discrete() {
        return Ok(RatFun::t(factors.field()));
    }
    luroth_generator(p, factors)
}

fn verify(input: &PreparedInput, dec: &Decomposition) -> Result<(), DecompError> {
    if dec.compose() != input.original {
        let shown: Vec<String> = dec.components.iter().map(|c| c.to_string()).collect();
        return Err(DecompError::Verification(format!(
            "[{}] does not recompose to {}",
            shown.join(", "),
            input.original
        )));
    }
    Ok(())
}

/// Minimal decompositions `f = g ∘ h` of a polynomial: one for each
/// principal partition other than the discrete and single-block ones that
/// is refined by no other principal partition except the discrete one.
pub fn minimal_decompositions_poly(
    input: &PreparedInput,
    principals: &[Partition],
    factors: &FactorSet,
) -> Result<Vec<(RatFun, RatFun)>, DecompError> {
    if !input.original.is_polynomial() || input.frobenius_exponent > 0 {
        return Err(DecompError::Precondition);
    }
    let undo = input.left_unit.inverse();
    let mut seen: Vec<&Partition> = Vec::new();
    let mut out = Vec::new();
    for p in principals {
        if p.is_discrete() || p.is_single_block() || seen.contains(&p) {
            continue;
        }
        let refined = principals.iter().any(|q| !q.is_discrete() && q != p && q.refines(p));
        if refined {
            continue;
        }
        seen.push(p);
        let h = luroth_generator(p, factors)?;
        let g = undo.apply(&left_component(&input.working, &h)?);
        for c in [&g, &h] {
            if !c.is_polynomial() {
                return Err(DecompError::NotPolynomial(c.to_string()));
            }
        }
        if g.compose(&h) != input.original {
            return Err(DecompError::Verification(format!("{g} ∘ {h}")));
        }
        out.push((g, h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_nabla;
    use crate::lattice::close_under_join;
    use crate::poly::parse::parse_ratfun;
    use crate::ratfun::prepare;
    use crate::subfields::{find_good_ideal, partitions};

    fn q(s: &str) -> RatFun {
        parse_ratfun(s, &Field::Rational).unwrap()
    }

    fn run(f: &RatFun) -> (PreparedInput, FactorSet, Vec<Partition>) {
        let input = prepare(f).unwrap();
        let fs = factor_nabla(&input.working, 1).unwrap();
        let ideal = find_good_ideal(&input.working).unwrap();
        let ps = partitions(&fs, &ideal).unwrap().partitions;
        (input, fs, ps)
    }

    fn shown(d: &[Decomposition]) -> Vec<Vec<String>> {
        d.iter().map(|d| d.components.iter().map(|c| c.to_string()).collect()).collect()
    }

    #[test]
    fn left_component_examples() {
        assert_eq!(left_component(&q("t^4"), &q("t^2")).unwrap().to_string(), "t^2");
        assert_eq!(left_component(&q("t^6+2*t^4+t^2+1"), &q("t^3+t")).unwrap().to_string(), "t^2 + 1");
        let f = q("(t^24-2*t^12+1)/(t^16+2*t^12+t^8)");
        let c = q("(t^12-1)/(t^8+t^4)");
        assert_eq!(left_component(&f, &c).unwrap().to_string(), "t^2");
        assert_eq!(left_component(&c, &q("t^4")).unwrap().to_string(), "(t^3 - 1)/(t^2 + t)");
        assert!(matches!(left_component(&q("t^4"), &q("t^3")), Err(DecompError::NotRightComponent { .. })));
        assert!(left_component(&q("t^4+t"), &q("t^2")).is_err());
    }

    #[test]
    fn generators_t4() {
        let (_, fs, ps) = run(&q("t^4"));
        assert_eq!(luroth_generator(&ps[0], &fs).unwrap().to_string(), "t");
        assert_eq!(luroth_generator(&ps[1], &fs).unwrap().to_string(), "t^2");
        assert_eq!(luroth_generator(&ps[2], &fs).unwrap().to_string(), "t^4");
    }

    #[test]
    fn decompositions_t6() {
        let (input, fs, ps) = run(&q("t^6"));
        let lattice = close_under_join(&ps);
        let (d, truncated) = complete_decompositions(&input, Some(&lattice), Some(&fs), None).unwrap();
        assert!(!truncated);
        let mut got = shown(&d);
        got.sort();
        assert_eq!(got, [["t^2", "t^3"], ["t^3", "t^2"]]);
    }

    #[test]
    fn decomposition_prime_degree() {
        let (input, fs, ps) = run(&q("t^2"));
        let lattice = close_under_join(&ps);
        assert_eq!(lattice.len(), 2);
        let (d, _) = complete_decompositions(&input, Some(&lattice), Some(&fs), None).unwrap();
        assert_eq!(shown(&d), [["t^2"]]);
    }

    #[test]
    fn unit_slack_goes_left() {
        let f = q("(3*t^4+1)/(t^4-2)");
        let (input, fs, ps) = run(&f);
        let lattice = close_under_join(&ps);
        let (d, _) = complete_decompositions(&input, Some(&lattice), Some(&fs), None).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].components[1].to_string(), "t^2");
        assert_eq!(d[0].compose(), f);
    }

    #[test]
    fn minimal_polynomial_decompositions() {
        let (input, fs, ps) = run(&q("t^6+2*t^4+t^2+1"));
        let mut got: Vec<(String, String)> = minimal_decompositions_poly(&input, &ps, &fs)
            .unwrap()
            .iter()
            .map(|(g, h)| (g.to_string(), h.to_string()))
            .collect();
        got.sort();
        assert_eq!(
            got,
            [("t^2 + 1".to_string(), "t^3 + t".to_string()), ("t^3 + 2*t^2 + t + 1".to_string(), "t^2".to_string())]
        );
        let (input, fs, ps) = run(&q("t^4"));
        let got = minimal_decompositions_poly(&input, &ps, &fs).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!((got[0].0.to_string(), got[0].1.to_string()), ("t^2".into(), "t^2".into()));
    }

    #[test]
    fn frobenius_tail() {
        let f2 = Field::prime(2).unwrap();
        let f = parse_ratfun("t^4", &f2).unwrap();
        let input = prepare(&f).unwrap();
        assert_eq!(input.frobenius_exponent, 2);
        let (d, _) = complete_decompositions(&input, None, None, None).unwrap();
        assert_eq!(shown(&d), [["t^2", "t^2"]]);
    }
}
