//! Brute-force reference: subfields by exhaustive search over subsets of
//! factors, certified by exact divisibility of minimal polynomials. Shares
//! nothing with the partition machinery beyond polynomial arithmetic.

use thiserror::Error;

use crate::decomp::{finish, left_component};
use crate::factor::FactorSet;
use crate::poly::int::{integer_bivariate_divides, nabla_integer};
use crate::poly::{BiPoly, RatFun};
use crate::Field;
use crate::ratfun::{generator_form, PreparedInput};

pub const DEFAULT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} factors exceed the oracle cap of {1}; use the main pipeline only")]
    TooManyFactors(usize, usize),
    #[error("oracle inconsistency: {0}")]
    Inconsistent(String),
}

/// Whether `g ∈ K(h)`: `Φ_h | Φ_g` in `K(t)[x]`. Both are `∇` divided by a
/// polynomial in `t`, and `∇_h` is primitive in `x`, so by Gauss's lemma the
/// test is exact division of `∇_g` by `∇_h` in `K[x, t]`.
pub fn is_member(g: &RatFun, h: &RatFun) -> bool {
    if g.is_constant() {
        return true;
    }
    if h.is_constant() || g.degree() % h.degree() != 0 {
        return false;
    }
    if *g.field() == Field::Rational {
        return integer_bivariate_divides(nabla_integer(g.num(), g.den()), nabla_integer(h.num(), h.den()));
    }
    let ng = BiPoly::nabla(g.num(), g.den());
    let nh = BiPoly::nabla(h.num(), h.den());
    ng.divides_into(&nh)
}

/// Coefficients of `∏ G_j / lc_x(∏ G_j)`, the product of the monic factors.
fn monic_coeffs(p: &BiPoly) -> Vec<RatFun> {
    let lc = p.lc_x();
    p.rows().iter().map(|row| RatFun::new(row, &lc).expect("nonzero leading coefficient")).collect()
}

fn all_members(p: &BiPoly, gens: &[RatFun]) -> bool {
    let lc = p.lc_x();
    p.rows().iter().all(|row| {
        let c = RatFun::new(row, &lc).expect("nonzero leading coefficient");
        gens.iter().all(|h| is_member(&c, h))
    })
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Accepted index sets containing `0`, one per subfield.
    pub subsets: Vec<Vec<usize>>,
    /// Generator (in generator form) of each subfield.
    pub generators: Vec<RatFun>,
    /// Blocks of each subfield's partition, each sorted, ordered by minimum.
    pub partitions: Vec<Vec<Vec<usize>>>,
}

fn product(factors: &FactorSet, set: &[usize]) -> BiPoly {
    set.iter().fold(BiPoly::one(factors.field()), |acc, &j| acc.mul(&factors.factors[j]))
}

/// Every subfield: for each `S ∋ 0` the product `M` of the monic factors in
/// `S` is accepted iff `Φ_h = M` for `h` its first non-constant coefficient.
pub fn oracle_subfields(factors: &FactorSet, cap: usize) -> Result<OracleReport, OracleError> {
    let r = factors.r();
    if r > cap {
        return Err(OracleError::TooManyFactors(r, cap));
    }
    let mut report = OracleReport { subsets: Vec::new(), generators: Vec::new(), partitions: Vec::new() };
    for mask in 0..(1u64 << (r - 1)) {
        let set: Vec<usize> = std::iter::once(0).chain((1..r).filter(|j| mask >> (j - 1) & 1 == 1)).collect();
        let m = product(factors, &set);
        let Some(c) = monic_coeffs(&m).into_iter().find(|c| !c.is_constant()) else {
            continue;
        };
        let h = generator_form(&c).expect("non-constant").0;
        if h.degree() != m.deg_x().unwrap_or(0) {
            continue;
        }
        // Φ_h = M as monic polynomials in x
        let nh = BiPoly::nabla(h.num(), h.den());
        if nh.mul_t(&m.lc_x()) != m.mul_t(&nh.lc_x()) {
            continue;
        }
        let blocks = membership_partition(factors, std::slice::from_ref(&h));
        if blocks[0] != set {
            return Err(OracleError::Inconsistent(format!("first block {:?} differs from {set:?}", blocks[0])));
        }
        report.subsets.push(set);
        report.generators.push(h);
        report.partitions.push(blocks);
    }
    Ok(report)
}

/// Partition of `K(gens[0]) ∩ K(gens[1]) ∩ ...`: blocks are the minimal
/// index sets whose product has every coefficient in all the fields.
pub fn membership_partition(factors: &FactorSet, gens: &[RatFun]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..factors.r()).collect();
    let mut blocks = Vec::new();
    while let Some(&first) = remaining.first() {
        let rest = &remaining[1..];
        let mut block = None;
        'search: for size in 0..=rest.len() {
            for combo in combinations(rest.len(), size) {
                let set: Vec<usize> = std::iter::once(first).chain(combo.iter().map(|&k| rest[k])).collect();
                if all_members(&product(factors, &set), gens) {
                    block = Some(set);
                    break 'search;
                }
            }
        }
        let block = block.expect("the full product has coefficients in K(f)");
        remaining.retain(|j| !block.contains(j));
        blocks.push(block);
    }
    blocks
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Complete decompositions from maximal chains of the oracle's subfields,
/// ordered by generator membership. Components are left components of
/// consecutive generators; the unit relating the working form to the input
/// goes into the leftmost component, and the Frobenius tail is appended.
pub fn oracle_decompositions(input: &PreparedInput, report: &OracleReport) -> Result<Vec<Vec<RatFun>>, OracleError> {
    let gens = &report.generators;
    let m = gens.len();
    // contains[a][b]: K(gens[b]) ⊆ K(gens[a]) strictly
    let contains: Vec<Vec<bool>> =
        (0..m).map(|a| (0..m).map(|b| a != b && gens[a] != gens[b] && is_member(&gens[b], &gens[a])).collect()).collect();
    let covers = |a: usize, b: usize| contains[a][b] && !(0..m).any(|c| contains[a][c] && contains[c][b]);
    let bottom = report.subsets.iter().position(|s| s.len() == 1).ok_or_else(|| missing("K(t)"))?;
    let top = report.subsets.iter().position(|s| s.len() == input_r(report)).ok_or_else(|| missing("K(f)"))?;
    let mut chains = Vec::new();
    let mut stack = vec![vec![bottom]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if last == top {
            chains.push(path);
            continue;
        }
        for next in (0..m).rev().filter(|&b| covers(last, b)) {
            let mut p = path.clone();
            p.push(next);
            stack.push(p);
        }
    }
    let mut out = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut comps = Vec::with_capacity(chain.len());
        for w in chain.windows(2).rev() {
            let g = left_component(&gens[w[1]], &gens[w[0]]).map_err(|e| OracleError::Inconsistent(e.to_string()))?;
            comps.push(g);
        }
        out.push(finish(input, comps));
    }
    Ok(out)
}

fn input_r(report: &OracleReport) -> usize {
    report.partitions.first().map_or(0, |p| p.iter().map(Vec::len).sum())
}

fn missing(what: &str) -> OracleError {
    OracleError::Inconsistent(format!("{what} not among the accepted subfields"))
}
