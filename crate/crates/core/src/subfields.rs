//! Partitions of the principal subfields `L_i`: good reductions,
//! logarithmic-derivative systems, the certificate check and the drivers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{make_extension, ArithError, Elem, Field};
use crate::factor::FactorSet;
use crate::lattice::Partition;
use crate::linalg::{zero_one_echelon, Matrix, RowSpace};
use crate::poly::int::{
    iadd, imul, iscale, isub, itrim, large_primes, primitive_bivariate, primitive_integer, reduce_rational,
};
use crate::poly::{BiPoly, RatFun, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubfieldsError {
    #[error("no good reduction of degree at most {0}")]
    NoGoodIdeal(usize),
    #[error("system for factor {0} has no {{0,1}}-echelon basis")]
    NotZeroOne(usize),
    #[error("need {needed} evaluation points, found {found} in {field}")]
    TooFewPoints { needed: usize, found: usize, field: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A place `t -> alpha` of `K(t)`, with `alpha` a root of the irreducible
/// `modulus` and residue field `K[x]/(modulus)`.
#[derive(Clone, Debug)]
pub struct GoodIdeal {
    modulus: UniPoly,
    residue: Field,
    alpha: Elem,
}

impl GoodIdeal {
    /// `modulus` must be monic and irreducible over its coefficient field.
    pub fn new(modulus: &UniPoly) -> Result<Self, ArithError> {
        let base = modulus.field();
        if modulus.degree() == Some(1) && modulus.is_monic() {
            let alpha = base.neg(&modulus.coeff(0));
            return Ok(GoodIdeal { modulus: modulus.clone(), residue: base.clone(), alpha });
        }
        let residue = Field::extension(base.clone(), modulus.coeffs().to_vec())?;
        let alpha = residue.generator().expect("extension");
        Ok(GoodIdeal { modulus: modulus.clone(), residue, alpha })
    }

    /// The same place over an extension of the base in which the modulus
    /// stays irreducible.
    pub fn over(&self, field: &Field) -> Result<Self, ArithError> {
        Self::new(&self.modulus.embed(field))
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn base(&self) -> &Field {
        self.modulus.field()
    }

    pub fn residue(&self) -> &Field {
        &self.residue
    }

    pub fn alpha(&self) -> &Elem {
        &self.alpha
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg0()
    }

    /// Image of a polynomial in `t`.
    pub fn reduce_poly(&self, p: &UniPoly) -> Elem {
        p.eval_in(&self.residue, &self.alpha)
    }

    /// Image in the residue field, or `None` outside the valuation ring.
    pub fn reduce(&self, g: &RatFun) -> Option<Elem> {
        let d = self.reduce_poly(g.den());
        if self.residue.is_zero(&d) {
            return None;
        }
        let n = self.reduce_poly(g.num());
        Some(self.residue.div(&n, &d).expect("nonzero"))
    }

    /// Image of `G(x, t)` made monic in `x`, or `None` if the leading
    /// coefficient vanishes.
    pub fn reduce_factor(&self, g: &BiPoly) -> Option<UniPoly> {
        let p = g.eval_t(&self.residue, &self.alpha);
        (p.degree() == g.deg_x()).then(|| p.monic())
    }

    /// Coordinates over the base in the basis `1, alpha, ..., alpha^{d_p - 1}`.
    pub fn coordinates(&self, a: &Elem) -> Vec<Elem> {
        if self.degree() == 1 {
            vec![a.clone()]
        } else {
            self.residue.coordinates(a)
        }
    }

    /// The three conditions: the denominator and numerator of `f` do not
    /// vanish at `alpha`, and `n(x)d(alpha) - n(alpha)d(x)` is squarefree.
    pub fn is_good_for(&self, f: &RatFun) -> bool {
        let r = &self.residue;
        if r.is_zero(&self.reduce_poly(f.den())) || r.is_zero(&self.reduce_poly(f.num())) {
            return false;
        }
        let spec = BiPoly::nabla(f.num(), f.den()).eval_t(r, &self.alpha);
        spec.degree() == Some(f.degree()) && spec.is_squarefree()
    }
}

const MAX_IDEAL_DEGREE: usize = 64;

/// Smallest good place: `x - a` for `a = 0, 1, 2, ...` over the rationals;
/// over a finite field, irreducibles by degree, then in enumeration order.
pub fn find_good_ideal(f: &RatFun) -> Result<GoodIdeal, SubfieldsError> {
    let field = f.field();
    let Some(q) = field.cardinality_u64() else {
        for a in 0.. {
            let p = UniPoly::new(field.clone(), vec![field.from_i64(-a), field.one()]);
            let ideal = GoodIdeal::new(&p)?;
            if ideal.is_good_for(f) {
                return Ok(ideal);
            }
        }
        unreachable!()
    };
    for d in 1..=MAX_IDEAL_DEGREE {
        let mut index: u128 = 0;
        let total = (q as u128).checked_pow(d as u32);
        while total.map_or(true, |t| index < t) {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut rest = index;
            for _ in 0..d {
                coeffs.push(field.element((rest % q as u128) as u64).expect("in range"));
                rest /= q as u128;
            }
            index += 1;
            if d == 1 {
                // enumerate roots rather than constant terms
                coeffs[0] = field.neg(&coeffs[0]);
            }
            coeffs.push(field.one());
            let p = UniPoly::new(field.clone(), coeffs);
            if d > 1 && !p.is_irreducible() {
                continue;
            }
            let ideal = GoodIdeal::new(&p)?;
            if ideal.is_good_for(f) {
                return Ok(ideal);
            }
        }
    }
    Err(SubfieldsError::NoGoodIdeal(MAX_IDEAL_DEGREE))
}

/// Logarithmic derivatives `h_j = G_j'(c)/G_j(c)` (derivative in `x`) at a
/// point `c`, over a common denominator `l`: `h_j = p_j / l`.
#[derive(Clone, Debug)]
pub struct LogDerivRow {
    pub field: Field,
    pub c: Elem,
    pub h: Vec<RatFun>,
    pub l: UniPoly,
    pub p: Vec<UniPoly>,
}

/// `c` lives in `field`, which is the coefficient field of the factors or an
/// extension of it.
pub fn log_derivative_row(field: &Field, c: &Elem, factors: &FactorSet) -> LogDerivRow {
    let h: Vec<RatFun> = factors
        .factors
        .iter()
        .map(|g| {
            let g = g.embed(field);
            let den = g.eval_x(c);
            let num = g.derivative_x().eval_x(c);
            RatFun::new(&num, &den).expect("no constant root of the minimal polynomial")
        })
        .collect();
    let l = h.iter().fold(UniPoly::one(field), |acc, h| acc.lcm(h.den()));
    let p = h.iter().map(|h| l.div_exact(h.den()).mul(h.num())).collect();
    LogDerivRow { field: field.clone(), c: c.clone(), h, l, p }
}

/// `q~_j(x) = p_j(x) - h~_j l(x)` over the residue field, or `None` when
/// some `h_j` is not in the valuation ring.
pub fn reduce_row(row: &LogDerivRow, ideal: &GoodIdeal) -> Option<Vec<UniPoly>> {
    let r = ideal.residue();
    let l = row.l.embed(r);
    row.h
        .iter()
        .zip(&row.p)
        .map(|(h, p)| ideal.reduce(h).map(|ht| p.embed(r).sub(&l.scale(&ht))))
        .collect()
}

/// Rows `sum_j e_j C_j(s, d) = 0` from `q~_j mod F~_i`, one per `(d, s)`.
pub fn reduced_system(q: &[UniPoly], f_i: &UniPoly, ideal: &GoodIdeal) -> Vec<Vec<Elem>> {
    let base = ideal.base();
    let rems: Vec<Vec<Vec<Elem>>> = q
        .iter()
        .map(|qj| {
            let rem = qj.rem(f_i);
            (0..f_i.deg0()).map(|d| ideal.coordinates(&rem.coeff(d))).collect()
        })
        .collect();
    let mut rows = Vec::new();
    for d in 0..f_i.deg0() {
        for s in 0..ideal.degree() {
            let row: Vec<Elem> = rems.iter().map(|rj| rj[d][s].clone()).collect();
            if row.iter().any(|c| !base.is_zero(c)) {
                rows.push(row);
            }
        }
    }
    rows
}

/// The reduced system of factor `i` for one point; `None` means the point
/// must be skipped.
pub fn build_reduced_system(i: usize, row: &LogDerivRow, factors: &FactorSet, ideal: &GoodIdeal) -> Option<Matrix> {
    let q = reduce_row(row, ideal)?;
    let f_i = ideal.reduce_factor(&factors.factors[i])?;
    Some(Matrix::from_rows(ideal.base(), factors.r(), reduced_system(&q, &f_i, ideal)))
}

/// Reads a candidate partition off the nullspace and certifies it: every
/// coefficient `A(t)/M(t)` of every block product must satisfy
/// `A(x) = A(alpha)/M(alpha) * M(x)` modulo `F~_i`.
pub fn check(system: &Matrix, i: usize, factors: &FactorSet, ideal: &GoodIdeal) -> Option<Partition> {
    let f_i = ideal.reduce_factor(&factors.factors[i])?;
    let candidate = zero_one_echelon(system.field(), &system.nullspace())?;
    certify(&candidate, &f_i, factors, ideal).then_some(candidate)
}

fn certify(candidate: &Partition, f_i: &UniPoly, factors: &FactorSet, ideal: &GoodIdeal) -> bool {
    let res = ideal.residue();
    let in_x = |p: &UniPoly| UniPoly::new(res.clone(), p.coeffs().iter().map(|c| res.embed(p.field(), c)).collect());
    for block in candidate.blocks() {
        let field = factors.field();
        let (g, m) = block.iter().fold((BiPoly::one(field), UniPoly::one(field)), |(g, m), &j| {
            (g.mul(&factors.factors[j]), m.mul(&factors.leading_coeffs[j]))
        });
        let m_alpha = ideal.reduce_poly(&m);
        let m_rem = in_x(&m).rem(f_i);
        for a in g.rows() {
            if a.is_constant() && m.is_constant() {
                continue;
            }
            let ct = res.div(&ideal.reduce_poly(a), &m_alpha).expect("good ideal");
            if in_x(a).rem(f_i) != m_rem.scale(&ct) {
                return false;
            }
        }
    }
    true
}

/// Output of the partitions driver.
#[derive(Clone, Debug)]
pub struct PartitionsOutcome {
    pub partitions: Vec<Partition>,
    /// Number of evaluation points used before each `P_i` was certified.
    pub c_counts: Vec<usize>,
    /// Whether `P_i` came from the full deterministic system.
    pub fallback: Vec<bool>,
    /// Degree of the extension used for evaluation points (1 if none).
    pub point_degree: usize,
}

/// Las Vegas computation of all `P_i`: points `c = 0, 1, 2, ...` add rows
/// until the check certifies each partition. Tiny fields are extended;
/// after `4n` points the remaining indices use [`partition_deterministic`].
pub fn partitions(factors: &FactorSet, ideal: &GoodIdeal) -> Result<PartitionsOutcome, SubfieldsError> {
    let r = factors.r();
    let n = factors.n();
    let cap = 4 * n;
    let base = factors.field().clone();
    let mut field = base.clone();
    let mut cur = ideal.clone();
    let mut reduced = reduce_factors(factors, &cur)?;
    let mut systems = vec![Matrix::new(&field, r); r];
    let mut result: Vec<Option<Partition>> = vec![None; r];
    let mut last_failed: Vec<Option<Partition>> = vec![None; r];
    let mut c_counts = vec![0; r];
    let mut point_degree = 1;
    let mut used = 0;
    let mut index = 0u64;
    while used < cap && result.iter().any(Option::is_none) {
        let Some(c) = field.element(index) else {
            if point_degree > 1 {
                break;
            }
            point_degree = extension_degree(&base, ideal.degree(), cap);
            field = make_extension(&base, point_degree)?;
            cur = ideal.over(&field)?;
            reduced = reduce_factors(factors, &cur)?;
            systems = systems.iter().map(|m| m.embed(&field)).collect();
            continue;
        };
        index += 1;
        let row = log_derivative_row(&field, &c, factors);
        let Some(q) = reduce_row(&row, &cur) else {
            continue;
        };
        used += 1;
        for i in 0..r {
            if result[i].is_some() {
                continue;
            }
            c_counts[i] = used;
            let mut grew = false;
            for row in reduced_system(&q, &reduced[i], &cur) {
                grew |= systems[i].push_row(row);
            }
            if !grew && last_failed[i].is_some() {
                continue;
            }
            let Some(candidate) = zero_one_echelon(&field, &systems[i].nullspace()) else {
                continue;
            };
            if last_failed[i].as_ref() == Some(&candidate) {
                continue;
            }
            if certify(&candidate, &reduced[i], factors, &cur) {
                result[i] = Some(candidate);
            } else {
                last_failed[i] = Some(candidate);
            }
        }
    }
    let mut fallback = vec![false; r];
    let mut partitions = Vec::with_capacity(r);
    for (i, p) in result.into_iter().enumerate() {
        match p {
            Some(p) => partitions.push(p),
            None => {
                fallback[i] = true;
                partitions.push(partition_deterministic(i, factors)?);
            }
        }
    }
    Ok(PartitionsOutcome { partitions, c_counts, fallback, point_degree })
}

fn reduce_factors(factors: &FactorSet, ideal: &GoodIdeal) -> Result<Vec<UniPoly>, SubfieldsError> {
    factors
        .factors
        .iter()
        .map(|g| ideal.reduce_factor(g).ok_or(SubfieldsError::Arith(ArithError::DivisionByZero)))
        .collect()
}

/// Smallest `e >= 2` coprime to the place degree (so the place stays
/// irreducible) with enough new points for the remaining budget.
fn extension_degree(base: &Field, place_degree: usize, budget: usize) -> usize {
    let q = base.cardinality_u64().expect("finite") as u128;
    let mut e = 2;
    loop {
        if gcd(e, place_degree) == 1 && q.checked_pow(e as u32).map_or(true, |c| c >= q + budget as u128 + 1) {
            return e;
        }
        e += 1;
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Numerators of `x^a mod F_i` over the denominators `m_i^{e_a}`,
/// `e_a = max(0, a - d_i + 1)`, extended on demand.
struct PowerTable {
    g: BiPoly,
    nums: Vec<Vec<UniPoly>>,
}

impl PowerTable {
    fn new(g: &BiPoly) -> Self {
        let f = g.field();
        let d = g.deg_x().unwrap_or(0);
        let mut first = vec![UniPoly::zero(f); d];
        first[0] = UniPoly::one(f);
        PowerTable { g: g.clone(), nums: vec![first] }
    }

    fn extend(&mut self, a: usize) {
        let d = self.nums[0].len();
        let m = self.g.lc_x();
        while self.nums.len() <= a {
            let prev = self.nums.last().unwrap();
            let top = prev[d - 1].clone();
            let shifted = std::iter::once(UniPoly::zero(m.field())).chain(prev[..d - 1].iter().cloned());
            let next = if self.nums.len() >= d {
                shifted.enumerate().map(|(k, c)| c.mul(&m).sub(&top.mul(&self.g.row(k)))).collect()
            } else {
                shifted.collect()
            };
            self.nums.push(next);
        }
    }

    /// `m_i^{e_top} (p(x) mod F_i)` as coefficient numerators, for
    /// `deg p <= top`. Horner in `m_i` over ascending powers of `x`.
    fn reduce(&mut self, p: &UniPoly, top: usize) -> Vec<UniPoly> {
        self.extend(top);
        let d = self.nums[0].len();
        let m = self.g.lc_x();
        let f = p.field();
        let mut acc = vec![UniPoly::zero(f); d];
        for a in 0..=top {
            if a >= d {
                acc = acc.iter().map(|x| x.mul(&m)).collect();
            }
            let c = p.coeff(a);
            if f.is_zero(&c) {
                continue;
            }
            for (slot, n) in acc.iter_mut().zip(&self.nums[a]) {
                *slot = slot.add(&n.scale(&c));
            }
        }
        acc
    }
}

/// Evaluation points `c_k` with their logarithmic-derivative data, shared
/// by every `i` in the deterministic computation.
#[derive(Clone, Debug)]
pub struct DetPoints {
    field: Field,
    rows: Vec<(UniPoly, Vec<UniPoly>, usize)>,
}

/// `2n` points from the base field, or from one extension of degree
/// `ceil(log_q(2n + 1))` when the base is too small.
pub fn deterministic_points(factors: &FactorSet) -> Result<DetPoints, SubfieldsError> {
    let needed = 2 * factors.n();
    let field = match factors.field().cardinality_u64() {
        Some(q) if (q as u128) < needed as u128 => {
            let mut e = 1;
            while (q as u128).pow(e as u32) < needed as u128 + 1 {
                e += 1;
            }
            make_extension(factors.field(), e)?
        }
        _ => factors.field().clone(),
    };
    let mut rows = Vec::with_capacity(needed);
    for k in 0..needed {
        let c = field.element(k as u64).ok_or_else(|| SubfieldsError::TooFewPoints {
            needed,
            found: k,
            field: field.to_string(),
        })?;
        let row = log_derivative_row(&field, &c, factors);
        let top = row.p.iter().map(UniPoly::deg0).chain([row.l.deg0()]).max().unwrap_or(0);
        rows.push((row.l, row.p, top));
    }
    Ok(DetPoints { field, rows })
}

/// Nullspace of the full system for `G_i` at the given points.
///
/// With `x^a mod F_i` tabulated once, `m_i^e` times the remainder of
/// `l(t)q_j = l(t)p_j(x) - p_j(t)l(x)` is `l(t)U_j(x) - p_j(t)V(x)` where
/// `U_j`, `V` are the scaled remainders of `p_j`, `l`. The equations are its
/// coefficients in `t^s x^d`; the scaling is common to all `j`.
fn deterministic_nullspace(g: &BiPoly, rows: &[(UniPoly, Vec<UniPoly>, usize)], r: usize) -> Vec<Vec<Elem>> {
    let mut table = PowerTable::new(g);
    let mut space = RowSpace::new(g.field(), r);
    for (l, ps, top) in rows {
        let v = table.reduce(l, *top);
        let cols: Vec<Vec<UniPoly>> = ps
            .iter()
            .map(|p| {
                let u = table.reduce(p, *top);
                u.iter().zip(&v).map(|(u, v)| l.mul(u).sub(&p.mul(v))).collect()
            })
            .collect();
        for d in 0..v.len() {
            let dt = cols.iter().filter_map(|c| c[d].degree()).max();
            for s in 0..dt.map_or(0, |x| x + 1) {
                space.insert(cols.iter().map(|c| c[d].coeff(s)).collect());
            }
        }
    }
    space.nullspace()
}

/// Whether every block indicator of `candidate` solves the system exactly.
#[cfg(test)]
fn solves_system(g: &BiPoly, rows: &[(UniPoly, Vec<UniPoly>, usize)], candidate: &Partition) -> bool {
    let mut table = PowerTable::new(g);
    for (l, ps, top) in rows {
        let v = table.reduce(l, *top);
        for block in candidate.blocks() {
            let p = block.iter().fold(UniPoly::zero(l.field()), |acc, &j| acc.add(&ps[j]));
            let u = table.reduce(&p, *top);
            if u.iter().zip(&v).any(|(u, v)| l.mul(u) != p.mul(v)) {
                return false;
            }
        }
    }
    true
}

/// [`solves_system`] over the rationals without fractions. The identity
/// `l U_B = P_B V` is bilinear in `(l, P_B)` and homogeneous in the scaling of
/// `G_i`, so each may be scaled to integer coefficients independently.
fn solves_system_integer(g: &BiPoly, rows: &[(UniPoly, Vec<UniPoly>, usize)], candidate: &Partition) -> bool {
    let gz: Vec<Vec<BigInt>> = primitive_bivariate(g).into_iter().map(itrim).collect();
    let d = gz.len() - 1;
    let m = gz[d].clone();
    // nums[a]: numerators of x^a mod F_i over m^{e_a}
    let mut nums: Vec<Vec<Vec<BigInt>>> = vec![(0..d).map(|k| if k == 0 { vec![BigInt::one()] } else { Vec::new() }).collect()];
    let extend = |nums: &mut Vec<Vec<Vec<BigInt>>>, a: usize| {
        while nums.len() <= a {
            let prev = nums.last().unwrap();
            let top = prev[d - 1].clone();
            let shifted = std::iter::once(Vec::new()).chain(prev[..d - 1].iter().cloned());
            let next = if nums.len() >= d {
                shifted.enumerate().map(|(k, c)| isub(&imul(&c, &m), &imul(&top, &gz[k]))).collect()
            } else {
                shifted.collect()
            };
            nums.push(next);
        }
    };
    let reduce = |nums: &[Vec<Vec<BigInt>>], p: &[BigInt], top: usize| -> Vec<Vec<BigInt>> {
        let mut acc: Vec<Vec<BigInt>> = vec![Vec::new(); d];
        for a in 0..=top {
            if a >= d {
                acc = acc.iter().map(|x| imul(x, &m)).collect();
            }
            let Some(c) = p.get(a).filter(|c| !c.is_zero()) else { continue };
            for (slot, n) in acc.iter_mut().zip(&nums[a]) {
                *slot = iadd(slot, &iscale(n, c));
            }
        }
        acc
    };
    for (l, ps, top) in rows {
        extend(&mut nums, *top);
        let lz = primitive_integer(l);
        let v = reduce(&nums, &lz, *top);
        for block in candidate.blocks() {
            let p = block.iter().fold(UniPoly::zero(l.field()), |acc, &j| acc.add(&ps[j]));
            if p.is_zero() {
                continue;
            }
            let pz = primitive_integer(&p);
            let u = reduce(&nums, &pz, *top);
            if u.iter().zip(&v).any(|(u, v)| imul(&lz, u) != imul(&pz, v)) {
                return false;
            }
        }
    }
    true
}

/// `P_i` as the {0,1}-echelon nullspace of the full system at `2n` points.
pub fn partition_deterministic(i: usize, factors: &FactorSet) -> Result<Partition, SubfieldsError> {
    partition_deterministic_at(i, factors, &deterministic_points(factors)?)
}

/// All `P_i` by the deterministic method, sharing the point data.
pub fn partitions_deterministic(factors: &FactorSet) -> Result<Vec<Partition>, SubfieldsError> {
    let points = deterministic_points(factors)?;
    (0..factors.r()).map(|i| partition_deterministic_at(i, factors, &points)).collect()
}

/// Over the rationals the nullspace is first computed modulo a large prime.
/// A {0,1} candidate that solves the rational system exactly is the answer:
/// it spans a subspace of the rational nullspace, whose dimension cannot
/// exceed the modular one. Otherwise the system is solved over the rationals.
pub fn partition_deterministic_at(i: usize, factors: &FactorSet, points: &DetPoints) -> Result<Partition, SubfieldsError> {
    let r = factors.r();
    let g = factors.factors[i].embed(&points.field);
    if points.field == Field::Rational {
        for prime in large_primes().take(3) {
            let Some(gp) = reduce_bipoly(&g, prime) else {
                continue;
            };
            let reduced: Option<Vec<_>> = points
                .rows
                .iter()
                .map(|(l, ps, top)| {
                    let ps: Option<Vec<UniPoly>> = ps.iter().map(|p| reduce_rational(p, prime)).collect();
                    Some((reduce_rational(l, prime)?, ps?, *top))
                })
                .collect();
            let Some(reduced) = reduced else {
                continue;
            };
            let basis = deterministic_nullspace(&gp, &reduced, r);
            if let Some(candidate) = zero_one_echelon(gp.field(), &basis) {
                if solves_system_integer(&g, &points.rows, &candidate) {
                    return Ok(candidate);
                }
            }
        }
    }
    let basis = deterministic_nullspace(&g, &points.rows, r);
    zero_one_echelon(&points.field, &basis).ok_or(SubfieldsError::NotZeroOne(i))
}

fn reduce_bipoly(g: &BiPoly, prime: u64) -> Option<BiPoly> {
    let rows: Option<Vec<UniPoly>> = g.rows().iter().map(|r| reduce_rational(r, prime)).collect();
    let reduced = BiPoly::new(Field::Prime(prime), rows?);
    (reduced.deg_x() == g.deg_x() && reduced.lc_x().degree() == g.lc_x().degree()).then_some(reduced)
}

/// The system expanded literally over `t^s x^d` with pseudo remainders in
/// `K[t][x]`; slow, kept to cross-check the evaluated form.
#[cfg(test)]
fn partition_deterministic_expanded(i: usize, factors: &FactorSet) -> Result<Partition, SubfieldsError> {
    let field = deterministic_points(factors)?.field;
    let g_i = factors.factors[i].embed(&field);
    let d_i = g_i.deg_x().unwrap_or(0);
    let mut system = Matrix::new(&field, factors.r());
    for k in 0..2 * factors.n() {
        let c = field.element(k as u64).expect("enough points");
        let row = log_derivative_row(&field, &c, factors);
        let lx = BiPoly::from_x(&row.l);
        let qs: Vec<BiPoly> =
            row.p.iter().map(|p| BiPoly::from_x(p).mul_t(&row.l).sub(&lx.mul_t(p))).collect();
        let top = qs.iter().filter_map(|q| q.deg_x()).max().unwrap_or(0);
        let e = (top + 1).saturating_sub(d_i);
        let rems: Vec<BiPoly> = qs.iter().map(|q| q.prem(&g_i, e)).collect();
        let dt = rems.iter().filter_map(|q| q.deg_t()).max().unwrap_or(0);
        for d in 0..d_i {
            for s in 0..=dt {
                system.push_row(rems.iter().map(|q| q.coeff(d, s)).collect());
            }
        }
    }
    zero_one_echelon(&field, &system.nullspace()).ok_or(SubfieldsError::NotZeroOne(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_nabla;
    use crate::poly::parse::parse_ratfun;
    use crate::poly::resultant::resultant_x;

    fn setup(text: &str, field: &Field) -> FactorSet {
        factor_nabla(&parse_ratfun(text, field).unwrap(), 7).unwrap()
    }

    fn point(field: &Field, a: i64) -> GoodIdeal {
        GoodIdeal::new(&UniPoly::new(field.clone(), vec![field.from_i64(-a), field.one()])).unwrap()
    }

    fn shown(ps: &[Partition]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn good_ideal_t4() {
        let q = Field::Rational;
        let f = parse_ratfun("t^4", &q).unwrap();
        let ideal = find_good_ideal(&f).unwrap();
        assert_eq!(ideal.modulus().format_var("x"), "x - 1");
        let f3 = Field::prime(3).unwrap();
        let ideal = find_good_ideal(&parse_ratfun("t^4", &f3).unwrap()).unwrap();
        assert_eq!(ideal.degree(), 1);
        assert_eq!(f3.format_elem(ideal.alpha()), "1");
    }

    #[test]
    fn good_ideal_agrees_with_resultant() {
        let q = Field::Rational;
        for text in ["(t^2+1)/t", "t^4", "(t^3+t+1)/(t^2-3)", "t^6+2*t^4+t^2+1"] {
            let f = parse_ratfun(text, &q).unwrap();
            let nabla = BiPoly::nabla(f.num(), f.den());
            let res = resultant_x(&nabla, &nabla.derivative_x());
            let good = |a: i64| {
                let a = q.from_i64(a);
                !q.is_zero(&f.num().eval(&a)) && !q.is_zero(&f.den().eval(&a)) && !q.is_zero(&res.eval(&a))
            };
            let chosen = find_good_ideal(&f).unwrap().modulus().coeff(0);
            let a: i64 = q.format_elem(&q.neg(&chosen)).parse().unwrap();
            assert!(good(a), "{text}");
            assert!((0..a).all(|b| !good(b)), "{text}");
        }
    }

    #[test]
    fn small_field_uses_higher_degree_place() {
        // every element of F_2 is a pole or zero of t^2 + t
        let f2 = Field::prime(2).unwrap();
        let f = parse_ratfun("t^3/(t^2+t+1)", &f2).unwrap();
        let ideal = find_good_ideal(&f).unwrap();
        assert!(ideal.is_good_for(&f));
        let g = parse_ratfun("(t^3+1)/(t^2+t)", &f2).unwrap();
        let ideal = find_good_ideal(&g).unwrap();
        assert!(ideal.degree() >= 2);
        assert!(ideal.modulus().is_irreducible());
    }

    #[test]
    fn log_derivatives_t4() {
        let q = Field::Rational;
        let fs = setup("t^4", &q);
        let row = log_derivative_row(&q, &q.one(), &fs);
        let h: Vec<String> = row.h.iter().map(|h| h.format_var("t")).collect();
        assert_eq!(h, ["-1/(t - 1)", "1/(t + 1)", "2/(t^2 + 1)"]);
        assert_eq!(row.l.to_string(), "t^4 - 1");
        assert_eq!(row.p[0].to_string(), "-t^3 - t^2 - t - 1");
        for (h, p) in row.h.iter().zip(&row.p) {
            assert_eq!(&RatFun::new(p, &row.l).unwrap(), h);
        }
    }

    #[test]
    fn reduced_row_t4() {
        let q = Field::Rational;
        let fs = setup("t^4", &q);
        let ideal = point(&q, 2);
        let row = log_derivative_row(&q, &q.one(), &fs);
        let qt = reduce_row(&row, &ideal).unwrap();
        let f2 = ideal.reduce_factor(&fs.factors[1]).unwrap();
        assert_eq!(f2.format_var("x"), "x + 2");
        let rows = reduced_system(&qt, &f2, &ideal);
        assert_eq!(rows.len(), 1);
        let vals: Vec<String> = rows[0].iter().map(|c| q.format_elem(c)).collect();
        // l is normalized monic, which flips the sign of (-20, 20, 0)
        assert!(vals == ["-20", "20", "0"] || vals == ["20", "-20", "0"], "{vals:?}");
        let m = build_reduced_system(1, &row, &fs, &ideal).unwrap();
        assert_eq!(check(&m, 1, &fs, &ideal).unwrap().to_string(), "{{1,2},{3}}");
        // a single point is not enough to pin down P_3
        let m3 = build_reduced_system(2, &row, &fs, &ideal).unwrap();
        assert!(m3.nullspace().iter().all(|v| v.len() == 3));
    }

    #[test]
    fn skip_signal_on_pole() {
        let q = Field::Rational;
        let fs = setup("t^4", &q);
        // h_1 = -1/(t - 1) has a pole at t = 1
        let ideal = point(&q, 1);
        let row = log_derivative_row(&q, &q.one(), &fs);
        assert!(reduce_row(&row, &ideal).is_none());
        assert!(build_reduced_system(1, &row, &fs, &ideal).is_none());
    }

    #[test]
    fn check_empty_system() {
        let q = Field::Rational;
        let fs = setup("t^4", &q);
        let ideal = find_good_ideal(&fs.f).unwrap();
        let empty = Matrix::new(&q, 3);
        assert!(check(&empty, 0, &fs, &ideal).unwrap().is_discrete());
        assert!(check(&empty, 1, &fs, &ideal).is_none());
        let half = Matrix::from_rows(&q, 3, vec![vec![q.one(), q.from_i64(2), q.zero()], vec![q.zero(), q.zero(), q.one()]]);
        assert!(check(&half, 1, &fs, &ideal).is_none());
    }

    #[test]
    fn partitions_t4_and_t6() {
        let q = Field::Rational;
        let fs = setup("t^4", &q);
        let out = partitions(&fs, &find_good_ideal(&fs.f).unwrap()).unwrap();
        assert_eq!(shown(&out.partitions), ["{{1},{2},{3}}", "{{1,2},{3}}", "{{1,2,3}}"]);
        assert!(out.fallback.iter().all(|f| !f));
        let fs = setup("t^6", &q);
        let names: Vec<String> = fs.factors.iter().map(|g| g.format()).collect();
        assert_eq!(names, ["x - t", "x + t", "x^2 + x*t + t^2", "x^2 - x*t + t^2"]);
        let out = partitions(&fs, &find_good_ideal(&fs.f).unwrap()).unwrap();
        assert_eq!(
            shown(&out.partitions),
            ["{{1},{2},{3},{4}}", "{{1,2},{3,4}}", "{{1,3},{2,4}}", "{{1,2,3,4}}"]
        );
    }

    #[test]
    fn deterministic_matches() {
        let q = Field::Rational;
        let fs = setup("t^4", &q);
        assert!(partition_deterministic(0, &fs).unwrap().is_discrete());
        assert!(partition_deterministic(2, &fs).unwrap().is_single_block());
        let fs = setup("t^6", &q);
        assert_eq!(partition_deterministic(1, &fs).unwrap().to_string(), "{{1,2},{3,4}}");
    }

    #[test]
    fn integer_verification_matches_rational() {
        let q = Field::Rational;
        let fs = setup("(t^4 - 2*t + 1/3)^2 - 5*(t^4 - 2*t + 1/3)", &q);
        let points = deterministic_points(&fs).unwrap();
        for i in 0..fs.r() {
            let right = partition_deterministic_at(i, &fs, &points).unwrap();
            let wrong = Partition::discrete(fs.r());
            for cand in [&right, &wrong, &Partition::single_block(fs.r())] {
                assert_eq!(
                    solves_system_integer(&fs.factors[i], &points.rows, cand),
                    solves_system(&fs.factors[i], &points.rows, cand)
                );
            }
        }
    }

    #[test]
    fn evaluated_system_matches_expansion() {
        let q = Field::Rational;
        let f5 = Field::prime(5).unwrap();
        for (text, field) in [("t^6", &q), ("t^6+2*t^4+t^2", &q), ("(t^4+1)/(t^2+3)", &q), ("t^4+t^2", &f5)] {
            let fs = factor_nabla(&parse_ratfun(text, field).unwrap(), 3).unwrap();
            for i in 0..fs.r() {
                assert_eq!(partition_deterministic(i, &fs), partition_deterministic_expanded(i, &fs), "{text} {i}");
            }
        }
    }

    #[test]
    fn tiny_field_extends_points() {
        let f3 = Field::prime(3).unwrap();
        let fs = setup("t^4", &f3);
        let ideal = find_good_ideal(&fs.f).unwrap();
        let out = partitions(&fs, &ideal).unwrap();
        for (i, p) in out.partitions.iter().enumerate() {
            assert_eq!(p, &partition_deterministic(i, &fs).unwrap());
        }
    }
}
