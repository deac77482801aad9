//! Polynomial factorization: univariate over finite fields and the
//! rationals, and the bivariate factorization of `n(x)d(t) - n(t)d(x)`.

pub mod finite;
mod modular;
pub mod rational;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{make_extension, Elem, Field};
use crate::poly::{BiPoly, RatFun, RatPolyX, UniPoly};
use rational::subsets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("specialization at t = {0} is not squarefree")]
    NotSquarefree(String),
    #[error("factors do not match the specialization")]
    BadLiftInput,
    #[error("input not normalized: {0}")]
    Precondition(String),
    #[error("factorization invariant violated: {0}")]
    Invariant(String),
}

/// Monic irreducible factors with multiplicities, in canonical order.
pub fn factor_univariate(g: &UniPoly, seed: u64) -> Result<Vec<(UniPoly, usize)>, FactorError> {
    if g.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    if g.is_constant() {
        return Ok(Vec::new());
    }
    Ok(match g.field() {
        Field::Rational => rational::factor_rational(g),
        _ => finite::factor_finite(g, &mut ChaCha8Rng::seed_from_u64(seed)),
    })
}

/// Power series in `s` with polynomial coefficients in `x`; index `k` holds
/// the coefficient of `s^k`.
type Series = Vec<UniPoly>;

/// Reads a bivariate polynomial (rows in `x`, entries in `s`) as a series.
fn to_series(b: &BiPoly, precision: usize) -> Series {
    let f = b.field();
    (0..precision)
        .map(|k| UniPoly::new(f.clone(), b.rows().iter().map(|r| r.coeff(k)).collect()))
        .collect()
}

fn from_series(field: &Field, s: &Series) -> BiPoly {
    let dx = s.iter().filter_map(|c| c.degree()).max().map_or(0, |d| d + 1);
    let rows = (0..dx)
        .map(|i| UniPoly::new(field.clone(), s.iter().map(|c| c.coeff(i)).collect()))
        .collect();
    BiPoly::new(field.clone(), rows)
}

/// Inverse of a unit power series `l(s)` modulo `s^precision`.
fn series_inverse(l: &UniPoly, precision: usize) -> Vec<Elem> {
    let f = l.field();
    let inv0 = f.inv(&l.coeff(0)).expect("unit series");
    let mut out = vec![inv0.clone()];
    for k in 1..precision {
        let mut acc = f.zero();
        for j in 1..=k.min(l.deg0()) {
            acc = f.add(&acc, &f.mul(&l.coeff(j), &out[k - j]));
        }
        out.push(f.neg(&f.mul(&acc, &inv0)));
    }
    out
}

/// Lifts `f = g0*h0` (at `s = 0`, both monic in `x`) to a factorization
/// modulo `s^precision`, one power of `s` at a time.
fn lift_pair(f: &Series, g0: &UniPoly, h0: &UniPoly, precision: usize) -> (Series, Series) {
    let (one, sigma, tau) = g0.xgcd(h0);
    assert!(one.is_one(), "factors at the specialization must be coprime");
    let mut g = vec![g0.clone()];
    let mut h = vec![h0.clone()];
    for k in 1..precision {
        let mut e = f.get(k).cloned().unwrap_or_else(|| UniPoly::zero(g0.field()));
        for j in 1..k {
            if !g[j].is_zero() && !h[k - j].is_zero() {
                e = e.sub(&g[j].mul(&h[k - j]));
            }
        }
        if e.is_zero() {
            g.push(e.clone());
            h.push(e);
            continue;
        }
        h.push(sigma.mul(&e).rem(h0));
        g.push(tau.mul(&e).rem(g0));
    }
    (g, h)
}

fn lift_tree(f: &Series, factors: &[UniPoly], precision: usize) -> Vec<Series> {
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    let field = factors[0].field();
    let half = factors.len() / 2;
    let prod = |fs: &[UniPoly]| fs.iter().fold(UniPoly::one(field), |acc, x| acc.mul(x));
    let (g, h) = lift_pair(f, &prod(&factors[..half]), &prod(&factors[half..]), precision);
    let mut out = lift_tree(&g, &factors[..half], precision);
    out.extend(lift_tree(&h, &factors[half..], precision));
    out
}

fn series_mul(a: &Series, b: &Series, precision: usize) -> Series {
    let f = a[0].field();
    (0..precision)
        .map(|k| {
            let mut acc = UniPoly::zero(f);
            for j in 0..=k {
                if let (Some(x), Some(y)) = (a.get(j), b.get(k - j)) {
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
            }
            acc
        })
        .collect()
}

/// Monic-in-`x` series of `F(x, s + t0) / lc_x` to the given precision.
fn monic_series(shifted: &BiPoly, precision: usize) -> Series {
    let lc = shifted.lc_x();
    let inv = series_inverse(&lc, precision);
    let raw = to_series(shifted, precision);
    (0..precision)
        .map(|k| {
            let mut acc = UniPoly::zero(shifted.field());
            for j in 0..=k {
                if !raw[j].is_zero() {
                    acc = acc.add(&raw[j].scale(&inv[k - j]));
                }
            }
            acc
        })
        .collect()
}

/// Lifts the monic factorization of `F(x, t0)` to factors of `F / lc_x(F)`
/// modulo `(t - t0)^precision`. Each returned factor is monic in `x` and
/// written in `t` again after truncation in `t - t0`.
pub fn hensel_lift_bivariate(
    big: &BiPoly,
    t0: &Elem,
    factors: &[UniPoly],
    precision: usize,
) -> Result<Vec<BiPoly>, FactorError> {
    let f = big.field();
    let spec = big.eval_t(f, t0);
    if spec.degree() != big.deg_x() || !spec.is_squarefree() {
        return Err(FactorError::NotSquarefree(f.format_elem(t0)));
    }
    let prod = factors.iter().fold(UniPoly::one(f), |acc, x| acc.mul(x));
    if prod != spec.monic() {
        return Err(FactorError::BadLiftInput);
    }
    let precision = precision.max(1);
    let shifted = big.shift_t(t0);
    let series = monic_series(&shifted, precision);
    let neg = f.neg(t0);
    Ok(lift_tree(&series, factors, precision)
        .iter()
        .map(|s| from_series(f, s).shift_t(&neg))
        .collect())
}

/// Irreducible factors `G_i` of `n(x)d(t) - n(t)d(x)` with their monic forms.
#[derive(Clone, Debug)]
pub struct FactorSet {
    pub f: RatFun,
    pub nabla: BiPoly,
    /// `G_1 = x - t` first; each normalized so `lc_x` is monic in `t`.
    pub factors: Vec<BiPoly>,
    pub monic_factors: Vec<RatPolyX>,
    pub leading_coeffs: Vec<UniPoly>,
    /// Specialization point used for the lifting, as text.
    pub specialization: String,
}

impl FactorSet {
    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn n(&self) -> usize {
        self.f.degree()
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    fn build(f: &RatFun, nabla: BiPoly, mut rest: Vec<BiPoly>, specialization: String) -> Result<Self, FactorError> {
        let field = f.field();
        rest.sort_by(|a, b| a.cmp_canonical(b));
        let mut factors = vec![BiPoly::x_minus_t(field)];
        factors.extend(rest);
        let leading_coeffs: Vec<UniPoly> = factors.iter().map(|g| g.lc_x()).collect();
        let monic_factors = factors
            .iter()
            .zip(&leading_coeffs)
            .map(|(g, m)| RatPolyX::from_bipoly_over(g, m))
            .collect::<Result<_, _>>()
            .map_err(|e| FactorError::Invariant(e.to_string()))?;
        let set = FactorSet { f: f.clone(), nabla, factors, monic_factors, leading_coeffs, specialization };
        set.check()?;
        Ok(set)
    }

    /// Re-expansion and degree identities.
    pub fn check(&self) -> Result<(), FactorError> {
        let field = self.field();
        let prod = self.factors.iter().fold(BiPoly::one(field), |acc, g| acc.mul(g));
        if prod != self.nabla {
            return Err(FactorError::Invariant("product of factors differs from nabla".into()));
        }
        let m = self.leading_coeffs.iter().fold(UniPoly::one(field), |acc, x| acc.mul(x));
        if &m != self.f.den() {
            return Err(FactorError::Invariant("leading coefficients do not multiply to the denominator".into()));
        }
        let n = self.n();
        let sx: usize = self.factors.iter().map(|g| g.deg_x().unwrap_or(0)).sum();
        let st: usize = self.factors.iter().map(|g| g.deg_t().unwrap_or(0)).sum();
        if sx != n || st != n {
            return Err(FactorError::Invariant(format!("degree sums {sx}, {st} differ from {n}")));
        }
        if self.factors.iter().any(|g| !g.lc_x().is_monic()) {
            return Err(FactorError::Invariant("leading coefficient not normalized".into()));
        }
        if self.monic_factors.iter().any(|m| !m.is_monic()) {
            return Err(FactorError::Invariant("monic factor not monic".into()));
        }
        Ok(())
    }
}

/// Checks the normalization expected by [`factor_nabla`].
pub fn check_normalized(f: &RatFun) -> Result<(), FactorError> {
    let (num, den) = (f.num(), f.den());
    if num.deg0() <= den.deg0() {
        return Err(FactorError::Precondition("numerator degree must exceed denominator degree".into()));
    }
    if !num.is_monic() {
        return Err(FactorError::Precondition("numerator must be monic".into()));
    }
    let sep = num.derivative().mul(den).sub(&num.mul(&den.derivative()));
    if sep.is_zero() {
        return Err(FactorError::Precondition("input is not separable".into()));
    }
    Ok(())
}

/// Candidate specialization points: the base field first, then extensions
/// of increasing degree for small finite fields.
struct PointSearch {
    base: Field,
    current: Field,
    degree: usize,
    index: u64,
}

impl PointSearch {
    fn new(base: &Field) -> Self {
        PointSearch { base: base.clone(), current: base.clone(), degree: 1, index: 0 }
    }

    fn next(&mut self) -> (Field, Elem) {
        loop {
            if let Some(e) = self.current.element(self.index) {
                self.index += 1;
                return (self.current.clone(), e);
            }
            self.degree += 1;
            self.current = make_extension(&self.base, self.degree).expect("finite base");
            // elements with index below |base| lie in the base, already tried
            self.index = self.base.cardinality_u64().unwrap_or(0);
        }
    }
}

/// Factors `n(x)d(t) - n(t)d(x)` for a normalized `f = n/d`.
pub fn factor_nabla(f: &RatFun, seed: u64) -> Result<FactorSet, FactorError> {
    factor_nabla_with(f, seed, true)
}

/// Without the modular shortcut over the rationals.
#[cfg(test)]
pub(crate) fn factor_nabla_exact(f: &RatFun, seed: u64) -> Result<FactorSet, FactorError> {
    factor_nabla_with(f, seed, false)
}

fn factor_nabla_with(f: &RatFun, seed: u64, modular: bool) -> Result<FactorSet, FactorError> {
    check_normalized(f)?;
    let field = f.field().clone();
    let nabla = BiPoly::nabla(f.num(), f.den());
    let g1 = BiPoly::x_minus_t(&field);
    let w = nabla.div_exact(&g1).ok_or_else(|| FactorError::Invariant("x - t does not divide nabla".into()))?;
    if w.deg_x() == Some(0) {
        return FactorSet::build(f, nabla, Vec::new(), "-".into());
    }
    let mut search = PointSearch::new(&field);
    let (ext, t0) = loop {
        let (ext, t0) = search.next();
        if ext.is_zero(&f.den().eval_in(&ext, &t0)) {
            continue;
        }
        let spec = w.eval_t(&ext, &t0);
        if spec.is_squarefree() {
            break (ext, t0);
        }
    };
    let spec = w.eval_t(&ext, &t0);
    let local: Vec<UniPoly> = factor_univariate(&spec, seed)?.into_iter().map(|(p, _)| p).collect();
    let label = ext.format_elem(&t0);
    if local.len() == 1 {
        return FactorSet::build(f, nabla, vec![w.primitive_part_x()], label);
    }
    let dt = w.deg_t().unwrap_or(0);
    let precision = dt + f.den().deg0() + 1;
    if modular && field == Field::Rational {
        if let Some(rest) = modular::factor_modular(&w, &t0, &local, precision) {
            return FactorSet::build(f, nabla, rest, label);
        }
    }
    let w_ext = w.embed(&ext);
    let shifted = w_ext.shift_t(&t0);
    let series = monic_series(&shifted, precision);
    let lifted = lift_tree(&series, &local, precision);
    let rest = recombine(&w, &ext, &t0, lifted, precision)?;
    FactorSet::build(f, nabla, rest, label)
}

/// Groups lifted local factors into true factors over the base field.
fn recombine(w: &BiPoly, ext: &Field, t0: &Elem, lifted: Vec<Series>, precision: usize) -> Result<Vec<BiPoly>, FactorError> {
    Ok(recombine_groups(w, ext, t0, lifted, precision).into_iter().map(|(_, g)| g).collect())
}

/// As [`recombine`], also reporting which lifted factors make up each true
/// factor. Subsets are tried by increasing size, so each group is minimal.
pub(super) fn recombine_groups(
    w: &BiPoly,
    ext: &Field,
    t0: &Elem,
    lifted: Vec<Series>,
    precision: usize,
) -> Vec<(Vec<usize>, BiPoly)> {
    let base = w.field().clone();
    let neg = ext.neg(t0);
    let mut remaining: Vec<(usize, Series)> = lifted.into_iter().enumerate().collect();
    let mut rest = w.clone();
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let lc_series: Series = {
            let lc = rest.lc_x().embed(ext).taylor_shift(t0);
            (0..precision).map(|i| UniPoly::constant(ext, lc.coeff(i))).collect()
        };
        let mut hit = None;
        for subset in subsets(remaining.len(), k) {
            let mut cand = lc_series.clone();
            for &i in &subset {
                cand = series_mul(&cand, &remaining[i].1, precision);
            }
            let cand = from_series(ext, &cand).shift_t(&neg);
            let Some(cand) = cand.project(&base) else { continue };
            let cand = cand.primitive_part_x();
            if cand.deg_x().unwrap_or(0) == 0 {
                continue;
            }
            if let Some(q) = rest.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push((subset.iter().map(|&i| remaining[i].0).collect(), cand));
                rest = q;
                let mut i = 0;
                remaining.retain(|_| {
                    i += 1;
                    !subset.contains(&(i - 1))
                });
            }
            None => k += 1,
        }
    }
    if rest.deg_x().unwrap_or(0) > 0 {
        found.push((remaining.iter().map(|(i, _)| *i).collect(), rest.primitive_part_x()));
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfun;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn lift_difference_of_squares() {
        let f = q();
        let big = BiPoly::from_terms(&f, &[(2, 0, f.one()), (0, 2, f.from_i64(-1))]);
        let fac = vec![UniPoly::from_i64s(&f, &[-1, 1]), UniPoly::from_i64s(&f, &[1, 1])];
        let lifted = hensel_lift_bivariate(&big, &f.one(), &fac, 2).unwrap();
        assert_eq!(lifted[0], BiPoly::x_minus_t(&f));
        assert_eq!(lifted[1].format(), "x + t");
        let same = hensel_lift_bivariate(&big, &f.one(), &fac, 1).unwrap();
        assert_eq!(same[0], BiPoly::from_x(&fac[0]));
        let bad = hensel_lift_bivariate(&big, &f.zero(), &[UniPoly::var(&f).pow(2)], 2);
        assert!(matches!(bad, Err(FactorError::NotSquarefree(_))));
    }

    #[test]
    fn nabla_of_t2_and_t4() {
        let f = parse_ratfun("t^2", &q()).unwrap();
        let set = factor_nabla(&f, 0).unwrap();
        assert_eq!(set.factors.iter().map(|g| g.format()).collect::<Vec<_>>(), vec!["x - t", "x + t"]);
        let f = parse_ratfun("t^4", &q()).unwrap();
        let set = factor_nabla(&f, 0).unwrap();
        assert_eq!(
            set.factors.iter().map(|g| g.format()).collect::<Vec<_>>(),
            vec!["x - t", "x + t", "x^2 + t^2"]
        );
    }

    #[test]
    fn univariate_zero_is_error() {
        assert_eq!(factor_univariate(&UniPoly::zero(&q()), 0), Err(FactorError::ZeroPolynomial));
    }

    #[test]
    fn tiny_field_uses_extension_points() {
        // over F_2 both base points give a square specialization
        let f2 = Field::Prime(2);
        let f = parse_ratfun("t^8+t^3", &f2).unwrap();
        let set = factor_nabla(&f, 3).unwrap();
        set.check().unwrap();
        assert!(set.specialization.contains('y'));
    }

    #[test]
    fn rejects_unnormalized_input() {
        let f = parse_ratfun("2*t^2", &q()).unwrap();
        assert!(matches!(factor_nabla(&f, 0), Err(FactorError::Precondition(_))));
    }
}
