//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr (so it
//! shows up even under captured output) and then asserts.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use ratdec_core::decomp::complete_decompositions;
use ratdec_core::factor::{factor_nabla, FactorSet};
use ratdec_core::lattice::{close_under_join, Partition};
use ratdec_core::oracle::{membership_partition, oracle_decompositions, oracle_subfields, DEFAULT_CAP};
use ratdec_core::ratfun::prepare;
use ratdec_core::report::{run, RunOptions, Stage};
use ratdec_core::subfields::{find_good_ideal, partitions, partitions_deterministic};
use ratdec_core::{parse_ratfun, BiPoly, Field, RatFun, RatPolyX, UniPoly};

fn emit(criterion: u32, ok: bool, what: &str, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let line = format!("acceptance criterion {criterion}: {verdict} {what} ({detail})\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn q(s: &str) -> RatFun {
    parse_ratfun(s, &Field::Rational).unwrap()
}

/// Independent re-check of a factorization: `∇` rebuilt term by term, the
/// product compared up to a constant, leading coefficients and degree sums.
fn factor_invariants(fs: &FactorSet) -> Result<(), String> {
    let f = &fs.f;
    let field = f.field();
    let (num, den) = (f.num(), f.den());
    let n = f.degree();
    let c = |p: &UniPoly, i: usize| p.coeff(i);
    let mut terms = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let v = field.sub(&field.mul(&c(num, i), &c(den, j)), &field.mul(&c(num, j), &c(den, i)));
            if !field.is_zero(&v) {
                terms.push((i, j, v));
            }
        }
    }
    let nabla = BiPoly::from_terms(field, &terms);
    let prod = fs.factors.iter().fold(BiPoly::one(field), |acc, g| acc.mul(g));
    let top = prod.deg_x().ok_or("empty product")?;
    let tt = prod.lc_x().degree().ok_or("zero leading coefficient")?;
    let k = field.div(&nabla.coeff(top, tt), &prod.coeff(top, tt)).map_err(|e| e.to_string())?;
    if prod.scale(&k) != nabla {
        return Err(format!("product of factors is not a multiple of nabla for {f}"));
    }
    let m = fs.leading_coeffs.iter().fold(UniPoly::one(field), |acc, x| acc.mul(x));
    if &m != den {
        return Err(format!("leading coefficients multiply to {m}, not {den}"));
    }
    let sx: usize = fs.factors.iter().map(|g| g.deg_x().unwrap_or(0)).sum();
    let st: usize = fs.factors.iter().map(|g| g.deg_t().unwrap_or(0)).sum();
    if sx != n || st != n {
        return Err(format!("degree sums {sx}, {st} for n = {n}"));
    }
    Ok(())
}

fn strings(d: &[RatFun]) -> Vec<String> {
    d.iter().map(|c| c.to_string()).collect()
}

// ---------------------------------------------------------------- criterion 1

fn expected_factors() -> Vec<RatPolyX> {
    let f = Field::Rational;
    let x = |cs: &[&str]| RatPolyX::new(f.clone(), cs.iter().map(|c| q(c)).collect());
    let a = "(t^8 + 1)";
    let b = "(t^4 + 1)";
    vec![
        x(&["-t", "1"]),
        x(&["t", "1"]),
        x(&["1/t", "1"]),
        x(&["-1/t", "1"]),
        x(&["t^2", "0", "1"]),
        x(&["1/t^2", "0", "1"]),
        x(&["1/t^4", "0", "0", "0", &format!("{a}/(t^4*{b})"), "0", "0", "0", "1"]),
        x(&["t^4", "0", "0", "0", &format!("{a}/{b}"), "0", "0", "0", "1"]),
    ]
}

fn expected_partitions() -> Vec<Partition> {
    let p = |b: &[&[usize]]| Partition::from_one_based(8, b).unwrap();
    vec![
        p(&[&[1], &[2], &[3], &[4], &[5], &[6], &[7], &[8]]),
        p(&[&[1, 2], &[3, 4], &[5], &[6], &[7], &[8]]),
        p(&[&[1, 3], &[2, 4], &[5, 6], &[7, 8]]),
        p(&[&[1, 4], &[2, 3], &[5, 6], &[7, 8]]),
        p(&[&[1, 2, 5], &[3, 4, 6], &[7], &[8]]),
        p(&[&[1, 2, 6], &[3, 4, 5], &[7, 8]]),
        p(&[&[1, 2, 5, 7], &[3, 4, 6, 8]]),
        p(&[&[1, 2, 3, 4, 5, 6, 7, 8]]),
        p(&[&[1, 2, 3, 4], &[5, 6], &[7, 8]]),
        p(&[&[1, 2, 3, 4, 5, 6], &[7, 8]]),
    ]
}

fn relabel(p: &Partition, sigma: &[usize]) -> Partition {
    Partition::new(p.r(), p.blocks().iter().map(|b| b.iter().map(|&i| sigma[i]).collect()).collect()).unwrap()
}

fn worked_example() -> Result<String, String> {
    let start = Instant::now();
    let f = q("(t^24 - 2*t^12 + 1)/(t^16 + 2*t^12 + t^8)");
    let input = prepare(&f).map_err(|e| e.to_string())?;
    let fs = factor_nabla(&input.working, 0).map_err(|e| e.to_string())?;
    factor_invariants(&fs)?;
    if fs.r() != 8 {
        return Err(format!("r = {}", fs.r()));
    }
    // our index -> printed index, by matching the monic factors
    let printed = expected_factors();
    let mut sigma = Vec::with_capacity(8);
    for g in &fs.monic_factors {
        let k = printed.iter().position(|p| p == g).ok_or_else(|| format!("factor {} not printed", g.format()))?;
        sigma.push(k);
    }
    if sigma.iter().collect::<BTreeSet<_>>().len() != 8 {
        return Err("factor matching is not a bijection".into());
    }
    let ideal = find_good_ideal(&input.working).map_err(|e| e.to_string())?;
    let out = partitions(&fs, &ideal).map_err(|e| e.to_string())?;
    let expected = expected_partitions();
    for (i, p) in out.partitions.iter().enumerate() {
        if relabel(p, &sigma) != expected[sigma[i]] {
            return Err(format!("P for factor {} is {p}", i + 1));
        }
    }
    let lattice = close_under_join(&out.partitions);
    if lattice.len() != 10 {
        return Err(format!("m = {}", lattice.len()));
    }
    let added: BTreeSet<Partition> = lattice
        .partitions
        .iter()
        .filter(|p| !out.partitions.contains(p))
        .map(|p| relabel(p, &sigma))
        .collect();
    if added != expected[8..].iter().cloned().collect() {
        return Err("closure adds different partitions".into());
    }
    let chain: Vec<usize> = [0, 1, 4, 6, 7]
        .iter()
        .map(|&k| {
            let ours = lattice.partitions.iter().position(|p| relabel(p, &sigma) == expected[k]);
            ours.ok_or_else(|| format!("printed P_{} missing", k + 1))
        })
        .collect::<Result<_, _>>()?;
    let (decs, truncated) = complete_decompositions(&input, Some(&lattice), Some(&fs), None).map_err(|e| e.to_string())?;
    if truncated {
        return Err("chains truncated".into());
    }
    if decs.iter().any(|d| d.compose() != f) {
        return Err("a decomposition does not recompose".into());
    }
    let on_chain = decs.iter().find(|d| d.chain == chain).ok_or("chain L1 L2 L5 L7 L8 not emitted")?;
    let target: Vec<RatFun> = ["t^2", "(t^3 - 1)/(t^2 + t)", "t^2", "t^2"].iter().map(|s| q(s)).collect();
    if on_chain.components != target {
        return Err(format!("chain gives {:?}", strings(&on_chain.components)));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("r = 8, m = 10, {} decompositions, {elapsed:.2?}", decs.len()))
}

#[test]
fn criterion_1_worked_example() {
    let res = worked_example();
    let detail = match &res {
        Ok(s) => s.clone(),
        Err(e) => e.clone(),
    };
    emit(1, res.is_ok(), "degree-24 example: factors, partitions, closure, chain, decomposition", &detail);
    res.unwrap();
}

// ------------------------------------------------------------ criteria 2 to 5

struct Instance {
    label: String,
    n: usize,
    factor_check: Result<(), String>,
    partitions_match: bool,
    decompositions_match: bool,
    recomposes: bool,
    join_failures: usize,
    join_pairs: usize,
    /// `None` when `n > 24`.
    deterministic_match: Option<bool>,
    c_counts: Vec<usize>,
    main_and_oracle: Duration,
    error: Option<String>,
}

struct Suite {
    instances: Vec<Instance>,
}

const PAIRS: usize = 50;
const TRIPLES: usize = 20;

fn study(label: String, f: &RatFun, seed: u64) -> Instance {
    let mut inst = Instance {
        label,
        n: f.degree(),
        factor_check: Ok(()),
        partitions_match: false,
        decompositions_match: false,
        recomposes: false,
        join_failures: 0,
        join_pairs: 0,
        deterministic_match: None,
        c_counts: Vec::new(),
        main_and_oracle: Duration::ZERO,
        error: None,
    };
    if let Err(e) = study_into(&mut inst, f, seed) {
        inst.error = Some(e);
    }
    inst
}

fn study_into(inst: &mut Instance, f: &RatFun, seed: u64) -> Result<(), String> {
    let start = Instant::now();
    let input = prepare(f).map_err(|e| e.to_string())?;
    let fs = factor_nabla(&input.working, seed).map_err(|e| e.to_string())?;
    inst.factor_check = factor_invariants(&fs);
    let ideal = find_good_ideal(&input.working).map_err(|e| e.to_string())?;
    let out = partitions(&fs, &ideal).map_err(|e| e.to_string())?;
    inst.c_counts = out.c_counts.clone();
    let lattice = close_under_join(&out.partitions);
    let (decs, _) = complete_decompositions(&input, Some(&lattice), Some(&fs), None).map_err(|e| e.to_string())?;
    inst.recomposes = decs.iter().all(|d| d.compose() == *f);

    let oracle = oracle_subfields(&fs, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let r = fs.r();
    let theirs: Vec<Partition> = oracle.partitions.iter().map(|b| Partition::new(r, b.clone()).unwrap()).collect();
    let ours: BTreeSet<&Partition> = lattice.partitions.iter().collect();
    inst.partitions_match = ours == theirs.iter().collect();
    let ours: BTreeSet<Vec<String>> = decs.iter().map(|d| strings(&d.components)).collect();
    let theirs_d: BTreeSet<Vec<String>> = oracle_decompositions(&input, &oracle)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|d| strings(d))
        .collect();
    inst.decompositions_match = ours == theirs_d;
    inst.main_and_oracle = start.elapsed();

    // join law: membership partition of K(h_a) ∩ K(h_b) against the join
    for a in 0..theirs.len() {
        for b in a + 1..theirs.len() {
            let gens = [oracle.generators[a].clone(), oracle.generators[b].clone()];
            let meet = Partition::new(r, membership_partition(&fs, &gens)).unwrap();
            inst.join_pairs += 1;
            if Some(meet) != theirs[a].join(&theirs[b]).ok() {
                inst.join_failures += 1;
            }
        }
    }

    if inst.n <= 24 {
        let det = partitions_deterministic(&fs).map_err(|e| e.to_string())?;
        inst.deterministic_match = Some(det == out.partitions);
    }
    Ok(())
}

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let mut instances = Vec::new();
        for (fi, field) in [Field::Rational, Field::prime(101).unwrap()].into_iter().enumerate() {
            let mut rng = common::rng(1000 + fi as u64);
            for (parts, count) in [(2, PAIRS), (3, TRIPLES)] {
                for k in 0..count {
                    let (f, comps) = common::random_composite(&mut rng, &field, parts);
                    let label = format!("{field} {}", strings(&comps).join(" o "));
                    instances.push(study(label, &f, k as u64));
                }
            }
        }
        Suite { instances }
    })
}

fn summarize<F: Fn(&Instance) -> bool>(s: &Suite, ok: F) -> (usize, Vec<String>) {
    let bad: Vec<String> = s
        .instances
        .iter()
        .filter(|i| i.error.is_some() || !ok(i))
        .map(|i| format!("{}{}", i.label, i.error.as_ref().map(|e| format!(": {e}")).unwrap_or_default()))
        .collect();
    (s.instances.len(), bad)
}

#[test]
fn criterion_2_oracle_equivalence() {
    let s = suite();
    let (total, bad) = summarize(s, |i| i.partitions_match && i.decompositions_match && i.recomposes);
    let time: Duration = s.instances.iter().map(|i| i.main_and_oracle).sum();
    let ok = bad.is_empty() && time < Duration::from_secs(120);
    let detail = format!(
        "{total} composites over Q and F_101 ({PAIRS} pairs and {TRIPLES} triples each), {} mismatches, {time:.2?}",
        bad.len()
    );
    emit(2, ok, "partitions and decompositions equal the brute-force oracle", &detail);
    assert!(ok, "{detail}: {bad:?}");
}

#[test]
fn criterion_3_factor_invariants() {
    let s = suite();
    let (total, bad) = summarize(s, |i| i.factor_check.is_ok());
    let detail = format!("{total} factorizations plus the worked example, {} violations", bad.len());
    emit(3, bad.is_empty(), "c * prod G = nabla, prod m = f_d, degree sums = n", &detail);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_4_join_law() {
    let s = suite();
    let (_, bad) = summarize(s, |i| i.join_failures == 0);
    let pairs: usize = s.instances.iter().map(|i| i.join_pairs).sum();
    let detail = format!("{pairs} subfield pairs, {} instances with a violation", bad.len());
    emit(4, bad.is_empty(), "partition of an intersection is the join", &detail);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_5_deterministic_agreement() {
    let s = suite();
    let (_, bad) = summarize(s, |i| i.deterministic_match != Some(false));
    let checked = s.instances.iter().filter(|i| i.deterministic_match.is_some()).count();
    let detail = format!("{checked} instances with n <= 24, {} disagreements", bad.len());
    emit(5, bad.is_empty() && checked > 0, "deterministic and Las Vegas partitions agree", &detail);
    assert!(bad.is_empty() && checked > 0, "{bad:?}");
}

// ---------------------------------------------------------------- criterion 6

fn degree_sixty() -> RatFun {
    let parts = ["t^2 + 3*t - 1", "(t^2 + 1)/(t - 2)", "t^3 - 2*t + 1", "(t^5 + t^2 - 3)/(t^4 + 2*t + 1)"];
    parts.iter().skip(1).fold(q(parts[0]), |acc, p| acc.compose(&q(p)))
}

#[test]
fn criterion_6_degree_sixty() {
    let f = degree_sixty();
    let start = Instant::now();
    let rep = run(&f, Stage::Decompose, &RunOptions::default());
    let elapsed = start.elapsed();
    let (ok, detail) = match &rep {
        Ok(rep) => {
            let max_c = rep.c_count.iter().copied().max().unwrap_or(0);
            let ok = f.degree() == 60 && elapsed < Duration::from_secs(60) && max_c <= 10 && !rep.decompositions.is_empty();
            (ok, format!("n = {}, r = {}, m = {}, max #c = {max_c}, {elapsed:.2?}", f.degree(), rep.r, rep.m))
        }
        Err(e) => (false, e.to_string()),
    };
    emit(6, ok, "degree 60 with components of degree 2, 2, 3, 5", &detail);
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_7_minimal_and_frobenius() {
    let mut problems = Vec::new();
    let rep = run(&q("t^6 + 2*t^4 + t^2 + 1"), Stage::Minimal, &RunOptions::default()).unwrap();
    let got: BTreeSet<(String, String)> = rep.minimal.iter().cloned().collect();
    let want: BTreeSet<(String, String)> = [("t^2 + 1", "t^3 + t"), ("t^3 + 2*t^2 + t + 1", "t^2")]
        .iter()
        .map(|(g, h)| (q(g).to_string(), q(h).to_string()))
        .collect();
    if got != want {
        problems.push(format!("minimal decompositions {got:?}"));
    }
    if rep.minimal.iter().any(|(g, h)| !q(g).is_polynomial() || !q(h).is_polynomial()) {
        problems.push("non-polynomial component".into());
    }
    let f2 = Field::prime(2).unwrap();
    let rep = run(&parse_ratfun("t^4", &f2).unwrap(), Stage::Decompose, &RunOptions::default()).unwrap();
    if rep.decompositions != [["t^2", "t^2"]] || rep.frobenius_exponent != 2 {
        problems.push(format!("F_2 t^4 gives {:?} with s = {}", rep.decompositions, rep.frobenius_exponent));
    }
    let detail = if problems.is_empty() { "both minimal pairs; t^2 o t^2 with s = 2".to_string() } else { problems.join("; ") };
    emit(7, problems.is_empty(), "minimal polynomial decompositions and Frobenius peel", &detail);
    assert!(problems.is_empty(), "{detail}");
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_8_point_counts_stay_small() {
    // asymptotic cost is not measurable; check the observable proxy that the
    // number of evaluation points per partition stays bounded as n grows
    let s = suite();
    let mut by_n: BTreeMap<usize, usize> = BTreeMap::new();
    for i in &s.instances {
        let c = i.c_counts.iter().copied().max().unwrap_or(0);
        let e = by_n.entry(i.n).or_default();
        *e = (*e).max(c);
    }
    let rep = run(&degree_sixty(), Stage::Partitions, &RunOptions::default()).unwrap();
    by_n.insert(60, rep.c_count.iter().copied().max().unwrap_or(0));
    let max_c = by_n.values().copied().max().unwrap_or(0);
    let ok = max_c <= 10;
    let shown: Vec<String> = by_n.iter().map(|(n, c)| format!("n={n}:{c}")).collect();
    let detail = format!("max #c {max_c}; per degree {}", shown.join(" "));
    emit(8, ok, "qualitative only: #c stays O(1) across degrees", &detail);
    assert!(ok, "{detail}");
}
