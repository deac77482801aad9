//! End-to-end pipeline and its serializable report.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::decomp::{complete_decompositions, minimal_decompositions_poly, DecompError};
use crate::factor::{factor_nabla, FactorError, FactorSet};
use crate::lattice::{close_under_join, Partition, SubfieldLattice};
use crate::oracle::{self, OracleError};
use crate::poly::RatFun;
use crate::ratfun::{prepare, RatFunError};
use crate::subfields::{self, find_good_ideal, SubfieldsError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("factorization failed: {0}")]
    Factor(#[from] FactorError),
    #[error("subfield computation failed: {0}")]
    Subfields(#[from] SubfieldsError),
    #[error("decomposition failed: {0}")]
    Decomp(#[from] DecompError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("oracle disagrees: {0}")]
    OracleMismatch(String),
}

impl From<RatFunError> for RunError {
    fn from(e: RatFunError) -> Self {
        RunError::Input(e.to_string())
    }
}

/// How far to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Factor,
    Partitions,
    Subfields,
    Decompose,
    Minimal,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub deterministic: bool,
    pub oracle_check: bool,
    pub seed: u64,
    pub max_chains: Option<usize>,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { deterministic: false, oracle_check: false, seed: 0, max_chains: None, timings: false }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub input: String,
    pub field: String,
    /// Generator form actually factored (after removing Frobenius powers).
    pub normalized: String,
    pub frobenius_exponent: u32,
    pub n: usize,
    pub r: usize,
    pub good_ideal: Option<String>,
    /// Degree of the good ideal times the degree of any point extension.
    pub dp: Option<usize>,
    /// Points used per principal partition (empty on the deterministic path).
    pub c_count: Vec<usize>,
    pub factors: Vec<String>,
    /// One-based blocks; principal partitions first.
    pub partitions: Vec<Vec<Vec<usize>>>,
    pub principal_index: Vec<usize>,
    pub m: usize,
    pub hasse_edges: Vec<(usize, usize)>,
    pub generators: Vec<String>,
    pub chains: Vec<Vec<usize>>,
    pub chains_truncated: bool,
    pub decompositions: Vec<Vec<String>>,
    /// `(left, right)` pairs from the `minimal` command.
    pub minimal: Vec<(String, String)>,
    pub oracle: Option<String>,
    pub seed: u64,
    pub times_ms: Option<BTreeMap<String, f64>>,
}

fn one_based(p: &Partition) -> Vec<Vec<usize>> {
    p.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
}

struct Clock {
    enabled: bool,
    last: Instant,
    times: BTreeMap<String, f64>,
}

impl Clock {
    fn lap(&mut self, phase: &str) {
        if self.enabled {
            let now = Instant::now();
            *self.times.entry(phase.to_string()).or_default() += (now - self.last).as_secs_f64() * 1e3;
            self.last = now;
        }
    }
}

/// Runs the pipeline on `f` up to `stage`.
pub fn run(f: &RatFun, stage: Stage, opts: &RunOptions) -> Result<RunReport, RunError> {
    let mut clock = Clock { enabled: opts.timings, last: Instant::now(), times: BTreeMap::new() };
    let input = prepare(f)?;
    let mut rep = RunReport {
        input: f.to_string(),
        field: f.field().to_string(),
        normalized: input.working.to_string(),
        frobenius_exponent: input.frobenius_exponent,
        n: f.degree(),
        seed: opts.seed,
        ..Default::default()
    };
    if stage == Stage::Minimal && !f.is_polynomial() {
        return Err(RunError::Input(format!("{f} is not a polynomial")));
    }
    clock.lap("prepare");

    if input.working.degree() == 1 {
        // nothing to factor: only the Frobenius tail, if any
        rep.r = 1;
        if matches!(stage, Stage::Decompose) {
            let (decs, _) = complete_decompositions(&input, None, None, opts.max_chains)?;
            rep.decompositions = decs.iter().map(|d| d.components.iter().map(|c| c.to_string()).collect()).collect();
        }
        clock.lap("decompose");
        rep.times_ms = opts.timings.then_some(clock.times);
        return Ok(rep);
    }

    let factors = factor_nabla(&input.working, opts.seed)?;
    factors.check()?;
    rep.r = factors.r();
    rep.factors = factors.monic_factors.iter().map(|g| g.to_string()).collect();
    clock.lap("factor");
    if stage == Stage::Factor {
        rep.times_ms = opts.timings.then_some(clock.times);
        return Ok(rep);
    }

    let principals = if opts.deterministic {
        let ps = subfields::partitions_deterministic(&factors)?;
        clock.lap("partitions");
        ps
    } else {
        let ideal = find_good_ideal(&input.working)?;
        rep.good_ideal = Some(ideal.modulus().to_string());
        clock.lap("good_ideal");
        let out = subfields::partitions(&factors, &ideal)?;
        rep.dp = Some(ideal.degree() * out.point_degree);
        rep.c_count = out.c_counts.clone();
        clock.lap("partitions");
        out.partitions
    };
    if stage == Stage::Partitions {
        rep.partitions = principals.iter().map(one_based).collect();
        rep.m = principals.len();
        rep.times_ms = opts.timings.then_some(clock.times);
        return Ok(rep);
    }
    if stage == Stage::Minimal {
        let pairs = minimal_decompositions_poly(&input, &principals, &factors)?;
        rep.minimal = pairs.iter().map(|(g, h)| (g.to_string(), h.to_string())).collect();
        clock.lap("minimal");
        rep.times_ms = opts.timings.then_some(clock.times);
        return Ok(rep);
    }

    let lattice = close_under_join(&principals);
    rep.partitions = lattice.partitions.iter().map(one_based).collect();
    rep.principal_index = lattice.principal_index.clone();
    rep.m = lattice.len();
    rep.hasse_edges = lattice.hasse_edges.clone();
    clock.lap("lattice");

    if stage == Stage::Decompose {
        let (decs, truncated) = complete_decompositions(&input, Some(&lattice), Some(&factors), opts.max_chains)?;
        rep.chains = decs.iter().map(|d| d.chain.clone()).collect();
        rep.chains_truncated = truncated;
        rep.decompositions = decs.iter().map(|d| d.components.iter().map(|c| c.to_string()).collect()).collect();
        clock.lap("decompose");
    }
    rep.generators = lattice_generators(&lattice, &factors, &input.working)?;
    clock.lap("generators");

    if opts.oracle_check {
        let verdict = oracle_check(&input, &factors, &lattice, &rep, stage == Stage::Decompose && !rep.chains_truncated)?;
        rep.oracle = Some(verdict);
        clock.lap("oracle");
    }
    rep.times_ms = opts.timings.then_some(clock.times);
    Ok(rep)
}

fn lattice_generators(lattice: &SubfieldLattice, factors: &FactorSet, working: &RatFun) -> Result<Vec<String>, RunError> {
    lattice
        .partitions
        .iter()
        .map(|p| {
            Ok(if p.is_single_block() {
                working.to_string()
            } else if p.is_discrete() {
                RatFun::t(factors.field()).to_string()
            } else {
                crate::decomp::luroth_generator(p, factors)?.to_string()
            })
        })
        .collect()
}

fn oracle_check(
    input: &crate::ratfun::PreparedInput,
    factors: &FactorSet,
    lattice: &SubfieldLattice,
    rep: &RunReport,
    compare_decompositions: bool,
) -> Result<String, RunError> {
    let report = oracle::oracle_subfields(factors, oracle::DEFAULT_CAP)?;
    let r = factors.r();
    let ours: BTreeSet<Partition> = lattice.partitions.iter().cloned().collect();
    let theirs: BTreeSet<Partition> = report
        .partitions
        .iter()
        .map(|b| Partition::new(r, b.clone()).map_err(|e| RunError::OracleMismatch(e.to_string())))
        .collect::<Result<_, _>>()?;
    if ours != theirs {
        let show = |s: &BTreeSet<Partition>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        return Err(RunError::OracleMismatch(format!("partitions [{}] vs oracle [{}]", show(&ours), show(&theirs))));
    }
    if compare_decompositions {
        let ours: BTreeSet<Vec<String>> = rep.decompositions.iter().cloned().collect();
        let theirs: BTreeSet<Vec<String>> = oracle::oracle_decompositions(input, &report)?
            .iter()
            .map(|d| d.iter().map(|c| c.to_string()).collect())
            .collect();
        if ours != theirs {
            return Err(RunError::OracleMismatch(format!("decompositions {ours:?} vs oracle {theirs:?}")));
        }
    }
    Ok("agree".to_string())
}
