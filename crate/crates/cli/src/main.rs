use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ratdec_core::report::{run, RunError, RunOptions, RunReport, Stage};
use ratdec_core::{parse_ratfun, Field};

/// Subfields and complete decompositions of univariate rational functions.
#[derive(Parser, Debug)]
#[command(name = "ratdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All non-equivalent complete decompositions
    Decompose(Args),
    /// The subfield lattice with a generator per subfield
    Subfields(Args),
    /// Principal partitions only
    Partitions(Args),
    /// Irreducible factors of the near-separate polynomial
    Factor(Args),
    /// Minimal decompositions of a polynomial
    Minimal(Args),
    /// Full pipeline cross-checked against the brute-force oracle
    OracleCheck(Args),
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Rational function in t, e.g. "(t^2+1)/t"
    input: String,
    /// q for the rationals or fp:<p> for a prime field
    #[arg(long, default_value = "q")]
    field: String,
    #[arg(long)]
    json: bool,
    /// Use the deterministic partition system instead of evaluation points
    #[arg(long)]
    det: bool,
    #[arg(long)]
    oracle_check: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_chains: Option<usize>,
    #[arg(long)]
    timings: bool,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "q" | "Q" => Ok(Field::Rational),
        _ => {
            let p = s
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| format!("unknown field {s:?}; expected q or fp:<p>"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (stage, args, force_oracle) = match cli.command {
        Command::Decompose(a) => (Stage::Decompose, a, false),
        Command::Subfields(a) => (Stage::Subfields, a, false),
        Command::Partitions(a) => (Stage::Partitions, a, false),
        Command::Factor(a) => (Stage::Factor, a, false),
        Command::Minimal(a) => (Stage::Minimal, a, false),
        Command::OracleCheck(a) => (Stage::Decompose, a, true),
    };
    let field = match parse_field(&args.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let f = match parse_ratfun(&args.input, &field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        deterministic: args.det,
        oracle_check: args.oracle_check || force_oracle,
        seed: args.seed,
        max_chains: args.max_chains,
        timings: args.timings,
    };
    match run(&f, stage, &opts) {
        Ok(rep) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                print!("{}", render(&rep, stage));
            }
            if rep.chains_truncated {
                eprintln!("warning: chain enumeration stopped at --max-chains");
            }
            ExitCode::SUCCESS
        }
        Err(e @ RunError::Input(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn render(rep: &RunReport, stage: Stage) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "f = {} over {}", rep.input, rep.field);
    let _ = writeln!(s, "n = {}, r = {}", rep.n, rep.r);
    if rep.frobenius_exponent > 0 {
        let _ = writeln!(s, "Frobenius peel: s = {}, working form {}", rep.frobenius_exponent, rep.normalized);
    }
    for (i, g) in rep.factors.iter().enumerate() {
        let _ = writeln!(s, "F_{} = {}", i + 1, g);
    }
    if let Some(p) = &rep.good_ideal {
        let _ = writeln!(s, "good ideal: {p} (d_p = {})", rep.dp.unwrap_or(1));
    }
    if !rep.c_count.is_empty() {
        let c: Vec<String> = rep.c_count.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "#c per i: {}", c.join(" "));
    }
    if !rep.partitions.is_empty() {
        let _ = writeln!(s, "m = {}", rep.m);
        for (k, p) in rep.partitions.iter().enumerate() {
            let blocks: Vec<String> = p
                .iter()
                .map(|b| format!("{{{}}}", b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let gen = rep.generators.get(k).map(|g| format!("  K({g})")).unwrap_or_default();
            let _ = writeln!(s, "P_{} = {{{}}}{}", k + 1, blocks.join(","), gen);
        }
    }
    if stage == Stage::Decompose {
        for (chain, d) in rep.chains.iter().zip(&rep.decompositions) {
            let c: Vec<String> = chain.iter().map(|k| format!("L_{}", k + 1)).collect();
            let _ = writeln!(s, "{}:  {}", c.join(" ⊆ "), d.join(" ∘ "));
        }
        if rep.chains.is_empty() {
            for d in &rep.decompositions {
                let _ = writeln!(s, "{}", d.join(" ∘ "));
            }
        }
    }
    for (g, h) in &rep.minimal {
        let _ = writeln!(s, "{g} ∘ {h}");
    }
    if let Some(o) = &rep.oracle {
        let _ = writeln!(s, "oracle: {o}");
    }
    if let Some(t) = &rep.times_ms {
        for (phase, ms) in t {
            let _ = writeln!(s, "time {phase}: {ms:.1} ms");
        }
    }
    s
}
