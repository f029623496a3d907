//! `rdu`: factorize, verify and search from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error or
//! unsupported input, 3 ring class unavailable, 4 hypothesis or integrity
//! failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use rdu_core::exec::{with_jobs, Execution};
use rdu_core::factorizer::{
    extract_diag_difference, extract_offdiag, verify_factorization, FactorError, RingClass,
};
use rdu_core::matgroup::GlElement;
use rdu_core::ring::Ring;
use rdu_core::search::{optimal_rdu_bound, GroupTable};
use rdu_core::wire;

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNAVAILABLE: u8 = 3;
const EXIT_HYPOTHESIS: u8 = 4;

#[derive(Parser)]
#[command(name = "rdu", version, about = "Bounded conjugate factorizations of elementary transvections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write t_kl(a sigma_ij b), or t_kl(a (c sigma_ii - sigma_jj c) b) with
    /// --diag, as a product of elementary conjugates of sigma and sigma^-1.
    Factorize(FactorizeArgs),
    /// Check a factorization by multiplying out every factor.
    Verify(VerifyArgs),
    /// Exhaustively compute the optimal bound for GL_3(GF(q)).
    Search(SearchArgs),
}

#[derive(Args)]
struct FactorizeArgs {
    /// Ring spec such as Z, Z/12, GF(3), M2(GF(2)), Z/4xGF(3).
    #[arg(long)]
    ring: Option<String>,
    /// commutative, vnr, banach, sr1, sr-mid, euclidean[-m], strong-euclidean.
    #[arg(long)]
    class: String,
    /// Matrix size; checked against the matrix when given.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, default_value = "1")]
    b: String,
    /// Extract the diagonal difference c sigma_ii - sigma_jj c.
    #[arg(long)]
    diag: bool,
    #[arg(long, default_value = "1")]
    c: String,
    /// Matrix JSON (inline, a path, or - for stdin): {"ring","n","entries"}
    /// or a bare array of rows together with --ring.
    #[arg(long)]
    matrix: String,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Render conjugators as t_ij(x) strings.
    #[arg(long)]
    human: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Factorization JSON (inline, a path, or -), as printed by factorize.
    #[arg(long)]
    factorization: String,
    /// Matrix JSON; defaults to the "sigma" field of the factorization.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    /// Worker threads; 0 or unset uses every core.
    #[arg(long, env = "RDU_JOBS")]
    jobs: Option<usize>,
    /// Group table cache file, created when missing.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Run on one thread regardless of --jobs.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn parse(message: impl std::fmt::Display) -> Failure {
        Failure::new(EXIT_PARSE, format!("parse error: {message}"))
    }
}

impl From<FactorError> for Failure {
    fn from(e: FactorError) -> Failure {
        let code = match &e {
            FactorError::ClassUnavailable { .. } => EXIT_UNAVAILABLE,
            FactorError::Hypothesis(_) | FactorError::Integrity(_) => EXIT_HYPOTHESIS,
            FactorError::Ring(_) | FactorError::Matrix(_) => EXIT_PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

fn read_json_arg(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::parse)?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| Failure::parse(format!("{arg}: {e}")))
}

fn emit(value: &Value, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    match output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))
        }
    }
}

fn one_based(name: &str, v: usize, n: usize) -> Result<usize, Failure> {
    if v == 0 || v > n {
        return Err(Failure::parse(format!("--{name} = {v} is outside 1..{n}")));
    }
    Ok(v - 1)
}

fn factorize(args: FactorizeArgs) -> Result<(), Failure> {
    let ring: Option<Ring> = args.ring.as_deref().map(str::parse).transpose().map_err(Failure::parse)?;
    let class: RingClass = args.class.parse().map_err(Failure::parse)?;
    let m = wire::matrix_from_str(&read_json_arg(&args.matrix)?, ring.as_ref()).map_err(Failure::parse)?;
    let n = m.n();
    if let Some(declared) = args.n {
        if declared != n {
            return Err(Failure::parse(format!("--n {declared} but the matrix is {n} x {n}")));
        }
    }
    let ring = m.ring().clone();
    let sigma = GlElement::from_matrix(m).map_err(|e| Failure::parse(format!("sigma: {e}")))?;
    let [i, j, k, l] = [("i", args.i), ("j", args.j), ("k", args.k), ("l", args.l)]
        .map(|(name, v)| one_based(name, v, n));
    let (i, j, k, l) = (i?, j?, k?, l?);
    let elem = |name: &str, lit: &str| ring.parse_element(lit).map_err(|e| Failure::parse(format!("--{name}: {e}")));
    let (a, b) = (elem("a", &args.a)?, elem("b", &args.b)?);
    let f = if args.diag {
        let c = elem("c", &args.c)?;
        extract_diag_difference(&sigma, class, i, j, k, l, &a, &b, &c)?
    } else {
        extract_offdiag(&sigma, class, i, j, k, l, &a, &b)?
    };
    let report = verify_factorization(&f, &sigma);
    if !report.passed() {
        return Err(Failure::new(EXIT_HYPOTHESIS, format!("in-process verification failed: {report:?}")));
    }
    let mut v = wire::factorization_to_json(&f, args.human);
    v["sigma"] = wire::matrix_to_json(sigma.mat());
    emit(&v, args.output.as_ref())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let v: Value = serde_json::from_str(&read_json_arg(&args.factorization)?).map_err(Failure::parse)?;
    let f = wire::factorization_from_json(&v).map_err(Failure::parse)?;
    let ring = f.product.ring().clone();
    let m = match &args.sigma {
        Some(arg) => wire::matrix_from_str(&read_json_arg(arg)?, Some(&ring)),
        None => match v.get("sigma") {
            Some(s) => wire::matrix_from_json(s, Some(&ring)),
            None => return Err(Failure::parse("no --sigma and no \"sigma\" field")),
        },
    }
    .map_err(Failure::parse)?;
    if m.n() != f.product.n() {
        return Err(Failure::parse(format!("sigma is {0} x {0} but the factorization has n = {1}", m.n(), f.product.n())));
    }
    let sigma = GlElement::from_matrix(m).map_err(|e| Failure::parse(format!("sigma: {e}")))?;
    let report = verify_factorization(&f, &sigma);
    emit(&wire::report_to_json(&report), args.output.as_ref())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, "verification failed"))
    }
}

fn search(args: SearchArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let table = match &args.cache {
        Some(path) => GroupTable::load_or_build(args.n, args.q, path),
        None => GroupTable::enumerate(args.n, args.q),
    }
    .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let jobs = args.jobs.filter(|&j| j > 0);
    let report = with_jobs(jobs, || optimal_rdu_bound(&table, exec));
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["elapsed_seconds"] = serde_json::json!(start.elapsed().as_secs_f64());
    emit(&v, args.output.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Factorize(a) => factorize(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rdu: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
