//! Driver for the `maass` binary: coefficient tables, verification suites and
//! the on-disk expansion cache.

pub mod cache;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use maass_core::exactalg::Prime;
use maass_core::qexp::{fourier_jacobi, jacobi_eisenstein, siegel2_expand};
use maass_core::report::VerificationReport;
use maass_core::satake::{build_aprime, phi_t};
use serde_json::{json, Value};

use cache::Cache;
use suites::{run_suite, Suite, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const MAX_BOUND: i64 = 40;
const MAX_NMAX: i64 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) | CliError::Io(_) => EXIT_INTERNAL,
        }
    }
}

/// Bad parameters that slipped past flag validation count as usage errors.
fn from_core(e: maass_core::Error) -> CliError {
    use maass_core::Error as E;
    match e {
        E::IndexOutOfRange(_)
        | E::InvalidArgument(_)
        | E::NonPositiveIndex
        | E::NotADiscriminant(_)
        | E::WeightOutOfRange(_)
        | E::UnsupportedDegree => CliError::Usage(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "maass", version, about = "Exact Maass-relation and Euler-factor verification")]
pub struct Cli {
    /// Cache directory (overrides MAASS_CACHE_DIR; default ./.maass-cache)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Report measured runtimes instead of 0 (output is then not byte-stable)
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a coefficient table or symbolic object as JSON
    Compute {
        #[command(subcommand)]
        target: Target,
    },
    /// Run a verification suite, one JSON report per line
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum Target {
    /// Degree-2 Siegel Eisenstein coefficients with n, m <= bound
    Siegel2 {
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        bound: i64,
    },
    /// Fourier-Jacobi coefficient of index m of the Siegel Eisenstein series
    FourierJacobi {
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        index: i64,
        #[arg(long)]
        nmax: i64,
    },
    /// Jacobi Eisenstein series e_{k,m}
    JacobiEis {
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        index: i64,
        #[arg(long)]
        nmax: i64,
    },
    /// Satake image of T_{l,n-l}(p^2)
    SatakePoly {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        n: i64,
        /// A prime, or `q` for the formal prime p = q^2
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
    },
    /// The matrix A' in the variable u
    APrime {
        #[arg(long)]
        n: i64,
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<i64>>,
    #[arg(long)]
    pub nmax: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also run the degree-5 Euler factor identity in the lfun suite
    #[arg(long)]
    pub theorem3_n3: bool,
    /// Append a synthetic failing check (tests the exit-code path)
    #[arg(long, hide = true)]
    pub inject_failure: bool,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    if s == "q" || s == "formal" {
        return Ok(Prime::Formal);
    }
    let p: u64 = s.parse().map_err(|_| format!("`{s}` is neither a prime nor `q`"))?;
    if !maass_core::arith::is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    Ok(Prime::Numeric(p))
}

fn check_weight(k: i64) -> Result<(), CliError> {
    if k < 4 || k % 2 != 0 {
        return Err(CliError::Usage(format!("--weight {k} must be even and at least 4")));
    }
    Ok(())
}

fn check_range(flag: &str, v: i64, lo: i64, hi: i64) -> Result<(), CliError> {
    if !(lo..=hi).contains(&v) {
        return Err(CliError::Usage(format!("--{flag} {v} outside {lo}..={hi}")));
    }
    Ok(())
}

fn cached_json(cache: &Cache, key: &str, compute: impl FnOnce() -> maass_core::Result<Value>) -> Result<Value, CliError> {
    let payload = cache.get_or_compute(key, || compute().map(|v| v.to_string()).map_err(from_core))?;
    serde_json::from_str(&payload).map_err(|e| CliError::Internal(format!("cache payload for {key}: {e}")))
}

pub fn compute(target: &Target, cache: &Cache) -> Result<Value, CliError> {
    match *target {
        Target::Siegel2 { weight, bound } => {
            check_weight(weight)?;
            check_range("bound", bound, 0, MAX_BOUND)?;
            cached_json(cache, &format!("siegel2/k={weight}/B={bound}"), || Ok(siegel2_expand(weight, bound)?.to_json()))
        }
        Target::FourierJacobi { weight, index, nmax } => {
            check_weight(weight)?;
            check_range("index", index, 0, MAX_NMAX)?;
            check_range("nmax", nmax, 0, MAX_NMAX)?;
            cached_json(cache, &format!("jacobi/k={weight}/m={index}/N={nmax}"), || {
                Ok(fourier_jacobi(weight, index, nmax)?.to_json())
            })
        }
        Target::JacobiEis { weight, index, nmax } => {
            check_weight(weight)?;
            check_range("index", index, 1, MAX_NMAX)?;
            check_range("nmax", nmax, 0, MAX_NMAX)?;
            Ok(jacobi_eisenstein(weight, index, nmax).map_err(from_core)?.to_json())
        }
        Target::SatakePoly { l, n, prime } => {
            check_range("n", n, 1, 6)?;
            check_range("l", l, 0, n)?;
            Ok(phi_t(l, n, prime).map_err(from_core)?.to_json())
        }
        Target::APrime { n, prime } => {
            check_range("n", n, 1, 6)?;
            Ok(build_aprime(n, prime).map_err(from_core)?.to_json())
        }
    }
}

fn report_line(r: &VerificationReport, timings: bool) -> String {
    let mut v = r.to_json();
    if !timings {
        v["runtime_ms"] = json!(0);
    }
    v.to_string()
}

fn summary(suite: Suite, reports: &[VerificationReport], timings: bool) -> Value {
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
    let first = failed.first().map(|r| serde_json::from_str::<Value>(&report_line(r, timings)).expect("own output"));
    json!({
        "suite": suite.name(),
        "total": reports.len(),
        "passed": reports.len() - failed.len(),
        "failed": failed.len(),
        "first_failure": first,
    })
}

pub fn verify(args: &VerifyArgs, cache: &Cache, timings: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = SuiteConfig {
        weights: args.weights.clone(),
        indices: args.indices.clone(),
        primes: args.primes.clone(),
        n_max: args.nmax,
        seed: args.seed,
        theorem3_n3: args.theorem3_n3,
    };
    let reports = run_suite(args.suite, &cfg, cache, args.inject_failure)?;
    for r in &reports {
        writeln!(out, "{}", report_line(r, timings))?;
    }
    let s = summary(args.suite, &reports, timings);
    writeln!(out, "{s}")?;
    Ok(if s["failed"] == 0 { EXIT_PASS } else { EXIT_FAIL })
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let cache = Cache::resolve(cli.cache_dir.clone(), cli.no_cache);
    let result = match &cli.command {
        Command::Compute { target } => compute(target, &cache).and_then(|v| {
            writeln!(out, "{v}")?;
            Ok(EXIT_PASS)
        }),
        Command::Verify(args) => verify(args, &cache, cli.timings, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
