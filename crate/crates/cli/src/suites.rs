use clap::ValueEnum;
use maass_core::arith::{coset_count, coset_count_bruteforce, gauss_sum, gauss_sum_bruteforce, is_prime, CosetKind};
use maass_core::exactalg::{is_weyl_invariant, PolyMatrix, Prime};
use maass_core::lfun::{verify_corollary4, verify_eisenstein_eigenvalue, verify_matrix_identities, verify_theorem3};
use maass_core::qexp::JacobiExpansion;
use maass_core::relations::{verify_sum_eu, verify_theorem1_n1_with, verify_wtv};
use maass_core::report::{run_check, VerificationReport, Witness};
use maass_core::satake::{build_b, phi_t};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::cache::Cache;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem1,
    SumEu,
    Gauss,
    Counts,
    Satake,
    Wtv,
    Lfun,
    MatrixIdentities,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::SumEu => "sum-eu",
            Suite::Gauss => "gauss",
            Suite::Counts => "counts",
            Suite::Satake => "satake",
            Suite::Wtv => "wtv",
            Suite::Lfun => "lfun",
            Suite::MatrixIdentities => "matrix-identities",
            Suite::All => "all",
        }
    }

    const CONCRETE: [Suite; 8] = [
        Suite::Gauss,
        Suite::Counts,
        Suite::Satake,
        Suite::SumEu,
        Suite::Theorem1,
        Suite::Wtv,
        Suite::MatrixIdentities,
        Suite::Lfun,
    ];
}

/// Command-line overrides; `None` means the suite's own default.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub weights: Option<Vec<i64>>,
    pub indices: Option<Vec<i64>>,
    pub primes: Option<Vec<i64>>,
    pub n_max: Option<i64>,
    pub seed: u64,
    pub theorem3_n3: bool,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        for &k in self.weights.iter().flatten() {
            if k < 4 || k % 2 != 0 {
                return Err(CliError::Usage(format!("weight {k} must be even and at least 4")));
            }
        }
        for &p in self.primes.iter().flatten() {
            if p < 2 || !is_prime(p as u64) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
        }
        for &m in self.indices.iter().flatten() {
            if m < 1 {
                return Err(CliError::Usage(format!("index {m} must be positive")));
            }
        }
        if let Some(n) = self.n_max {
            if !(2..=64).contains(&n) {
                return Err(CliError::Usage(format!("--nmax {n} outside 2..=64")));
            }
        }
        Ok(())
    }

    fn weights(&self, default: &[i64]) -> Vec<i64> {
        self.weights.clone().unwrap_or_else(|| default.to_vec())
    }

    fn primes(&self, default: &[i64]) -> Vec<i64> {
        self.primes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn indices(&self, default: impl IntoIterator<Item = i64>) -> Vec<i64> {
        self.indices.clone().unwrap_or_else(|| default.into_iter().collect())
    }
}

type Job = Box<dyn Fn() -> maass_core::Result<VerificationReport> + Send + Sync>;

fn job(f: impl Fn() -> maass_core::Result<VerificationReport> + Send + Sync + 'static) -> Job {
    Box::new(f)
}

fn cached_fourier_jacobi(cache: &Cache, k: i64, m: i64, n: i64) -> maass_core::Result<JacobiExpansion> {
    let key = format!("jacobi/k={k}/m={m}/N={n}");
    let mut core_err = None;
    let payload = cache.get_or_compute(&key, || match maass_core::qexp::fourier_jacobi(k, m, n) {
        Ok(e) => Ok(e.to_json().to_string()),
        Err(e) => {
            let msg = e.to_string();
            core_err = Some(e);
            Err(CliError::Internal(msg))
        }
    });
    let payload = match (payload, core_err) {
        (Ok(p), _) => p,
        (Err(_), Some(e)) => return Err(e),
        (Err(e), None) => return Err(maass_core::Error::Invariant(e.to_string())),
    };
    let v = serde_json::from_str(&payload).map_err(|e| maass_core::Error::Parse(e.to_string()))?;
    JacobiExpansion::from_json(&v)
}

fn maass_relation_jobs(cfg: &SuiteConfig, cache: &Cache) -> Vec<Job> {
    let n_max = cfg.n_max.unwrap_or(4);
    let mut jobs = Vec::new();
    for k in cfg.weights(&[4, 6]) {
        for m in cfg.indices([1, 2, 3, 4, 8, 9]) {
            for p in cfg.primes(&[2, 3]) {
                let cache = cache.clone();
                jobs.push(job(move || {
                    verify_theorem1_n1_with(k, m, p, n_max, &|k, m, n| cached_fourier_jacobi(&cache, k, m, n))
                }));
            }
        }
    }
    jobs
}

fn sum_eu_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for k in cfg.weights(&[4, 6, 8]) {
        for p in cfg.primes(&[2, 3, 5]) {
            for m in cfg.indices(1..=72) {
                jobs.push(job(move || verify_sum_eu(k, m, p)));
            }
        }
    }
    jobs
}

/// Draws `(m, λ)` in the requested class: `mλ ≢ 0 mod p` or `mλ ≡ 0 mod p`.
fn gauss_sample(rng: &mut ChaCha8Rng, p: i64, n: usize, unit: bool) -> (i64, Vec<i64>) {
    if unit {
        let m = rng.gen_range(1..p) + p * rng.gen_range(0..4);
        let mut lam: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3 * p)).collect();
        let slot = rng.gen_range(0..n);
        lam[slot] = rng.gen_range(1..p) + p * rng.gen_range(0..3);
        (m, lam)
    } else if rng.gen_bool(0.5) {
        (p * rng.gen_range(1..4), (0..n).map(|_| rng.gen_range(0..3 * p)).collect())
    } else {
        (rng.gen_range(1..5 * p), (0..n).map(|_| p * rng.gen_range(0..3)).collect())
    }
}

fn gauss_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let mut idx = 0u64;
    for p in cfg.primes(&[2, 3]) {
        for n in 1..=3usize {
            // j > n is the empty sum; kept so every n sees the same rank range
            for j in 0..=3usize {
                for unit in [false, true] {
                    let seed = cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(idx);
                    idx += 1;
                    jobs.push(job(move || {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        let (m, lam) = gauss_sample(&mut rng, p, n, unit);
                        let class = if unit { "unit" } else { "degenerate" };
                        let params = json!({"p": p, "n": n, "j": j, "class": class, "m": m, "lambda": lam});
                        run_check("gauss", params, || {
                            let closed = gauss_sum(p as u64, n as i64, j as i64, m, unit)?;
                            let brute = gauss_sum_bruteforce(p as u64, n, j, m, &lam)?;
                            Ok((closed != brute).then(|| Witness { key: "G".into(), lhs: closed.to_string(), rhs: brute.to_string() }))
                        })
                    }));
                }
            }
        }
    }
    jobs
}

fn counts_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for p in cfg.primes(&[2, 3]) {
        for n in 1..=2i64 {
            for j in 0..=n {
                for i in 0..=j {
                    for kind in CosetKind::ALL {
                        jobs.push(job(move || {
                            let params = json!({"p": p, "n": n, "i": i, "j": j, "kind": kind.name()});
                            run_check("counts", params, || {
                                let closed = coset_count(kind, p as u64, n, i, j)?;
                                let brute = coset_count_bruteforce(kind, p as u64, n, i, j)?;
                                Ok((closed != brute).then(|| Witness { key: kind.name().into(), lhs: closed.to_string(), rhs: brute.to_string() }))
                            })
                        }));
                    }
                }
            }
        }
    }
    jobs
}

fn satake_primes(cfg: &SuiteConfig) -> Vec<Prime> {
    let mut ps: Vec<Prime> = cfg.primes(&[2, 3]).into_iter().map(|p| Prime::Numeric(p as u64)).collect();
    ps.push(Prime::Formal);
    ps
}

fn satake_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for p in satake_primes(cfg) {
        for n in 1..=4i64 {
            if n >= 2 {
                jobs.push(job(move || {
                    run_check("satake-row", json!({"n": n, "p": p.to_string()}), || {
                        let prev = (0..n).map(|t| phi_t(t, n - 1, p)).collect::<maass_core::Result<Vec<_>>>()?;
                        let row = PolyMatrix::new(1, n as usize, prev)?.mul(&build_b(n, p)?)?.row(0);
                        for (j, got) in row.iter().enumerate() {
                            let want = phi_t(j as i64, n, p)?;
                            if *got != want {
                                return Ok(Some(Witness { key: format!("j={j}"), lhs: got.to_string(), rhs: want.to_string() }));
                            }
                        }
                        Ok(None)
                    })
                }));
            }
            for l in 0..=n {
                jobs.push(job(move || {
                    run_check("satake-weyl", json!({"n": n, "l": l, "p": p.to_string()}), || {
                        let f = phi_t(l, n, p)?;
                        let degree = f.degree_range("X0");
                        if degree != Some((2, 2)) {
                            return Ok(Some(Witness { key: "X0-degree".into(), lhs: format!("{degree:?}"), rhs: "(2, 2)".into() }));
                        }
                        Ok((!is_weyl_invariant(&f, n as usize)?)
                            .then(|| Witness { key: "weyl".into(), lhs: f.to_string(), rhs: "invariant".into() }))
                    })
                }));
            }
        }
    }
    jobs
}

fn wtv_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let n_max = cfg.n_max.unwrap_or(3);
    let mut jobs = Vec::new();
    for k in cfg.weights(&[4, 6]) {
        for m in cfg.indices([1, 2, 3]) {
            for p in cfg.primes(&[2, 3]) {
                jobs.push(job(move || verify_wtv(k, m, p, n_max)));
            }
        }
    }
    jobs
}

fn lfun_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for n in [2i64, 3] {
        for k in cfg.weights(&[10, 12]) {
            jobs.push(job(move || verify_corollary4(n, k)));
        }
    }
    let mut t3_degrees = vec![2i64];
    if cfg.theorem3_n3 {
        t3_degrees.push(3);
    }
    for &n in &t3_degrees {
        for k in cfg.weights(&[4, 10]) {
            jobs.push(job(move || verify_theorem3(n, k, Prime::Formal)));
            for p in cfg.primes(&[2, 3]) {
                jobs.push(job(move || verify_theorem3(n, k, Prime::Numeric(p as u64))));
            }
        }
    }
    for k in cfg.weights(&[4, 6]) {
        for p in cfg.primes(&[2, 3]) {
            jobs.push(job(move || verify_eisenstein_eigenvalue(k, p as u64)));
        }
    }
    jobs
}

fn matrix_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let ks = cfg.weights(&[4, 6, 8, 10]);
    let ps: Vec<u64> = cfg.primes(&[2, 3]).into_iter().map(|p| p as u64).collect();
    [2i64, 3]
        .into_iter()
        .map(|n| {
            let (ks, ps) = (ks.clone(), ps.clone());
            job(move || verify_matrix_identities(n, &ks, &ps))
        })
        .collect()
}

fn synthetic_failure() -> Job {
    job(|| {
        run_check("synthetic", json!({"injected": true}), || {
            Ok(Some(Witness { key: "1 = 2".into(), lhs: "1/1".into(), rhs: "2/1".into() }))
        })
    })
}

fn jobs_for(suite: Suite, cfg: &SuiteConfig, cache: &Cache) -> Vec<Job> {
    match suite {
        Suite::Theorem1 => maass_relation_jobs(cfg, cache),
        Suite::SumEu => sum_eu_jobs(cfg),
        Suite::Gauss => gauss_jobs(cfg),
        Suite::Counts => counts_jobs(cfg),
        Suite::Satake => satake_jobs(cfg),
        Suite::Wtv => wtv_jobs(cfg),
        Suite::Lfun => lfun_jobs(cfg),
        Suite::MatrixIdentities => matrix_jobs(cfg),
        Suite::All => Suite::CONCRETE.iter().flat_map(|&s| jobs_for(s, cfg, cache)).collect(),
    }
}

/// Runs every check of `suite` on the thread pool; reports come back in job order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, cache: &Cache, inject_failure: bool) -> Result<Vec<VerificationReport>, CliError> {
    cfg.validate()?;
    let mut jobs = jobs_for(suite, cfg, cache);
    if inject_failure {
        jobs.push(synthetic_failure());
    }
    let results: Vec<maass_core::Result<VerificationReport>> = jobs.par_iter().map(|j| j()).collect();
    results.into_iter().map(|r| r.map_err(|e| CliError::Internal(e.to_string()))).collect()
}
