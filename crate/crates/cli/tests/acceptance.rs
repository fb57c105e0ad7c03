//! Acceptance run: one line per criterion, exact equality throughout.
//! `cargo test -p maass-cli --test acceptance` (add `--release` for timings).

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use maass_core::arith::{coset_count, coset_count_bruteforce, gauss_sum, gauss_sum_bruteforce, CosetKind};
use maass_core::exactalg::{Prime, Rational};
use maass_core::lfun::{verify_corollary4, verify_eisenstein_eigenvalue, verify_matrix_identities, verify_theorem3};
use maass_core::qexp::{elliptic_eisenstein, hecke_t_elliptic, siegel2_expand};
use maass_core::relations::{verify_sum_eu, verify_theorem1_n1, verify_wtv};
use maass_core::report::VerificationReport;
use maass_cli::cache::Cache;
use maass_cli::suites::{run_suite, Suite, SuiteConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn all_pass(reports: impl IntoIterator<Item = maass_core::Result<VerificationReport>>) -> Outcome {
    let mut n = 0;
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(r.to_json().to_string());
        }
        n += 1;
    }
    Ok(format!("{n} checks"))
}

fn sigma3(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

fn restriction_factorization() -> Outcome {
    // E_4 = 1 − (2k/B_k) Σ σ_3(n) qⁿ with B_4 = −1/30
    let b4 = Rational::frac(-1, 30);
    let lead = Rational::from(-8) / b4;
    let e4: Vec<Rational> = (0..=3).map(|n| if n == 0 { Rational::one() } else { &lead * &Rational::from(sigma3(n)) }).collect();
    let listed: Vec<Rational> = [1, 240, 2160, 6720].into_iter().map(Rational::from).collect();
    if e4 != listed {
        return Err(format!("E_4 oracle {e4:?}"));
    }
    let sieg = siegel2_expand(4, 3).map_err(|e| e.to_string())?;
    for n in 0..=3i64 {
        for m in 0..=3i64 {
            let r_max = (4.0 * (n * m) as f64).sqrt() as i64 + 1;
            let sum: Rational = (-r_max..=r_max).filter_map(|r| sieg.get((n, r, m)).cloned()).sum();
            let want = &e4[n as usize] * &e4[m as usize];
            if sum != want {
                return Err(format!("(n,m)=({n},{m}): {sum} vs {want}"));
            }
        }
    }
    Ok("16 restrictions".into())
}

fn maass_relation() -> Outcome {
    let mut jobs = Vec::new();
    for k in [4, 6] {
        for m in [1, 2, 3, 4, 8, 9] {
            for p in [2, 3] {
                jobs.push((k, m, p));
            }
        }
    }
    all_pass(jobs.into_iter().map(|(k, m, p)| verify_theorem1_n1(k, m, p, 4)))
}

fn sum_eu() -> Outcome {
    let mut out = Vec::new();
    for k in [4, 6, 8] {
        for p in [2, 3, 5] {
            for m in 1..=72 {
                out.push(verify_sum_eu(k, m, p));
            }
        }
    }
    all_pass(out)
}

fn gauss() -> Outcome {
    let mut n_checks = 0;
    for p in [2u64, 3] {
        let pi = p as i64;
        for n in 1..=3usize {
            // degenerate class: λ ≡ 0, and m ≡ 0 with λ a unit vector; unit class: m, λ₀ units
            let zero = vec![pi; n];
            let mut unit = vec![0; n];
            unit[0] = 1;
            let mut mixed = vec![pi; n];
            mixed[n - 1] = pi + 1;
            for j in 0..=n {
                let closed_deg = gauss_sum(p, n as i64, j as i64, 1, false).map_err(|e| e.to_string())?;
                let closed_unit = gauss_sum(p, n as i64, j as i64, 1, true).map_err(|e| e.to_string())?;
                let cases = [(1, &zero, &closed_deg), (pi, &unit, &closed_deg), (1, &unit, &closed_unit), (pi - 1, &mixed, &closed_unit)];
                for (m, lam, want) in cases {
                    let brute = gauss_sum_bruteforce(p, n, j, m, lam).map_err(|e| e.to_string())?;
                    if &brute != want {
                        return Err(format!("p={p} n={n} j={j} m={m} λ={lam:?}: {brute} vs {want}"));
                    }
                    n_checks += 1;
                }
            }
        }
    }
    Ok(format!("{n_checks} checks"))
}

fn counts() -> Outcome {
    let mut n_checks = 0;
    for p in [2u64, 3] {
        for j in 0..=2 {
            for i in 0..=j {
                for kind in CosetKind::ALL {
                    let closed = coset_count(kind, p, 2, i, j).map_err(|e| e.to_string())?;
                    let brute = coset_count_bruteforce(kind, p, 2, i, j).map_err(|e| e.to_string())?;
                    if closed != brute {
                        return Err(format!("p={p} i={i} j={j} {}: {closed} vs {brute}", kind.name()));
                    }
                    n_checks += 1;
                }
            }
        }
    }
    Ok(format!("{n_checks} checks"))
}

fn suite(s: Suite, cfg: SuiteConfig) -> Outcome {
    let reports = run_suite(s, &cfg, &Cache::disabled(), false).map_err(|e| e.to_string())?;
    all_pass(reports.into_iter().map(Ok))
}

fn satake() -> Outcome {
    suite(Suite::Satake, SuiteConfig { primes: Some(vec![2, 3]), ..Default::default() })
}

fn wtv() -> Outcome {
    let mut out = Vec::new();
    for k in [4, 6] {
        for m in [1, 2, 3] {
            for p in [2, 3] {
                out.push(verify_wtv(k, m, p, 3));
            }
        }
    }
    all_pass(out)
}

fn matrix_identities() -> Outcome {
    all_pass([2, 3].map(|n| verify_matrix_identities(n, &[4, 6, 8, 10], &[2, 3])))
}

fn eigenvalue_row() -> Outcome {
    let mut out = Vec::new();
    for k in [4, 10] {
        for p in [Prime::Numeric(2), Prime::Numeric(3), Prime::Formal] {
            out.push(verify_theorem3(2, k, p));
        }
    }
    all_pass(out)
}

fn euler_factor() -> Outcome {
    let mut out = Vec::new();
    for n in [2, 3] {
        for k in [10, 12] {
            out.push(verify_corollary4(n, k));
        }
    }
    all_pass(out)
}

fn eigenvalue() -> Outcome {
    for k in [4i64, 6] {
        for p in [2i64, 3] {
            let want = Rational::int_pow(p, 2 * k - 2) + Rational::from((p - 1) * p.pow(k as u32 - 2) + 1);
            let f = elliptic_eisenstein(k, (p * p + 1) as usize).map_err(|e| e.to_string())?;
            let got = hecke_t_elliptic(&f, k, p).map_err(|e| e.to_string())?.0[0].clone();
            if got != want {
                return Err(format!("k={k} p={p}: constant term {got} vs {want}"));
            }
        }
    }
    all_pass([(4, 2), (4, 3), (6, 2), (6, 3)].map(|(k, p)| verify_eisenstein_eigenvalue(k, p)))
}

fn maass(args: &[&str], cache: Option<&std::path::Path>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maass"));
    match cache {
        Some(d) => cmd.arg("--cache-dir").arg(d),
        None => cmd.arg("--no-cache"),
    };
    let o = cmd.args(args).env_remove("MAASS_CACHE_DIR").output().map_err(|e| e.to_string())?;
    if o.status.code() != Some(0) {
        return Err(format!("{args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
    }
    Ok(o.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let args = ["verify", "all", "--seed", "7"];
    let first = maass(&args, None)?;
    let second = maass(&args, None)?;
    let cold = maass(&args, Some(dir.path()))?;
    let warm = maass(&args, Some(dir.path()))?;
    for (label, other) in [("rerun", &second), ("cache cold", &cold), ("cache warm", &warm)] {
        if other != &first {
            return Err(format!("{label} output differs"));
        }
    }
    let siegel = ["compute", "siegel2", "--weight", "4", "--bound", "3"];
    if maass(&siegel, Some(dir.path()))? != maass(&siegel, None)? || maass(&siegel, Some(dir.path()))? != maass(&siegel, None)? {
        return Err("siegel2 cache transparency".into());
    }
    Ok(format!("{} report lines", first.iter().filter(|&&b| b == b'\n').count()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("restriction factorization, k=4", restriction_factorization, 1),
        ("generalized Maass relation, degree 1", maass_relation, 120),
        ("formal e_M|U identity", sum_eu, 5),
        ("Gauss sums vs enumeration", gauss, 10),
        ("coset counts vs enumeration, n=2", counts, 30),
        ("Satake row recursion and Weyl invariance", satake, 5),
        ("W(e)|T = p^(2k-2) W(e|V)", wtv, 30),
        ("A' matrix identities", matrix_identities, 10),
        ("eigenvalue row, n=2", eigenvalue_row, 30),
        ("standard = adjoint x shifted Hecke", euler_factor, 10),
        ("Eisenstein eigenvalue across modules", eigenvalue, 5),
        ("CLI determinism and cache transparency", determinism, 60),
    ];
    let mut failed = 0;
    for (i, (name, f, budget_s)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let slow = if elapsed > Duration::from_secs(*budget_s) { format!(", over {budget_s}s budget") } else { String::new() };
        match outcome {
            Ok(detail) => println!("criterion {:>2}: pass  {name} ({detail}, {} ms{slow})", i + 1, elapsed.as_millis()),
            Err(w) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {w}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
