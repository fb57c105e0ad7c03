use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::exactalg::Rational;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs, ascending.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.unsigned_abs() as i64;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n > 0`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: i64) -> i64 {
    assert!(n > 0);
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `σ_s(n) = Σ_{d|n} d^s` for `n > 0`.
pub fn sigma(s: u32, n: i64) -> BigInt {
    divisors(n).into_iter().map(|d| Pow::pow(BigInt::from(d), s)).sum()
}

/// `p`-adic valuation of `n ≠ 0`.
pub fn ord_p(n: i64, p: i64) -> u32 {
    assert!(n != 0 && p > 1);
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// `g_k(m) = Σ_{d²|m} μ(d) σ_{k−1}(m/d²)`.
pub fn g_k(k: i64, m: i64) -> Result<Rational> {
    if m <= 0 {
        return Err(Error::NonPositiveIndex);
    }
    if k < 2 {
        return Err(Error::WeightOutOfRange(k));
    }
    let mut total = BigInt::from(0);
    let mut d = 1;
    while d * d <= m {
        if m % (d * d) == 0 {
            total += mobius(d) * sigma((k - 1) as u32, m / (d * d));
        }
        d += 1;
    }
    Ok(Rational::from(total))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

static BERNOULLI: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();

/// Bernoulli number `B_n` with `B_1 = −1/2`. Memoized.
pub fn bernoulli(n: usize) -> Rational {
    let table = BERNOULLI.get_or_init(|| RwLock::new(vec![Rational::one()]));
    if let Some(b) = table.read().unwrap().get(n) {
        return b.clone();
    }
    let mut t = table.write().unwrap();
    while t.len() <= n {
        // Σ_{i=0}^{m} C(m+1, i) B_i = 0
        let m = t.len();
        let s: Rational = (0..m).map(|i| Rational::from(binomial(m + 1, i)) * &t[i]).sum();
        t.push(-s / Rational::from(binomial(m + 1, m)));
    }
    t[n].clone()
}

/// `ζ(1−k) = −B_k/k` for `k ≥ 2`.
pub fn zeta_one_minus(k: usize) -> Rational {
    assert!(k >= 2);
    -bernoulli(k) / Rational::from(k as i64)
}

/// Kronecker symbol `(a/n)` for `n > 0`.
pub fn kronecker(a: i64, n: i64) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut result = 1;
    while n % 2 == 0 {
        n /= 2;
        result *= match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0,
        };
    }
    result * jacobi(a, n)
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
fn jacobi(a: i64, n: i64) -> i64 {
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub(crate) fn binom(n: usize, k: usize) -> BigInt {
    binomial(n, k)
}
