use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::multiplicative::{bernoulli, binom, divisors, factorize, kronecker, mobius, sigma, zeta_one_minus};
use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// `Δ = D·f²` with `D` a fundamental discriminant (possibly 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscriminantSplit {
    pub fundamental: i64,
    pub conductor: i64,
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let squarefree = |x: i64| factorize(x).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let s = d / 4;
            matches!(s.rem_euclid(4), 2 | 3) && squarefree(s)
        }
        _ => false,
    }
}

/// Splits a discriminant `Δ ≡ 0, 1 mod 4`, `Δ ≠ 0`, as `D·f²`.
pub fn discriminant_split(delta: i64) -> Result<DiscriminantSplit> {
    if delta == 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
        return Err(Error::NotADiscriminant(delta));
    }
    let mut s = delta.signum();
    let mut t = 1;
    for (q, e) in factorize(delta) {
        s *= q.pow(e % 2);
        t *= q.pow(e / 2);
    }
    let (d, f) = if s.rem_euclid(4) == 1 { (s, t) } else { (4 * s, t / 2) };
    debug_assert_eq!(d * f * f, delta);
    debug_assert!(is_fundamental_discriminant(d));
    Ok(DiscriminantSplit { fundamental: d, conductor: f })
}

/// Generalized Bernoulli number `B_{r,χ_D}` for the character of the
/// fundamental discriminant `D`:
/// `B_{r,χ} = Σ_i C(r,i) B_i |D|^(i−1) Σ_{a=1}^{|D|} χ(a) a^(r−i)`.
pub fn generalized_bernoulli(r: usize, d: i64) -> Rational {
    let f = d.abs();
    let char_sum = |j: usize| -> BigInt {
        (1..=f)
            .map(|a| {
                let c = kronecker(d, a);
                if c == 0 {
                    BigInt::zero()
                } else {
                    Pow::pow(BigInt::from(a), j) * c
                }
            })
            .sum()
    };
    (0..=r)
        .map(|i| {
            let b = bernoulli(i);
            if b.is_zero() {
                return Rational::zero();
            }
            Rational::from(binom(r, i)) * b * Rational::int_pow(f, i as i64 - 1) * Rational::from(char_sum(r - i))
        })
        .sum()
}

/// `L(1−r, χ_D) = −B_{r,χ_D}/r`.
pub fn l_value_one_minus(r: usize, d: i64) -> Rational {
    -generalized_bernoulli(r, d) / Rational::from(r as i64)
}

static COHEN: OnceLock<RwLock<HashMap<(i64, i64), Rational>>> = OnceLock::new();

/// Cohen's function `H(r, N)`.
///
/// `H(r, 0) = ζ(1−2r)`; for `N > 0` with `(−1)^r N = D f²` a discriminant,
/// `H(r, N) = L(1−r, χ_D) Σ_{d|f} μ(d) χ_D(d) d^(r−1) σ_{2r−1}(f/d)`;
/// otherwise 0. Memoized.
pub fn cohen_h(r: i64, n: i64) -> Result<Rational> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("cohen_H needs r >= 2, got {r}")));
    }
    if n < 0 {
        return Err(Error::InvalidArgument(format!("cohen_H needs N >= 0, got {n}")));
    }
    let cache = COHEN.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().unwrap().get(&(r, n)) {
        return Ok(v.clone());
    }
    let v = cohen_h_uncached(r, n);
    cache.write().unwrap().insert((r, n), v.clone());
    Ok(v)
}

fn cohen_h_uncached(r: i64, n: i64) -> Rational {
    if n == 0 {
        return zeta_one_minus((2 * r) as usize);
    }
    let delta = if r % 2 == 0 { n } else { -n };
    let Ok(split) = discriminant_split(delta) else {
        return Rational::zero();
    };
    let d = split.fundamental;
    let f = split.conductor;
    let l = l_value_one_minus(r as usize, d);
    let s: Rational = divisors(f)
        .into_iter()
        .map(|e| {
            let w = mobius(e) * kronecker(d, e);
            if w == 0 {
                return Rational::zero();
            }
            Rational::from(w) * Rational::int_pow(e, r - 1) * Rational::from(sigma((2 * r - 1) as u32, f / e))
        })
        .sum();
    l * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let s = |d| discriminant_split(d).unwrap();
        assert_eq!(s(-4), DiscriminantSplit { fundamental: -4, conductor: 1 });
        assert_eq!(s(-12), DiscriminantSplit { fundamental: -3, conductor: 2 });
        assert_eq!(s(-16), DiscriminantSplit { fundamental: -4, conductor: 2 });
        assert_eq!(s(-27), DiscriminantSplit { fundamental: -3, conductor: 3 });
        assert_eq!(s(-32), DiscriminantSplit { fundamental: -8, conductor: 2 });
        assert_eq!(s(9), DiscriminantSplit { fundamental: 1, conductor: 3 });
        assert_eq!(discriminant_split(-5), Err(Error::NotADiscriminant(-5)));
        assert_eq!(discriminant_split(-2), Err(Error::NotADiscriminant(-2)));
    }

    #[test]
    fn cohen_examples() {
        assert_eq!(cohen_h(3, 0).unwrap(), Rational::frac(-1, 252));
        assert_eq!(cohen_h(3, 3).unwrap(), Rational::frac(-2, 9));
        assert_eq!(cohen_h(3, 4).unwrap(), Rational::frac(-1, 2));
        // (−1)^3·1 = −1 ≡ 3 mod 4 is not a discriminant.
        assert_eq!(cohen_h(3, 1).unwrap(), Rational::zero());
        assert!(cohen_h(1, 3).is_err());
    }

    #[test]
    fn class_number_shadow() {
        // H(1, N) is the Hurwitz class number; r = 1 is outside the supported
        // range, but L(0, χ_D) = h(D)/(w/2) is reachable through the Bernoulli sum.
        assert_eq!(l_value_one_minus(1, -3), Rational::frac(1, 3));
        assert_eq!(l_value_one_minus(1, -4), Rational::frac(1, 2));
        assert_eq!(l_value_one_minus(1, -23), Rational::from(3));
    }

    #[test]
    fn trivial_character_is_zeta() {
        for r in [2usize, 4, 6] {
            assert_eq!(l_value_one_minus(r, 1), zeta_one_minus(r));
        }
    }
}
