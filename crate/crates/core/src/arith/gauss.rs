use super::counting::g_p_count;
use crate::error::{Error, Result};
use crate::exactalg::{Cyclotomic, Rational};

/// Closed form of `G_j^n(m, λ)`, the sum of `e(m·λᵀxλ/p)` over symmetric
/// `x ∈ M_n(Z/p)` of rank `j`. It depends on `(m, λ)` only through whether
/// `mλ ≡ 0 mod p`. For `j > n` the sum is empty.
pub fn gauss_sum(p: u64, n: i64, j: i64, m: i64, lambda_nonzero_mod_p: bool) -> Result<Rational> {
    if n < 1 || j < 0 {
        return Err(Error::InvalidArgument(format!("need j >= 0, n >= 1; got n={n} j={j}")));
    }
    if j > n {
        return Ok(Rational::zero());
    }
    let pi = p as i64;
    let f = j / 2;
    let odd_prod = |upto: i64| -> Rational {
        (1..=upto)
            .filter(|a| a % 2 == 1)
            .map(|a| Rational::int_pow(pi, a) - Rational::one())
            .product()
    };
    let lead = Rational::int_pow(pi, f * (f + 1));
    let degenerate = m.rem_euclid(pi) == 0 || !lambda_nonzero_mod_p;
    if degenerate {
        Ok(lead * g_p_count(p, n, j) * odd_prod(j))
    } else {
        let sign = if j % 2 == 0 { Rational::one() } else { Rational::from(-1) };
        Ok(sign * lead * g_p_count(p, n - 1, 2 * f) * odd_prod(j - 1))
    }
}

fn rank_mod_p(rows: &mut [Vec<i64>], p: i64) -> usize {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..n).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&x| (rows[rank][c] * x).rem_euclid(p) == 1).unwrap();
        for r in 0..n {
            if r != rank {
                let f = (rows[r][c] * inv).rem_euclid(p);
                for t in 0..cols {
                    rows[r][t] = (rows[r][t] - f * rows[rank][t]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Enumerates every symmetric `n×n` matrix over `Z/p` of rank `j` and sums
/// `e(m·λᵀxλ/p)` in `Q(ζ_p)`.
pub fn gauss_sum_bruteforce(p: u64, n: usize, j: usize, m: i64, lambda: &[i64]) -> Result<Rational> {
    if lambda.len() != n {
        return Err(Error::InvalidArgument("lambda length must equal n".into()));
    }
    let pi = p as i64;
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|r| (r..n).map(move |c| (r, c))).collect();
    let total = pi.pow(slots.len() as u32);
    let mut acc = Cyclotomic::zero(p)?;
    let one = Rational::one();
    for code in 0..total {
        let mut x = vec![vec![0i64; n]; n];
        let mut c = code;
        for &(r, s) in &slots {
            let v = c % pi;
            c /= pi;
            x[r][s] = v;
            x[s][r] = v;
        }
        let q: i64 = (0..n).flat_map(|r| (0..n).map(move |s| (r, s))).map(|(r, s)| lambda[r] * x[r][s] * lambda[s]).sum();
        if rank_mod_p(&mut x.clone(), pi) == j {
            acc.add_root(m * q, &one);
        }
    }
    acc.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_zero_is_one() {
        for n in 1..=3 {
            assert_eq!(gauss_sum(3, n, 0, 1, true).unwrap(), Rational::one());
            assert_eq!(gauss_sum_bruteforce(3, n as usize, 0, 1, &vec![1; n as usize]).unwrap(), Rational::one());
        }
    }

    #[test]
    fn rank_one_mod_three() {
        assert_eq!(gauss_sum(3, 1, 1, 1, true).unwrap(), Rational::from(-1));
        assert_eq!(gauss_sum(3, 1, 1, 3, true).unwrap(), Rational::from(2));
        assert_eq!(gauss_sum_bruteforce(3, 1, 1, 1, &[1]).unwrap(), Rational::from(-1));
        assert_eq!(gauss_sum_bruteforce(3, 1, 1, 1, &[0]).unwrap(), Rational::from(2));
    }

    #[test]
    fn rank_above_size_is_empty() {
        assert_eq!(gauss_sum(2, 2, 3, 1, true).unwrap(), Rational::zero());
        assert_eq!(gauss_sum_bruteforce(2, 2, 3, 1, &[1, 0]).unwrap(), Rational::zero());
        assert!(gauss_sum(2, 2, -1, 1, true).is_err());
    }
}
