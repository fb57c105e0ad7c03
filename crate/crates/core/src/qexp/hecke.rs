use std::collections::BTreeMap;

use super::jacobi::{apply_u, JacobiExpansion, QSeries};
use crate::arith::{is_prime, sigma, bernoulli};
use crate::error::{Error, Result};
use crate::exactalg::{Cyclotomic, Rational};

/// Upper-triangular representative `[[a, b], [0, d]]` with `ad = p²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CosetRep {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

fn check_prime(p: i64) -> Result<()> {
    if p < 2 || !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// Representatives of `SL₂(Z) \ {g : det g = p², g primitive}` in
/// upper-triangular form. There are `p² + p` of them.
pub fn coset_reps(p: i64) -> Result<Vec<CosetRep>> {
    check_prime(p)?;
    let p2 = p * p;
    let mut reps = vec![CosetRep { a: p2, b: 0, d: 1 }];
    reps.extend((1..p).map(|b| CosetRep { a: p, b, d: p }));
    reps.extend((0..p2).map(|b| CosetRep { a: 1, b, d: p2 }));
    Ok(reps)
}

fn check_degree(l: i64) -> Result<()> {
    if l != 0 && l != 1 {
        return Err(Error::UnsupportedDegree);
    }
    Ok(())
}

fn delta(p: i64, n: i64) -> i64 {
    i64::from(n % p == 0)
}

/// `φ|V_{l,1−l}(p²)` for `l ∈ {0, 1}` via the closed coefficient formula.
///
/// `V_{0,1} = p^{−k}·U(p)`. For `l = 1` the image has index `m·p²` and
/// `c'(N, R) = c(N/p², R/p²) + p^{−k}(p·δ_{p|N} − 1)·c(N, R/p) + p^{2−2k}·c(p²N, R)`,
/// known for `N ≤ ⌊n_complete/p²⌋`.
pub fn apply_v(phi: &JacobiExpansion, l: i64, p: i64) -> Result<JacobiExpansion> {
    check_degree(l)?;
    check_prime(p)?;
    let k = phi.weight();
    let pk = Rational::int_pow(p, -k);
    if l == 0 {
        return Ok(apply_u(phi, p)?.scale(&pk));
    }
    let p2 = p * p;
    let index = phi.index() * p2;
    let n_out = phi.n_complete() / p2;
    let far = Rational::int_pow(p, 2 - 2 * k);
    let mut out: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
    for (&(n, r), c) in phi.coeffs() {
        let mut add = |key: (i64, i64), v: Rational| {
            if key.0 <= n_out {
                *out.entry(key).or_insert_with(Rational::zero) += v;
            }
        };
        add((n * p2, r * p2), c.clone());
        add((n, r * p), &pk * c * Rational::from(p * delta(p, n) - 1));
        if n % p2 == 0 {
            add((n / p2, r), &far * c);
        }
    }
    JacobiExpansion::new(k, index, n_out, out)
}

/// Like [`apply_v`] but demands the image be known up to `target`.
pub fn apply_v_to(phi: &JacobiExpansion, l: i64, p: i64, target: i64) -> Result<JacobiExpansion> {
    check_degree(l)?;
    let need = if l == 1 { target * p * p } else { target };
    if need > phi.n_complete() {
        return Err(Error::InsufficientPrecision { required: need, available: phi.n_complete() });
    }
    apply_v(phi, l, p)?.truncate(target)
}

/// Sums `d^{−k}·c·e(nb/d)·q^{na/d}ζ^{ra}` over the given representatives,
/// keeping exponents `N ≤ n_out`. Fractional exponents must cancel.
fn coset_sum(
    terms: &[((i64, i64), Rational)],
    reps: &[CosetRep],
    k: i64,
    p: i64,
    n_out: i64,
) -> Result<BTreeMap<(i64, i64), Rational>> {
    let p2 = p * p;
    // exponent N is stored as N·p² to keep fractional ones exact
    let mut acc: BTreeMap<(i64, i64), Cyclotomic> = BTreeMap::new();
    for rep in reps {
        let w = Rational::int_pow(rep.d, -k);
        for ((n, r), c) in terms {
            let scaled_n = n * rep.a * p2 / rep.d;
            if scaled_n > n_out * p2 {
                continue;
            }
            let entry = acc.entry((scaled_n, r * rep.a)).or_insert_with(|| Cyclotomic::zero(p2 as u64).expect("prime square"));
            // e(nb/d) = ζ_{p²}^{nb·p²/d}
            entry.add_root(n * rep.b * (p2 / rep.d), &(&w * c));
        }
    }
    let mut out = BTreeMap::new();
    for ((scaled_n, r), z) in acc {
        let v = z.to_rational()?;
        if v.is_zero() {
            continue;
        }
        if scaled_n % p2 != 0 {
            return Err(Error::Invariant(format!("non-integral exponent {scaled_n}/{p2} survived")));
        }
        out.insert((scaled_n / p2, r), v);
    }
    Ok(out)
}

/// Reference implementation of [`apply_v`] that slashes `φ` by every coset
/// representative and sums the roots of unity in `Q(ζ_{p²})`.
pub fn apply_v_generic(phi: &JacobiExpansion, l: i64, p: i64) -> Result<JacobiExpansion> {
    check_degree(l)?;
    let terms: Vec<_> = phi.coeffs().iter().map(|(k, v)| (*k, v.clone())).collect();
    let k = phi.weight();
    if l == 0 {
        check_prime(p)?;
        let reps = [CosetRep { a: p, b: 0, d: p }];
        let out = coset_sum(&terms, &reps, k, p, phi.n_complete())?;
        return JacobiExpansion::new(k, phi.index() * p * p, phi.n_complete(), out);
    }
    let reps = coset_reps(p)?;
    let n_out = phi.n_complete() / (p * p);
    let out = coset_sum(&terms, &reps, k, p, n_out)?;
    JacobiExpansion::new(k, phi.index() * p * p, n_out, out)
}

/// `T(p²)` on a weight-`k` elliptic form in the normalization
/// `b'(N) = p^{2k−2}[b(N/p²) + p^{−k}(pδ_{p|N} − 1)b(N) + p^{2−2k}b(p²N)]`.
pub fn hecke_t_elliptic(f: &QSeries, k: i64, p: i64) -> Result<QSeries> {
    check_prime(p)?;
    if f.is_empty() {
        return Err(Error::InsufficientPrecision { required: 0, available: -1 });
    }
    let p2 = p * p;
    let len = (f.len() as i64 - 1) / p2 + 1;
    let top = Rational::int_pow(p, 2 * k - 2);
    let mid = Rational::int_pow(p, k - 2);
    let out = (0..len)
        .map(|n| {
            let mut v = f.0[(n * p2) as usize].clone();
            v += &mid * Rational::from(p * delta(p, n) - 1) * &f.0[n as usize];
            if n % p2 == 0 {
                v += &top * &f.0[(n / p2) as usize];
            }
            v
        })
        .collect();
    Ok(QSeries(out))
}

/// [`hecke_t_elliptic`] computed through the coset representatives.
pub fn hecke_t_elliptic_generic(f: &QSeries, k: i64, p: i64) -> Result<QSeries> {
    let reps = coset_reps(p)?;
    if f.is_empty() {
        return Err(Error::InsufficientPrecision { required: 0, available: -1 });
    }
    let terms: Vec<_> = f.0.iter().enumerate().map(|(n, c)| ((n as i64, 0), c.clone())).collect();
    let n_out = (f.len() as i64 - 1) / (p * p);
    let sums = coset_sum(&terms, &reps, k, p, n_out)?;
    let scale = Rational::int_pow(p, 2 * k - 2);
    let out = (0..=n_out).map(|n| sums.get(&(n, 0)).map(|v| v * &scale).unwrap_or_else(Rational::zero)).collect();
    Ok(QSeries(out))
}

/// Elliptic Eisenstein series `1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ` with `len` terms.
pub fn elliptic_eisenstein(k: i64, len: usize) -> Result<QSeries> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::WeightOutOfRange(k));
    }
    let c = -Rational::from(2 * k) / bernoulli(k as usize);
    let mut a = Vec::with_capacity(len);
    for n in 0..len as i64 {
        a.push(if n == 0 { Rational::one() } else { &c * Rational::from(sigma((k - 1) as u32, n)) });
    }
    Ok(QSeries(a))
}
