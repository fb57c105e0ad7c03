//! Satake images of the Hecke operators `T_{l,n−l}(p²)` and the matrices
//! `B_{l,l+1}`, `B_{2,n+1}`, `B'`, `A` and `A'` built from them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::exactalg::{x_name, x_var, LaurentPoly, PolyMatrix, Prime, Rational};

/// Variable of `A'`: `u = √p · X_p`.
pub const U_VAR: &str = "u";

/// One entry `b_{t,j}` of `B_{l,l+1}(X_l)`.
pub fn b_entry(t: i64, j: i64, l: i64, p: Prime) -> Result<LaurentPoly> {
    if l < 1 || !(0..l).contains(&t) || !(0..=l).contains(&j) {
        return Err(Error::IndexOutOfRange(format!("b_(t={t},j={j}) for l={l}")));
    }
    let x = x_var(l as usize);
    let one = LaurentPoly::one();
    Ok(if t == j - 2 {
        (&p.pow(2 * l - 2 * j + 2) - &one) * p.pow(j - 1 - l) * x
    } else if t == j - 1 {
        let pm1 = &p.pow(1) - &one;
        one + p.pow(j - 1 - l) * pm1 * &x + x.pow(2)?
    } else if t == j {
        p.pow(j - l) * x
    } else {
        LaurentPoly::zero()
    })
}

/// `B_{l,l+1}(X_l)`, of shape `l × (l+1)`.
pub fn build_b(l: i64, p: Prime) -> Result<PolyMatrix> {
    if l < 1 {
        return Err(Error::IndexOutOfRange(format!("B_(l,l+1) needs l >= 1, got {l}")));
    }
    let mut entries = Vec::with_capacity((l * (l + 1)) as usize);
    for t in 0..l {
        for j in 0..=l {
            entries.push(b_entry(t, j, l, p)?);
        }
    }
    PolyMatrix::new(l as usize, (l + 1) as usize, entries)
}

/// `B_{2,n+1} = Π_{l=2}^{n} B_{l,l+1}(X_l)`, of shape `2 × (n+1)`; the identity for `n = 1`.
pub fn build_b_chain(n: i64, p: Prime) -> Result<PolyMatrix> {
    if n < 1 {
        return Err(Error::IndexOutOfRange(format!("B_(2,n+1) needs n >= 1, got {n}")));
    }
    let mut m = PolyMatrix::identity(2);
    for l in 2..=n {
        m = m.mul(&build_b(l, p)?)?;
    }
    Ok(m)
}

/// `B'_{2,2n} = (Π_{i=2}^{2n−1} X_i)⁻¹ B_{2,2n}(X_2, …, X_{2n−1})`.
pub fn build_bprime(n: i64, p: Prime) -> Result<PolyMatrix> {
    if n < 1 {
        return Err(Error::IndexOutOfRange(format!("B' needs n >= 1, got {n}")));
    }
    let chain = build_b_chain(2 * n - 1, p)?;
    let prod: LaurentPoly = (2..=(2 * n - 1) as usize).map(x_var).product();
    Ok(chain.scale(&prod.inverse()?))
}

/// `A_{2,n+1}^{p,k} = B_{2,n+1}(p^{2−k}, …, p^{n−k})`.
pub fn build_a(n: i64, p: Prime, k: i64) -> Result<PolyMatrix> {
    let assignment: BTreeMap<String, LaurentPoly> = (2..=n).map(|l| (x_name(l as usize), p.pow(l - k))).collect();
    build_b_chain(n, p)?.substitute(&assignment)
}

/// `A'_{2,2n}` in the variable `u = √p·X_p`: `B'` at `X_l = p^{l−n−1/2} X_p = p^{l−n−1} u`.
pub fn build_aprime(n: i64, p: Prime) -> Result<PolyMatrix> {
    let u = LaurentPoly::var(U_VAR);
    let assignment: BTreeMap<String, LaurentPoly> =
        (2..2 * n).map(|l| (x_name(l as usize), p.pow(l - n - 1) * &u)).collect();
    build_bprime(n, p)?.substitute(&assignment)
}

static PHI_CACHE: OnceLock<RwLock<HashMap<(i64, i64, Prime), LaurentPoly>>> = OnceLock::new();

/// Satake image `φ(T_{l,n−l}(p²))` over `X_0..X_n`, by the degree recursion
/// seeded with the two degree-1 values. Memoized.
pub fn phi_t(l: i64, n: i64, p: Prime) -> Result<LaurentPoly> {
    if n < 1 || !(0..=n).contains(&l) {
        return Err(Error::IndexOutOfRange(format!("T_(l={l}, n-l) for n={n}")));
    }
    let cache = PHI_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().unwrap().get(&(l, n, p)) {
        return Ok(v.clone());
    }
    let v = phi_t_uncached(l, n, p)?;
    cache.write().unwrap().insert((l, n, p), v.clone());
    Ok(v)
}

fn phi_t_uncached(l: i64, n: i64, p: Prime) -> Result<LaurentPoly> {
    let one = LaurentPoly::one();
    if n == 1 {
        let x1 = x_var(1);
        let base = p.pow(-1) * x_var(0).pow(2)? * &x1;
        return Ok(match l {
            0 => base,
            _ => base * (p.pow(1) * x1.pow(-1)? + (&p.pow(1) - &one) + p.pow(1) * &x1),
        });
    }
    let xn = x_var(n as usize);
    let xn_inv = xn.pow(-1)?;
    let pm1 = &p.pow(1) - &one;
    let inner = if l == n {
        (&xn_inv + &(&pm1 * &p.pow(-1)) + &xn) * phi_t(n - 1, n - 1, p)?
            + (&p.pow(2) - &one) * p.pow(-1) * phi_t(n - 2, n - 1, p)?
    } else if l == 1 {
        p.pow(1 - n) * phi_t(1, n - 1, p)? + (&xn_inv + &(&pm1 * &p.pow(-n)) + &xn) * phi_t(0, n - 1, p)?
    } else if l == 0 {
        p.pow(-n) * phi_t(0, n - 1, p)?
    } else {
        p.pow(l - n) * phi_t(l, n - 1, p)?
            + (&xn_inv + &(p.pow(l - n - 1) * &pm1) + &xn) * phi_t(l - 1, n - 1, p)?
            + (&p.pow(2 * n - 2 * l + 2) - &one) * p.pow(l - n - 1) * phi_t(l - 2, n - 1, p)?
    };
    Ok(xn * inner)
}

/// `(φ(T_{0,n}), …, φ(T_{n,0}))` as `(φ(T_{0,1}), φ(T_{1,0}))·B_{2,n+1}`.
pub fn phi_row_by_matrix(n: i64, p: Prime) -> Result<Vec<LaurentPoly>> {
    let seed = PolyMatrix::new(1, 2, vec![phi_t(0, 1, p)?, phi_t(1, 1, p)?])?;
    Ok(seed.mul(&build_b_chain(n, p)?)?.row(0))
}

/// `(μ_0, …, μ_n)`, stored through `μ_0²` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatakeVector {
    pub degree: usize,
    pub mu0_sq: LaurentPoly,
    /// `μ_1, …, μ_n`
    pub mu: Vec<LaurentPoly>,
}

impl SatakeVector {
    pub fn new(mu0_sq: LaurentPoly, mu: Vec<LaurentPoly>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidArgument("Satake vector needs degree >= 1".into()));
        }
        Ok(SatakeVector { degree: mu.len(), mu0_sq, mu })
    }

    /// `μ_0² μ_1 ⋯ μ_n`.
    pub fn similitude(&self) -> LaurentPoly {
        self.mu.iter().fold(self.mu0_sq.clone(), |acc, m| acc * m)
    }

    /// Checks `μ_0² μ_1 ⋯ μ_n = p^{nk − n(n+1)/2}`.
    pub fn is_weight_normalized(&self, k: i64, p: Prime) -> bool {
        let n = self.degree as i64;
        self.similitude() == p.pow(n * k - n * (n + 1) / 2)
    }
}

/// Eigenvalue of `T_{l,n−l}(p²)` at a Satake vector: `φ(T)` evaluated at `X_i = μ_i`.
/// `φ(T)` must have `X_0`-degree exactly 2 so only `μ_0²` enters.
pub fn eigenvalue_at(sv: &SatakeVector, l: i64, p: Prime) -> Result<LaurentPoly> {
    let n = sv.degree as i64;
    let phi = phi_t(l, n, p)?;
    let x0 = x_name(0);
    if phi.degree_range(&x0) != Some((2, 2)) {
        return Err(Error::Invariant(format!("X0-degree of phi(T_({l},{})) is not exactly 2", n - l)));
    }
    let stripped = phi.coefficients_in(&x0).remove(&2).expect("X0^2 part");
    let assignment: BTreeMap<String, LaurentPoly> =
        sv.mu.iter().enumerate().map(|(i, m)| (x_name(i + 1), m.clone())).collect();
    Ok(stripped.substitute(&assignment)? * &sv.mu0_sq)
}

/// Satake point of the elliptic Eisenstein series of weight `k`: `μ_1 = p^{k−1}`, `μ_0² = 1`.
pub fn eisenstein_satake(k: i64, p: Prime) -> SatakeVector {
    SatakeVector { degree: 1, mu0_sq: LaurentPoly::one(), mu: vec![p.pow(k - 1)] }
}

/// Coefficient sum of a polynomial, as a rational (its value at all variables 1).
pub fn value_at_ones(f: &LaurentPoly) -> Rational {
    f.coefficient_sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::is_weyl_invariant;

    fn num(p: u64) -> Prime {
        Prime::Numeric(p)
    }

    #[test]
    fn b_entry_cases() {
        let p = num(3);
        let x = x_var(4);
        // t = j
        assert_eq!(b_entry(2, 2, 4, p).unwrap(), x.scale(&Rational::frac(1, 9)));
        // t = j − 1
        let expect = LaurentPoly::one() + x.scale(&Rational::frac(2, 27)) + x.pow(2).unwrap();
        assert_eq!(b_entry(1, 2, 4, p).unwrap(), expect);
        // t = j − 2
        assert_eq!(b_entry(0, 2, 4, p).unwrap(), x.scale(&(Rational::from(728) / Rational::from(27))));
        assert!(b_entry(3, 1, 4, p).unwrap().is_zero());
        assert!(b_entry(4, 1, 4, p).is_err());
    }

    #[test]
    fn base_values() {
        for p in [num(2), num(5), Prime::Formal] {
            let x0sq = x_var(0).pow(2).unwrap();
            let base = p.pow(-1) * &x0sq * x_var(1);
            assert_eq!(phi_t(0, 1, p).unwrap(), base);
            let inner = p.pow(1) * x_var(1).pow(-1).unwrap() + (&p.pow(1) - &LaurentPoly::one()) + p.pow(1) * x_var(1);
            assert_eq!(phi_t(1, 1, p).unwrap(), &base * &inner);
            // third recursion line at n = 2
            assert_eq!(phi_t(0, 2, p).unwrap(), p.pow(-3) * x0sq * x_var(1) * x_var(2));
        }
    }

    #[test]
    fn empty_chain_is_identity() {
        assert_eq!(build_a(1, num(2), 4).unwrap(), PolyMatrix::identity(2));
        let a = build_a(2, num(2), 4).unwrap();
        let b = build_b(2, num(2)).unwrap();
        let at: BTreeMap<String, LaurentPoly> = [(x_name(2), LaurentPoly::constant(Rational::frac(1, 4)))].into();
        assert_eq!(a, b.substitute(&at).unwrap());
    }

    #[test]
    fn small_degree_weyl() {
        for n in 1..=2 {
            for l in 0..=n {
                assert!(is_weyl_invariant(&phi_t(l, n, num(3)).unwrap(), n as usize).unwrap());
            }
        }
    }

    #[test]
    fn eisenstein_eigenvalue() {
        let sv = eisenstein_satake(4, num(2));
        assert!(sv.is_weight_normalized(4, num(2)));
        let ev = eigenvalue_at(&sv, 1, num(2)).unwrap();
        assert_eq!(ev.as_constant(), Some(Rational::from(69)));
    }

    #[test]
    fn evaluation_at_ones() {
        for n in 1..=3 {
            let phi = phi_t(0, n, num(2)).unwrap();
            let sv = SatakeVector::new(LaurentPoly::one(), vec![LaurentPoly::one(); n as usize]).unwrap();
            let ev = eigenvalue_at(&sv, 0, num(2)).unwrap();
            assert_eq!(ev.as_constant().unwrap(), value_at_ones(&phi));
            assert_eq!(value_at_ones(&phi), Rational::int_pow(2, -n * (n + 1) / 2));
        }
    }

    #[test]
    fn adash_small() {
        // A at weight k+n equals p^{−(n−1)(2k−1)} A'(u = p^{1−k})
        let (n, k, p) = (2, 4, num(2));
        let a = build_a(2 * n - 1, p, k + n).unwrap();
        let ap = build_aprime(n, p).unwrap();
        let at: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), p.pow(1 - k))].into();
        let rhs = ap.substitute(&at).unwrap().scale(&p.pow(-(n - 1) * (2 * k - 1)));
        assert_eq!(a, rhs);
    }
}
