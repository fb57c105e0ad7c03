//! Maass-type relations among Jacobi-Eisenstein series: the a-vectors, the
//! coefficients of `K_{i,j}^α` in the three-element basis, the formal
//! `Σ g_k·E|U` identity and the end-to-end check at degree one.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::arith::{g_k, gauss_sum, is_prime, lattice_multiplicities, ord_p};
use crate::error::{Error, Result};
use crate::exactalg::{PolyMatrix, Prime, Rational};
use crate::qexp::{apply_u, apply_v_to, fourier_jacobi, hecke_t_elliptic, jacobi_eisenstein, specialize_z0, JacobiExpansion};
use crate::report::{run_check, VerificationReport, Witness};
use crate::satake::build_a;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ACase {
    /// `p² | m`
    SquareDivides,
    /// `p ‖ m`
    ExactlyDivides,
    /// `p ∤ m`
    Coprime,
}

impl ACase {
    pub fn of(m: i64, p: i64) -> ACase {
        match ord_p(m, p) {
            0 => ACase::Coprime,
            1 => ACase::ExactlyDivides,
            _ => ACase::SquareDivides,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AVector {
    pub a0: Rational,
    pub a1: Rational,
    pub a2: Rational,
    pub case: ACase,
}

impl AVector {
    pub fn as_array(&self) -> [Rational; 3] {
        [self.a0.clone(), self.a1.clone(), self.a2.clone()]
    }
}

fn check_inputs(k: i64, m: i64, p: i64) -> Result<()> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::WeightOutOfRange(k));
    }
    if m < 1 {
        return Err(Error::NonPositiveIndex);
    }
    if p < 2 || !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

fn pw(p: i64, e: i64) -> Rational {
    Rational::int_pow(p, e)
}

/// The three-case triple `(a_0, a_1, a_2)_{m,p,k}`.
pub fn a_vector(m: i64, p: i64, k: i64) -> Result<AVector> {
    check_inputs(k, m, p)?;
    let case = ACase::of(m, p);
    let (a0, a1, a2) = match case {
        ACase::SquareDivides => (pw(p, 2 - 2 * k), pw(p, -k) * Rational::from(p - 1), Rational::one()),
        ACase::ExactlyDivides => (Rational::zero(), pw(p, 2 - 2 * k) + pw(p, 1 - k) - pw(p, -k), Rational::one()),
        ACase::Coprime => (Rational::zero(), pw(p, 2 - 2 * k) - pw(p, -k), pw(p, 1 - k) + Rational::one()),
    };
    Ok(AVector { a0, a1, a2, case })
}

pub type Triple = [Rational; 3];

/// Coefficients of `K_{i,j}^α` (degree one) on
/// `(E_{m/p²}|U(p²), E_m|U(p), E_{mp²})`.
pub fn k_combination_n1(i: i64, j: i64, alpha: i64, m: i64, p: i64, k: i64) -> Result<Triple> {
    check_inputs(k, m, p)?;
    if !(0..=j).contains(&i) || j > 1 {
        return Err(Error::IndexOutOfRange(format!("K_({i},{j}) at degree 1")));
    }
    if alpha < 0 || alpha > j - i {
        return Ok(zero3());
    }
    let z = Rational::zero;
    let case = ACase::of(m, p);
    Ok(match (i, j, alpha) {
        (0, 0, _) => match case {
            ACase::SquareDivides => [pw(p, 2 - 2 * k), z(), z()],
            _ => [z(), pw(p, 2 - 2 * k), z()],
        },
        (0, 1, 0) => [z(), pw(p, -k), z()],
        (0, 1, _) => match case {
            ACase::Coprime => [z(), -pw(p, -k), pw(p, 1 - k)],
            _ => [z(), pw(p, -k) * Rational::from(p - 1), z()],
        },
        _ => [z(), z(), Rational::one()],
    })
}

fn zero3() -> Triple {
    [Rational::zero(), Rational::zero(), Rational::zero()]
}

/// `G_α^{s}(0)`, with the empty matrix space for `s = 0`.
fn gauss_at_zero(p: i64, s: i64, alpha: i64) -> Result<Rational> {
    if s == 0 {
        return Ok(if alpha == 0 { Rational::one() } else { Rational::zero() });
    }
    gauss_sum(p as u64, s, alpha, 0, false)
}

/// Coefficients of `K_{i,j}^α` at degree `n`. Outside degree one only the
/// `p² | m` branch has closed-form inputs.
pub fn k_combination(n: i64, i: i64, j: i64, alpha: i64, m: i64, p: i64, k: i64) -> Result<Triple> {
    check_inputs(k, m, p)?;
    if n < 1 || !(0..=j).contains(&i) || j > n {
        return Err(Error::IndexOutOfRange(format!("K_({i},{j}) at degree {n}")));
    }
    if ACase::of(m, p) != ACase::SquareDivides {
        return if n == 1 { k_combination_n1(i, j, alpha, m, p, k) } else { Err(Error::NoClosedForm) };
    }
    if alpha < 0 || alpha > j - i {
        return Ok(zero3());
    }
    let scale = pw(p, -k * (2 * n - i - j) + (n - j) * (n - i + 1)) * gauss_at_zero(p, j - i, alpha)?;
    let (a0, a1, a2) = lattice_multiplicities(p as u64, n, i, j)?;
    Ok([&scale * a0, &scale * a1, scale * a2])
}

/// `E|V_{l,n−l}(p²) = Σ_{i ≤ j} K_{i,j}^{l−i−n+j}` as a basis triple.
pub fn k_sum(n: i64, l: i64, m: i64, p: i64, k: i64) -> Result<Triple> {
    let mut acc = zero3();
    for j in 0..=n {
        for i in 0..=j {
            let t = k_combination(n, i, j, l - i - n + j, m, p, k)?;
            for (a, b) in acc.iter_mut().zip(t) {
                *a += b;
            }
        }
    }
    Ok(acc)
}

fn rational_matrix(rows: usize, cols: usize, v: Vec<Rational>) -> PolyMatrix {
    PolyMatrix::from_rationals(rows, cols, v).expect("shape")
}

/// `[[0, a0], [p^{−k}, a1], [0, a2]]·A_{2,n+1}^{p,k}`, the E-level relation matrix.
pub fn e_relation_matrix(m: i64, p: i64, k: i64, n: i64) -> Result<PolyMatrix> {
    let a = a_vector(m, p, k)?;
    let z = Rational::zero;
    let left = rational_matrix(3, 2, vec![z(), a.a0, pw(p, -k), a.a1, z(), a.a2]);
    left.mul(&build_a(n, Prime::Numeric(p as u64), k)?)
}

/// `[[0, 1], [p^{−k}, p^{−k}(−1 + pδ_{p|m})], [0, p^{2−2k}]]·A_{2,n+1}^{p,k}`.
pub fn theorem1_matrix(m: i64, p: i64, k: i64, n: i64) -> Result<PolyMatrix> {
    check_inputs(k, m, p)?;
    theorem1_matrix_any_weight(m, p, k, n)
}

/// [`theorem1_matrix`] without the weight check; the entries make sense for
/// every integer `k`, and the `A'` specialization lands on odd `k` too.
pub(crate) fn theorem1_matrix_any_weight(m: i64, p: i64, k: i64, n: i64) -> Result<PolyMatrix> {
    let delta = i64::from(m % p == 0);
    let z = Rational::zero;
    let left = rational_matrix(
        3,
        2,
        vec![z(), Rational::one(), pw(p, -k), pw(p, -k) * Rational::from(p * delta - 1), z(), pw(p, 2 - 2 * k)],
    );
    left.mul(&build_a(n, Prime::Numeric(p as u64), k)?)
}

fn rational_entry(m: &PolyMatrix, r: usize, c: usize) -> Result<Rational> {
    m.get(r, c).as_constant().ok_or_else(|| Error::Invariant(format!("entry ({r},{c}) is not a constant")))
}

fn expansion_witness(label: &str, lhs: &JacobiExpansion, rhs: &JacobiExpansion) -> Option<Witness> {
    lhs.first_difference(rhs).map(|(n, r)| Witness {
        key: format!("{label}({n},{r})"),
        lhs: lhs.get(n, r).map(|c| c.to_string()).unwrap_or_default(),
        rhs: rhs.get(n, r).map(|c| c.to_string()).unwrap_or_default(),
    })
}

/// Checks `φ|(V_{0,1}, V_{1,0}) = (b₀, b₁, b₂)·M` for a 3×2 matrix `M`.
fn compare_columns(phi: &JacobiExpansion, basis: &[JacobiExpansion; 3], mat: &PolyMatrix, p: i64, n_max: i64) -> Result<Option<Witness>> {
    for l in 0..2 {
        let lhs = apply_v_to(phi, l, p, n_max)?;
        let terms: Vec<(Rational, &JacobiExpansion)> =
            (0..3).map(|row| Ok((rational_entry(mat, row, l as usize)?, &basis[row]))).collect::<Result<_>>()?;
        let rhs = JacobiExpansion::linear_combination(&terms)?;
        if let Some(w) = expansion_witness(&format!("V{l}"), &lhs, &rhs) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// The three basis expansions `(f_{m/p²}|U(p²), f_m|U(p), f_{mp²})` at index
/// `mp²`, known for `n ≤ n_max`; the first is zero when `p² ∤ m`.
fn basis_forms(make: impl Fn(i64, i64) -> Result<JacobiExpansion>, k: i64, m: i64, p: i64, n_max: i64) -> Result<[JacobiExpansion; 3]> {
    let p2 = p * p;
    let b0 = if m % p2 == 0 {
        apply_u(&make(m / p2, n_max)?, p2)?
    } else {
        JacobiExpansion::zero(k, m * p2, n_max)
    };
    let b1 = apply_u(&make(m, n_max)?, p)?;
    let b2 = make(m * p2, n_max)?;
    Ok([b0, b1, b2])
}

/// The generalized Maass relation at degree one on the Fourier-Jacobi coefficients `e_{k,m}`,
/// coefficient-exact for `n ≤ n_max`.
pub fn verify_theorem1_n1(k: i64, m: i64, p: i64, n_max: i64) -> Result<VerificationReport> {
    verify_theorem1_n1_with(k, m, p, n_max, &fourier_jacobi)
}

/// [`verify_theorem1_n1`] drawing `e_{k,m}` truncated at `n` from `source(k, m, n)`.
pub fn verify_theorem1_n1_with(
    k: i64,
    m: i64,
    p: i64,
    n_max: i64,
    source: &dyn Fn(i64, i64, i64) -> Result<JacobiExpansion>,
) -> Result<VerificationReport> {
    check_inputs(k, m, p)?;
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
    }
    run_check("theorem1", json!({"k": k, "m": m, "p": p, "n_max": n_max}), || {
        let phi = source(k, m, p * p * n_max)?;
        let basis = basis_forms(|idx, n| source(k, idx, n), k, m, p, n_max)?;
        compare_columns(&phi, &basis, &theorem1_matrix(m, p, k, 1)?, p, n_max)
    })
}

/// `W(e_{k,m})|T(p²) = p^{2k−2}·W(e_{k,m}|V_{1,0}(p²))` for `n ≤ n_max`.
pub fn verify_wtv(k: i64, m: i64, p: i64, n_max: i64) -> Result<VerificationReport> {
    check_inputs(k, m, p)?;
    run_check("wtv", json!({"k": k, "m": m, "p": p, "n_max": n_max}), || {
        let phi = fourier_jacobi(k, m, p * p * n_max)?;
        let lhs = hecke_t_elliptic(&specialize_z0(&phi), k, p)?;
        let rhs = specialize_z0(&apply_v_to(&phi, 1, p, n_max)?).scale(&pw(p, 2 * k - 2));
        Ok(lhs.0.iter().zip(&rhs.0).enumerate().find(|(_, (a, b))| a != b).map(|(n, (a, b))| Witness {
            key: format!("q^{n}"),
            lhs: a.to_string(),
            rhs: b.to_string(),
        }))
    })
}

/// The degree-one relation for the normalized series `Ê_{k,m}` with the
/// a-vector matrix.
pub fn verify_e_v_one(k: i64, m: i64, p: i64, n_max: i64) -> Result<VerificationReport> {
    check_inputs(k, m, p)?;
    run_check("e-v-one", json!({"k": k, "m": m, "p": p, "n_max": n_max}), || {
        let phi = jacobi_eisenstein(k, m, p * p * n_max)?;
        let basis = basis_forms(|idx, n| jacobi_eisenstein(k, idx, n), k, m, p, n_max)?;
        compare_columns(&phi, &basis, &e_relation_matrix(m, p, k, 1)?, p, n_max)
    })
}

/// For `p² | m`: the K-sum of every `V_{l,n−l}` agrees with the columns of
/// the E-level relation matrix.
pub fn verify_e_k(n: i64, k: i64, m: i64, p: i64) -> Result<VerificationReport> {
    check_inputs(k, m, p)?;
    run_check("e-k", json!({"n": n, "k": k, "m": m, "p": p}), || {
        let mat = e_relation_matrix(m, p, k, n)?;
        for l in 0..=n {
            let sum = k_sum(n, l, m, p, k)?;
            for (row, s) in sum.iter().enumerate() {
                let expect = rational_entry(&mat, row, l as usize)?;
                if *s != expect {
                    return Ok(Some(Witness { key: format!("l={l},row={row}"), lhs: s.to_string(), rhs: expect.to_string() }));
                }
            }
        }
        Ok(None)
    })
}

/// Formal span of `Ê_{k,μ}|U(u)`. Symbols carry a rational index `μ`; a
/// nonzero coefficient at a non-integral index is an error.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FormalCombo {
    terms: BTreeMap<(Rational, i64), Rational>,
}

impl FormalCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: Rational, u_scale: i64, c: &Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !index.is_integer() || index.is_zero() || index.is_negative() {
            return Err(Error::Invariant(format!("nonzero coefficient at index {index}")));
        }
        let e = self.terms.entry((index, u_scale)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(key) = key {
                self.terms.remove(&key);
            }
        }
        Ok(())
    }

    /// Adds `c·e_{k,M}|U(u)` expanded by `e_M = Σ_{d²|M} g_k(M/d²)·Ê_{M/d²}|U(d)`.
    /// A non-integral `M` contributes nothing.
    pub fn add_e(&mut self, k: i64, index: &Rational, u_scale: i64, c: &Rational) -> Result<()> {
        if !index.is_integer() {
            return Ok(());
        }
        let m = index.to_i64().ok_or_else(|| Error::InvalidArgument(format!("index {index} too large")))?;
        let mut d = 1;
        while d * d <= m {
            if m % (d * d) == 0 {
                self.add(Rational::from(m / (d * d)), u_scale * d, &(c * g_k(k, m / (d * d))?))?;
            }
            d += 1;
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<(Rational, i64), Rational> {
        &self.terms
    }

    fn first_difference(&self, other: &Self) -> Option<Witness> {
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        let zero = Rational::zero();
        keys.into_iter().find(|k| self.terms.get(k) != other.terms.get(k)).map(|k| Witness {
            key: format!("E_{}|U({})", k.0, k.1),
            lhs: self.terms.get(k).unwrap_or(&zero).to_string(),
            rhs: other.terms.get(k).unwrap_or(&zero).to_string(),
        })
    }
}

impl fmt::Debug for FormalCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|((i, u), c)| (format!("E_{i}|U({u})"), c))).finish()
    }
}

/// `Σ_{d²|m} g_k(m/d²)·(E_{m/p²d²}|U(p²d), E_{m/d²}|U(pd), E_{mp²/d²}|U(d))·v(m/d²)`.
fn sum_over_squares(k: i64, m: i64, p: i64, v: impl Fn(i64) -> Result<Triple>) -> Result<FormalCombo> {
    let mut out = FormalCombo::new();
    let p2 = p * p;
    let mut d = 1;
    while d * d <= m {
        if m % (d * d) == 0 {
            let md = m / (d * d);
            let g = g_k(k, md)?;
            let [c0, c1, c2] = v(md)?;
            out.add(Rational::frac(md, p2), p2 * d, &(&g * c0))?;
            out.add(Rational::from(md), p * d, &(&g * c1))?;
            out.add(Rational::from(md * p2), d, &(&g * c2))?;
        }
        d += 1;
    }
    Ok(out)
}

/// `(e_{m/p²}|U(p²), e_m|U(p), e_{mp²})·(1, p^{−k}(−1+pδ_{p|m}), p^{2−2k})` in the Ê-basis.
fn sum_eu_rhs(k: i64, m: i64, p: i64) -> Result<FormalCombo> {
    let p2 = p * p;
    let delta = i64::from(m % p == 0);
    let mut out = FormalCombo::new();
    out.add_e(k, &Rational::frac(m, p2), p2, &Rational::one())?;
    out.add_e(k, &Rational::from(m), p, &(pw(p, -k) * Rational::from(p * delta - 1)))?;
    out.add_e(k, &Rational::from(m * p2), 1, &pw(p, 2 - 2 * k))?;
    Ok(out)
}

/// `Σ g_k·E|U` as an identity of formal combinations.
pub fn verify_sum_eu(k: i64, m: i64, p: i64) -> Result<VerificationReport> {
    check_inputs(k, m, p)?;
    run_check("sum-eu", json!({"k": k, "m": m, "p": p}), || {
        let lhs = sum_over_squares(k, m, p, |md| Ok(a_vector(md, p, k)?.as_array()))?;
        Ok(lhs.first_difference(&sum_eu_rhs(k, m, p)?))
    })
}

/// Same identity with the a-vector replaced by `K_{0,0}⁰ + K_{0,1}¹ + K_{1,1}⁰`.
pub fn verify_consistency_triangle(k: i64, m: i64, p: i64) -> Result<VerificationReport> {
    check_inputs(k, m, p)?;
    run_check("consistency-triangle", json!({"k": k, "m": m, "p": p}), || {
        let lhs = sum_over_squares(k, m, p, |md| k_sum(1, 1, md, p, k))?;
        Ok(lhs.first_difference(&sum_eu_rhs(k, m, p)?))
    })
}

/// Diagonal `g_k(m/d²)` of the triangular system defining `Ê_{k,m}`.
pub fn bo_satz_diagonal(k: i64, m: i64) -> Result<Vec<(i64, Rational)>> {
    if m < 1 {
        return Err(Error::NonPositiveIndex);
    }
    (1..).take_while(|d| d * d <= m).filter(|d| m % (d * d) == 0).map(|d| Ok((d, g_k(k, m / (d * d))?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_vector_cases() {
        let a = a_vector(4, 2, 4).unwrap();
        assert_eq!(a.as_array(), [Rational::frac(1, 64), Rational::frac(1, 16), Rational::one()]);
        let b = a_vector(2, 2, 4).unwrap();
        assert_eq!(b.as_array(), [Rational::zero(), Rational::frac(1, 64) + Rational::frac(1, 8) - Rational::frac(1, 16), Rational::one()]);
        let c = a_vector(3, 2, 4).unwrap();
        assert_eq!(c.case, ACase::Coprime);
        assert_eq!(c.a2, Rational::frac(9, 8));
    }

    #[test]
    fn k_sum_is_a_vector_at_degree_one() {
        for p in [2i64, 3, 5] {
            for m in 1..=30 {
                let a = a_vector(m, p, 6).unwrap();
                assert_eq!(k_sum(1, 1, m, p, 6).unwrap(), a.as_array(), "m={m} p={p}");
                let v01 = k_sum(1, 0, m, p, 6).unwrap();
                assert_eq!(v01, [Rational::zero(), pw(p, -6), Rational::zero()]);
            }
        }
    }

    #[test]
    fn general_degree_needs_square() {
        assert_eq!(k_combination(2, 0, 1, 1, 3, 2, 4), Err(Error::NoClosedForm));
        assert!(k_combination(2, 0, 1, 1, 4, 2, 4).is_ok());
    }

    #[test]
    fn relation_matrix_degree_one() {
        let t = theorem1_matrix(1, 2, 4, 1).unwrap();
        let v = t.as_rationals().unwrap();
        assert_eq!(v, vec![Rational::zero(), Rational::one(), Rational::frac(1, 16), Rational::frac(-1, 16), Rational::zero(), Rational::frac(1, 64)]);
        let t2 = theorem1_matrix(2, 2, 4, 1).unwrap();
        assert_eq!(t2.as_rationals().unwrap()[3], Rational::frac(1, 16));
        assert_eq!(theorem1_matrix(1, 2, 4, 2).unwrap().cols(), 3);
    }

    #[test]
    fn formal_combo_rejects_fractional_index() {
        let mut f = FormalCombo::new();
        assert!(f.add(Rational::frac(1, 4), 4, &Rational::one()).is_err());
        f.add(Rational::frac(1, 4), 4, &Rational::zero()).unwrap();
        f.add(Rational::from(2), 1, &Rational::one()).unwrap();
        f.add(Rational::from(2), 1, &-Rational::one()).unwrap();
        assert!(f.terms().is_empty());
    }

    #[test]
    fn small_end_to_end() {
        assert!(verify_theorem1_n1(4, 1, 2, 2).unwrap().passed());
        assert!(verify_sum_eu(4, 4, 2).unwrap().passed());
    }
}
