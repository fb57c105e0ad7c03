//! Satake parameters of the lifts `F_{f,g}`, their Euler factors, and the
//! polynomial identities linking Hecke eigenvalues, `A'` and L-functions.
//!
//! Symbols: `a = α_p` for the elliptic form `f`, `b = β_p` for `g`, and
//! `q = √p`. When `p` is a concrete prime the half-integral powers are
//! absorbed into `A = a·√p`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, PolyMatrix, Prime, Rational, SQRT_P};
use crate::relations::theorem1_matrix_any_weight;
use crate::report::{run_check, VerificationReport, Witness};
use crate::qexp::{elliptic_eisenstein, hecke_t_elliptic};
use crate::satake::{build_a, build_aprime, eigenvalue_at, eisenstein_satake, value_at_ones, SatakeVector, U_VAR};

pub const A_VAR: &str = "a";
pub const B_VAR: &str = "b";
/// `a·√p`, used in place of `a` when `p` is numeric.
pub const A_HALF_VAR: &str = "A";
pub const T_VAR: &str = "T";

fn mono(exps: &[(&str, i32)]) -> LaurentPoly {
    LaurentPoly::monomial(exps, Rational::one())
}

/// Satake parameters of `F_{f,g}` (degree `2n−1`, weight `k+n`):
/// `μ₁ = b²` and `α_p·p^{i−n+1/2}` for `i = 1..2n−2`, with
/// `μ₀² μ₁⋯μ_{2n−1} = p^{(2n−1)k}`.
pub fn miyawaki_satake(n: i64, k: i64, p: Prime) -> Result<SatakeVector> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("n must be positive, got {n}")));
    }
    let mut mu = vec![mono(&[(B_VAR, 2)])];
    for i in 1..=2 * n - 2 {
        mu.push(match p {
            Prime::Formal => mono(&[(A_VAR, 1), (SQRT_P, (2 * i - 2 * n + 1) as i32)]),
            Prime::Numeric(_) => mono(&[(A_HALF_VAR, 1)]) * p.pow(i - n),
        });
    }
    let prod: LaurentPoly = mu.iter().cloned().product();
    let mu0_sq = p.pow((2 * n - 1) * k) * prod.inverse()?;
    SatakeVector::new(mu0_sq, mu)
}

/// Reciprocal Euler polynomial in `T = p^{−s}` with constant term 1.
#[derive(Clone, PartialEq, Eq)]
pub struct EulerFactor(LaurentPoly);

impl EulerFactor {
    pub fn new(poly: LaurentPoly) -> Result<Self> {
        let by_t = poly.coefficients_in(T_VAR);
        if by_t.keys().any(|&e| e < 0) {
            return Err(Error::Invariant("Euler factor has negative powers of T".into()));
        }
        if by_t.get(&0) != Some(&LaurentPoly::one()) {
            return Err(Error::Invariant("Euler factor must have constant term 1".into()));
        }
        Ok(EulerFactor(poly))
    }

    pub fn one() -> Self {
        EulerFactor(LaurentPoly::one())
    }

    /// `1 − μT`.
    pub fn linear(mu: &LaurentPoly) -> Self {
        EulerFactor(LaurentPoly::one() - mu * &LaurentPoly::var(T_VAR))
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn degree(&self) -> i32 {
        self.0.degree_range(T_VAR).map_or(0, |(_, hi)| hi)
    }

    pub fn mul(&self, other: &EulerFactor) -> EulerFactor {
        EulerFactor(&self.0 * &other.0)
    }

    /// The factor of `L(s + c)`: `T ↦ T·p^{−c}`.
    pub fn shift(&self, c: i64, p: Prime) -> Result<EulerFactor> {
        let at: BTreeMap<String, LaurentPoly> = [(T_VAR.to_string(), p.pow(-c) * LaurentPoly::var(T_VAR))].into();
        Ok(EulerFactor(self.0.substitute(&at)?))
    }

    pub fn substitute(&self, at: &BTreeMap<String, LaurentPoly>) -> Result<EulerFactor> {
        EulerFactor::new(self.0.substitute(at)?)
    }
}

impl fmt::Debug for EulerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EulerFactor({})", self.0)
    }
}

/// `(1 − T)·Π_i (1 − μ_i T)(1 − μ_i⁻¹ T)`.
pub fn standard_l_factor(sv: &SatakeVector) -> Result<EulerFactor> {
    let mut f = EulerFactor::linear(&LaurentPoly::one());
    for mu in &sv.mu {
        f = f.mul(&EulerFactor::linear(mu)).mul(&EulerFactor::linear(&mu.inverse()?));
    }
    Ok(f)
}

/// `(1 − α_p p^{k−1/2} T)(1 − α_p⁻¹ p^{k−1/2} T)` for `f` of weight `2k`.
pub fn hecke_l_factor(k: i64) -> EulerFactor {
    let c = mono(&[(SQRT_P, (2 * k - 1) as i32)]);
    EulerFactor::linear(&(mono(&[(A_VAR, 1)]) * &c)).mul(&EulerFactor::linear(&(mono(&[(A_VAR, -1)]) * &c)))
}

/// `(1 − T)(1 − β_p² T)(1 − β_p⁻² T)`.
pub fn adjoint_l_factor() -> EulerFactor {
    EulerFactor::linear(&LaurentPoly::one())
        .mul(&EulerFactor::linear(&mono(&[(B_VAR, 2)])))
        .mul(&EulerFactor::linear(&mono(&[(B_VAR, -2)])))
}

/// `L(s, g, Ad)·Π_{i=1}^{2n−2} L(s + k + n − 1 − i, f)` as one Euler factor.
pub fn corollary4_rhs(n: i64, k: i64) -> Result<EulerFactor> {
    let h = hecke_l_factor(k);
    let mut f = adjoint_l_factor();
    for i in 1..=2 * n - 2 {
        f = f.mul(&h.shift(k + n - 1 - i, Prime::Formal)?);
    }
    Ok(f)
}

fn poly_witness(key: String, lhs: &LaurentPoly, rhs: &LaurentPoly) -> Option<Witness> {
    (lhs != rhs).then(|| Witness { key, lhs: lhs.to_string(), rhs: rhs.to_string() })
}

/// Standard Euler factor of `F_{f,g}` against the adjoint factor of `g` times
/// shifted Hecke factors of `f`.
pub fn verify_corollary4(n: i64, k: i64) -> Result<VerificationReport> {
    run_check("corollary4", json!({"n": n, "k": k}), || {
        let lhs = standard_l_factor(&miyawaki_satake(n, k, Prime::Formal)?)?;
        let rhs = corollary4_rhs(n, k)?;
        Ok(poly_witness("L_p(T)".into(), lhs.poly(), rhs.poly()))
    })
}

/// `λ_g(p²) = p^{k+n−2}(p·b² + (p − 1) + p·b⁻²)`.
pub fn lambda_g(n: i64, k: i64, p: Prime) -> LaurentPoly {
    let pp = p.pow(1);
    p.pow(k + n - 2) * (&pp * &mono(&[(B_VAR, 2)]) + (&pp - &LaurentPoly::one()) + &pp * &mono(&[(B_VAR, -2)]))
}

/// Eigenvalues of `T_{l,2n−1−l}(p²)` on `F_{f,g}`, `l = 0..2n−1`.
pub fn theorem3_lhs(n: i64, k: i64, p: Prime) -> Result<Vec<LaurentPoly>> {
    let sv = miyawaki_satake(n, k, p)?;
    (0..2 * n).map(|l| eigenvalue_at(&sv, l, p)).collect()
}

/// `p^{2nk+n−1}·(p^{−k−n}, p^{−2k−2n+2}λ_g(p²))·A'_{2,2n}(α_p)`.
pub fn theorem3_rhs(n: i64, k: i64, p: Prime) -> Result<Vec<LaurentPoly>> {
    let u = match p {
        Prime::Formal => mono(&[(SQRT_P, 1), (A_VAR, 1)]),
        Prime::Numeric(_) => mono(&[(A_HALF_VAR, 1)]),
    };
    let at: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), u)].into();
    let aprime = build_aprime(n, p)?.substitute(&at)?;
    let left = PolyMatrix::new(1, 2, vec![p.pow(-k - n), p.pow(-2 * k - 2 * n + 2) * lambda_g(n, k, p)])?;
    Ok(left.mul(&aprime)?.scale(&p.pow(2 * n * k + n - 1)).row(0))
}

/// Eigenvalue row of the lift against `A'` as an identity in `Q[q^±, a^±, b^±]` (formal `p`) or in
/// `Q[A^±, b^±]` (numeric `p`).
pub fn verify_theorem3(n: i64, k: i64, p: Prime) -> Result<VerificationReport> {
    run_check("theorem3", json!({"n": n, "k": k, "p": p.to_string()}), || {
        let lhs = theorem3_lhs(n, k, p)?;
        let rhs = theorem3_rhs(n, k, p)?;
        Ok(lhs.iter().zip(&rhs).enumerate().find_map(|(l, (a, b))| poly_witness(format!("l={l}"), a, b)))
    })
}

/// Eigenvalue of `T_{1,0}(p²)` on elliptic `E_k` read off the operator on
/// q-expansions, against the Satake image at `μ₁ = p^{k−1}`.
pub fn verify_eisenstein_eigenvalue(k: i64, p: u64) -> Result<VerificationReport> {
    run_check("eisenstein-eigenvalue", json!({"k": k, "p": p}), || {
        let pi = p as i64;
        let f = elliptic_eisenstein(k, (3 * pi * pi + 1) as usize)?;
        let image = hecke_t_elliptic(&f, k, pi)?;
        let direct = image.0[0].clone();
        if image != f.truncate_to(image.len()).scale(&direct) {
            return Ok(Some(Witness { key: "eigenform".into(), lhs: format!("{:?}", image.0), rhs: direct.to_string() }));
        }
        let prime = Prime::Numeric(p);
        let ev = value_at_ones(&eigenvalue_at(&eisenstein_satake(k, prime), 1, prime)?);
        Ok((ev != direct).then(|| Witness { key: "lambda".into(), lhs: direct.to_string(), rhs: ev.to_string() }))
    })
}

fn matrix_witness(label: &str, lhs: &PolyMatrix, rhs: &PolyMatrix) -> Option<Witness> {
    if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
        return Some(Witness { key: format!("{label}:shape"), lhs: format!("{}x{}", lhs.rows(), lhs.cols()), rhs: format!("{}x{}", rhs.rows(), rhs.cols()) });
    }
    for r in 0..lhs.rows() {
        for c in 0..lhs.cols() {
            if let Some(w) = poly_witness(format!("{label}:({r},{c})"), lhs.get(r, c), rhs.get(r, c)) {
                return Some(w);
            }
        }
    }
    None
}

/// `A'` at `X_p = p^{−(k−1/2)}`, i.e. `u = p^{1−k}`, scaled by `p^{−(n−1)(2k−1)}`.
fn aprime_at_weight(n: i64, k: i64, p: Prime) -> Result<PolyMatrix> {
    let at: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), p.pow(1 - k))].into();
    Ok(build_aprime(n, p)?.substitute(&at)?.scale(&p.pow(-(n - 1) * (2 * k - 1))))
}

/// The `A'`-matrix identities: `A_{2,2n}^{p,k+n} = p^{−(n−1)(2k−1)}A'(p^{−(k−1/2)})`,
/// palindromy `A'(u) = A'(p/u)`, and the specialization of the `A'`-form of
/// the relation matrix to `theorem1_matrix(m, p, k+n, 2n−1)` for `p ∤ m` and `p | m`.
pub fn verify_matrix_identities(n: i64, ks: &[i64], ps: &[u64]) -> Result<VerificationReport> {
    run_check("matrix-identities", json!({"n": n, "k": ks, "p": ps}), || {
        let formal = build_aprime(n, Prime::Formal)?;
        let flip: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), mono(&[(SQRT_P, 2), (U_VAR, -1)]))].into();
        if let Some(w) = matrix_witness("palindromy:q", &formal.substitute(&flip)?, &formal) {
            return Ok(Some(w));
        }
        for &pn in ps {
            let p = Prime::Numeric(pn);
            let ap = build_aprime(n, p)?;
            let flip: BTreeMap<String, LaurentPoly> =
                [(U_VAR.to_string(), LaurentPoly::monomial(&[(U_VAR, -1)], Rational::from(pn as i64)))].into();
            if let Some(w) = matrix_witness(&format!("palindromy:p={pn}"), &ap.substitute(&flip)?, &ap) {
                return Ok(Some(w));
            }
            for &k in ks {
                let spec = aprime_at_weight(n, k, p)?;
                if let Some(w) = matrix_witness(&format!("adash:p={pn},k={k}"), &build_a(2 * n - 1, p, k + n)?, &spec) {
                    return Ok(Some(w));
                }
                let pi = pn as i64;
                for (delta, m) in [(0i64, 1i64), (1, pi)] {
                    let w8 = k + n;
                    let c = |e: i64| p.pow(e);
                    let left = PolyMatrix::new(
                        3,
                        2,
                        vec![
                            LaurentPoly::zero(),
                            LaurentPoly::one(),
                            c(-w8),
                            c(-w8) * LaurentPoly::from(pi * delta - 1),
                            LaurentPoly::zero(),
                            c(2 - 2 * w8),
                        ],
                    )?;
                    let lhs = left.mul(&spec)?;
                    let rhs = theorem1_matrix_any_weight(m, pi, k + n, 2 * n - 1)?;
                    if let Some(w) = matrix_witness(&format!("specialization:p={pn},k={k},delta={delta}"), &lhs, &rhs) {
                        return Ok(Some(w));
                    }
                }
            }
        }
        Ok(None)
    })
}
