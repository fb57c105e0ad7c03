use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::siegel::{r_bound, siegel2_coeff, SiegelExpansion2};
use crate::arith::g_k;
use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// Truncated Jacobi form `Σ c(n, r) qⁿ ζʳ` of fixed weight and index.
///
/// Coefficients are known for every `n ≤ n_complete`; absent keys are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct JacobiExpansion {
    weight: i64,
    index: i64,
    n_complete: i64,
    coeffs: BTreeMap<(i64, i64), Rational>,
}

impl JacobiExpansion {
    /// Validates support (`4nm − r² ≥ 0`, `0 ≤ n ≤ n_complete`) and
    /// symmetry `c(n, r) = c(n, −r)`. Zero coefficients are dropped.
    pub fn new(weight: i64, index: i64, n_complete: i64, coeffs: BTreeMap<(i64, i64), Rational>) -> Result<Self> {
        if index < 0 {
            return Err(Error::InvalidArgument(format!("negative index {index}")));
        }
        if n_complete < 0 {
            return Err(Error::InvalidArgument(format!("negative n_complete {n_complete}")));
        }
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (&(n, r), c) in &coeffs {
            if n < 0 || n > n_complete {
                return Err(Error::Invariant(format!("coefficient at n={n} outside 0..={n_complete}")));
            }
            if 4 * n * index - r * r < 0 {
                return Err(Error::Invariant(format!("coefficient at ({n},{r}) has 4nm - r^2 < 0")));
            }
            if coeffs.get(&(n, -r)) != Some(c) {
                return Err(Error::Invariant(format!("c({n},{r}) != c({n},{})", -r)));
            }
        }
        Ok(JacobiExpansion { weight, index, n_complete, coeffs })
    }

    pub fn zero(weight: i64, index: i64, n_complete: i64) -> Self {
        JacobiExpansion { weight, index, n_complete, coeffs: BTreeMap::new() }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    pub fn n_complete(&self) -> i64 {
        self.n_complete
    }

    pub fn coeffs(&self) -> &BTreeMap<(i64, i64), Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `c(n, r)`, or an error when `n` lies beyond the known range.
    pub fn get(&self, n: i64, r: i64) -> Result<Rational> {
        if n > self.n_complete {
            return Err(Error::InsufficientPrecision { required: n, available: self.n_complete });
        }
        Ok(self.coeffs.get(&(n, r)).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn truncate(&self, n_complete: i64) -> Result<Self> {
        if n_complete > self.n_complete {
            return Err(Error::InsufficientPrecision { required: n_complete, available: self.n_complete });
        }
        let coeffs = self.coeffs.iter().filter(|((n, _), _)| *n <= n_complete).map(|(k, v)| (*k, v.clone())).collect();
        Ok(JacobiExpansion { n_complete, coeffs, ..*self })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight || self.index != other.index {
            return Err(Error::IndexMismatch(self.index, other.index));
        }
        Ok(())
    }

    /// `Σ cᵢ·φᵢ`; the result is known up to the smallest `n_complete`.
    pub fn linear_combination(terms: &[(Rational, &JacobiExpansion)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let mut n_complete = first.n_complete;
        for (_, f) in terms {
            first.check_compatible(f)?;
            n_complete = n_complete.min(f.n_complete);
        }
        let mut acc: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for (c, f) in terms {
            if c.is_zero() {
                continue;
            }
            for (&(n, r), v) in &f.coeffs {
                if n <= n_complete {
                    *acc.entry((n, r)).or_insert_with(Rational::zero) += c * v;
                }
            }
        }
        JacobiExpansion::new(first.weight, first.index, n_complete, acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| !v.is_zero()).collect();
        JacobiExpansion { coeffs, ..*self }
    }

    /// First `(n, r)` where the two expansions differ, comparing up to the
    /// common `n_complete`.
    pub fn first_difference(&self, other: &Self) -> Option<(i64, i64)> {
        if self.weight != other.weight || self.index != other.index {
            return Some((-1, 0));
        }
        let bound = self.n_complete.min(other.n_complete);
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).filter(|(n, _)| *n <= bound).collect();
        keys.into_iter().find(|k| self.coeffs.get(k) != other.coeffs.get(k)).copied()
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs.iter().map(|(&(n, r), c)| json!([n, r, c.to_string()])).collect();
        json!({
            "weight": self.weight,
            "index": self.index,
            "n_complete": self.n_complete,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("jacobi expansion: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        let int = |key: &str| {
            obj.get(key)
                .and_then(Value::as_i64)
                .filter(|x| x.abs() < 1 << 20)
                .ok_or_else(|| bad(&format!("missing or oversized integer {key}")))
        };
        let (weight, index, n_complete) = (int("weight")?, int("index")?, int("n_complete")?);
        let list = obj.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
        let mut coeffs = BTreeMap::new();
        for e in list {
            let a = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("entry must be [n, r, c]"))?;
            let n = a[0].as_i64().filter(|x| x.abs() < 1 << 20).ok_or_else(|| bad("n not a small integer"))?;
            let r = a[1].as_i64().filter(|x| x.abs() < 1 << 20).ok_or_else(|| bad("r not a small integer"))?;
            let c: Rational = a[2].as_str().ok_or_else(|| bad("coefficient not a string"))?.parse()?;
            if coeffs.insert((n, r), c).is_some() {
                return Err(bad("duplicate index"));
            }
        }
        JacobiExpansion::new(weight, index, n_complete, coeffs)
    }
}

impl fmt::Debug for JacobiExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JacobiExpansion(k={}, m={}, n<={}, {:?})", self.weight, self.index, self.n_complete, self.coeffs)
    }
}

/// `m`-th Fourier-Jacobi coefficient of the degree-2 Siegel Eisenstein
/// series, computed coefficient by coefficient for `n ≤ n_max`.
pub fn fourier_jacobi(k: i64, m: i64, n_max: i64) -> Result<JacobiExpansion> {
    if m < 0 || n_max < 0 {
        return Err(Error::InvalidArgument(format!("fourier_jacobi m={m} n_max={n_max}")));
    }
    let keys: Vec<(i64, i64)> = (0..=n_max).flat_map(|n| {
        let rb = r_bound(n, m);
        (-rb..=rb).map(move |r| (n, r))
    }).collect();
    let coeffs: BTreeMap<_, _> = keys
        .into_par_iter()
        .map(|(n, r)| siegel2_coeff(k, (n, r, m)).map(|c| ((n, r), c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();
    JacobiExpansion::new(k, m, n_max, coeffs)
}

/// Same as [`fourier_jacobi`] but read off a precomputed expansion.
pub fn fourier_jacobi_from(e: &SiegelExpansion2, m: i64, n_max: i64) -> Result<JacobiExpansion> {
    let need = m.max(n_max);
    if need > e.bound {
        return Err(Error::InsufficientPrecision { required: need, available: e.bound });
    }
    let mut coeffs = BTreeMap::new();
    for n in 0..=n_max {
        let rb = r_bound(n, m);
        for r in -rb..=rb {
            let c = e.get((n, r, m)).ok_or_else(|| Error::Invariant(format!("missing ({n},{r},{m})")))?;
            coeffs.insert((n, r), c.clone());
        }
    }
    JacobiExpansion::new(e.weight, m, n_max, coeffs)
}

/// `φ|U(d)`: `c'(n, r) = c(n, r/d)`, index `m·d²`.
pub fn apply_u(phi: &JacobiExpansion, d: i64) -> Result<JacobiExpansion> {
    if d < 1 {
        return Err(Error::NonPositiveIndex);
    }
    let coeffs = phi.coeffs.iter().map(|(&(n, r), c)| ((n, r * d), c.clone())).collect();
    JacobiExpansion::new(phi.weight, phi.index * d * d, phi.n_complete, coeffs)
}

/// Normalized Jacobi Eisenstein series `Ê_{k,m}`, defined by
/// `e_{k,m} = Σ_{d²|m} g_k(m/d²)·Ê_{k,m/d²}|U(d)` and solved for the top
/// term by triangular inversion.
pub fn jacobi_eisenstein(k: i64, m: i64, n_max: i64) -> Result<JacobiExpansion> {
    if m < 1 {
        return Err(Error::NonPositiveIndex);
    }
    let e = fourier_jacobi(k, m, n_max)?;
    let mut terms = vec![(Rational::one(), e)];
    let mut d = 2;
    while d * d <= m {
        if m % (d * d) == 0 {
            let lower = apply_u(&jacobi_eisenstein(k, m / (d * d), n_max)?, d)?;
            terms.push((-g_k(k, m / (d * d))?, lower));
        }
        d += 1;
    }
    let refs: Vec<(Rational, &JacobiExpansion)> = terms.iter().map(|(c, f)| (c.clone(), f)).collect();
    let top = JacobiExpansion::linear_combination(&refs)?;
    Ok(top.scale(&g_k(k, m)?.recip()?))
}

/// Truncated power series `Σ_{n ≤ len-1} aₙ qⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries(pub Vec<Rational>);

impl QSeries {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries(self.0.iter().map(|a| a * c).collect())
    }

    pub fn truncate_to(&self, len: usize) -> QSeries {
        QSeries(self.0.iter().take(len).cloned().collect())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|c| Value::String(c.to_string())).collect())
    }
}

/// `W(φ)(τ) = φ(τ, 0)`, known for `n ≤ n_complete`.
pub fn specialize_z0(phi: &JacobiExpansion) -> QSeries {
    let mut a = vec![Rational::zero(); (phi.n_complete + 1) as usize];
    for (&(n, _), c) in &phi.coeffs {
        a[n as usize] += c;
    }
    QSeries(a)
}
