use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{cohen_h, divisors, sigma, zeta_one_minus};
use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// Half-integral `T = [[n, r/2], [r/2, m]]`.
pub type HalfIntegral = (i64, i64, i64);

fn check_weight(k: i64) -> Result<()> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::WeightOutOfRange(k));
    }
    Ok(())
}

pub fn is_psd(n: i64, r: i64, m: i64) -> bool {
    n >= 0 && m >= 0 && 4 * n * m - r * r >= 0
}

/// Largest `|r|` with `4nm − r² ≥ 0`.
pub fn r_bound(n: i64, m: i64) -> i64 {
    let disc = 4 * n * m;
    let mut r = (disc as f64).sqrt() as i64;
    while r * r > disc {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= disc {
        r += 1;
    }
    r
}

/// Fourier coefficient `a(T)` of the degree-2 Siegel Eisenstein series of
/// weight `k`, normalized by `a(0) = 1`.
pub fn siegel2_coeff(k: i64, t: HalfIntegral) -> Result<Rational> {
    check_weight(k)?;
    let (n, r, m) = t;
    if !is_psd(n, r, m) {
        return Err(Error::InvalidArgument(format!("({n},{r},{m}) is not positive semi-definite")));
    }
    if n == 0 && r == 0 && m == 0 {
        return Ok(Rational::one());
    }
    let content = n.gcd(&r).gcd(&m);
    let zk = zeta_one_minus(k as usize);
    let disc = 4 * n * m - r * r;
    if disc == 0 {
        return Ok(Rational::from(2) / zk * Rational::from(sigma((k - 1) as u32, content)));
    }
    let z2 = zeta_one_minus((2 * k - 2) as usize);
    let mut s = Rational::zero();
    for d in divisors(content) {
        s += Rational::int_pow(d, k - 1) * cohen_h(k - 1, disc / (d * d))?;
    }
    Ok(Rational::from(2) / (zk * z2) * s)
}

/// Truncated expansion holding every `T` with `max(n, m) ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelExpansion2 {
    pub weight: i64,
    pub bound: i64,
    pub coeffs: BTreeMap<HalfIntegral, Rational>,
}

impl SiegelExpansion2 {
    pub fn get(&self, t: HalfIntegral) -> Option<&Rational> {
        self.coeffs.get(&t)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(&(n, r, m), c)| json!([n, r, m, c.to_string()]))
            .collect();
        json!({"weight": self.weight, "bound": self.bound, "coeffs": coeffs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("siegel expansion: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        let int = |key: &str| obj.get(key).and_then(Value::as_i64).ok_or_else(|| bad(&format!("missing integer {key}")));
        let weight = int("weight")?;
        let bound = int("bound")?;
        if bound < 0 {
            return Err(bad("negative bound"));
        }
        let list = obj.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
        let mut coeffs = BTreeMap::new();
        for e in list {
            let a = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("entry must be [n, r, m, c]"))?;
            let ints: Vec<i64> = a[..3]
                .iter()
                .map(|x| x.as_i64().filter(|v| v.abs() < 1 << 20).ok_or_else(|| bad("index not a small integer")))
                .collect::<Result<_>>()?;
            let (n, r, m) = (ints[0], ints[1], ints[2]);
            if !is_psd(n, r, m) || n.max(m) > bound {
                return Err(bad("index outside the support"));
            }
            let c: Rational = a[3].as_str().ok_or_else(|| bad("coefficient not a string"))?.parse()?;
            if coeffs.insert((n, r, m), c).is_some() {
                return Err(bad("duplicate index"));
            }
        }
        Ok(SiegelExpansion2 { weight, bound, coeffs })
    }
}

/// All coefficients with `max(n, m) ≤ bound`, computed in parallel.
pub fn siegel2_expand(k: i64, bound: i64) -> Result<SiegelExpansion2> {
    check_weight(k)?;
    if bound < 0 {
        return Err(Error::InvalidArgument(format!("negative bound {bound}")));
    }
    let keys: Vec<HalfIntegral> = (0..=bound)
        .flat_map(|n| (0..=bound).map(move |m| (n, m)))
        .flat_map(|(n, m)| {
            let rb = r_bound(n, m);
            (-rb..=rb).map(move |r| (n, r, m))
        })
        .collect();
    let values: Vec<(HalfIntegral, Rational)> = keys
        .into_par_iter()
        .map(|t| siegel2_coeff(k, t).map(|c| (t, c)))
        .collect::<Result<_>>()?;
    Ok(SiegelExpansion2 { weight: k, bound, coeffs: values.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_four_values() {
        assert_eq!(siegel2_coeff(4, (0, 0, 0)).unwrap(), Rational::one());
        assert_eq!(siegel2_coeff(4, (1, 0, 0)).unwrap(), Rational::from(240));
        assert_eq!(siegel2_coeff(4, (1, 1, 1)).unwrap(), Rational::from(13440));
        assert_eq!(siegel2_coeff(4, (1, 0, 1)).unwrap(), Rational::from(30240));
        assert_eq!(siegel2_coeff(4, (1, 2, 1)).unwrap(), Rational::from(240));
    }

    #[test]
    fn weight_errors() {
        assert_eq!(siegel2_coeff(5, (0, 0, 0)), Err(Error::WeightOutOfRange(5)));
        assert_eq!(siegel2_coeff(2, (0, 0, 0)), Err(Error::WeightOutOfRange(2)));
        assert!(siegel2_coeff(4, (1, 3, 1)).is_err());
    }

    #[test]
    fn class_invariance() {
        let e = siegel2_expand(6, 3).unwrap();
        for (&(n, r, m), c) in &e.coeffs {
            assert_eq!(e.get((m, r, n)), Some(c));
            assert_eq!(e.get((n, -r, m)), Some(c));
        }
        let back = SiegelExpansion2::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn r_bounds() {
        assert_eq!(r_bound(1, 1), 2);
        assert_eq!(r_bound(2, 3), 4);
        assert_eq!(r_bound(0, 5), 0);
    }
}
