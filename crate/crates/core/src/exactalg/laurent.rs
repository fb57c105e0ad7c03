use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Sparse multivariate Laurent polynomial with rational coefficients.
///
/// Kept canonical: the variable list is sorted, contains only variables that
/// occur with a nonzero exponent, and no stored coefficient is zero. Structural
/// equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i32>, Rational>,
}

/// Exponent vector keyed by variable name.
pub type Monomial = BTreeMap<String, i32>;

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(&[(name, 1)], Rational::one())
    }

    pub fn monomial(exps: &[(&str, i32)], c: Rational) -> Self {
        let mut m = Monomial::new();
        for &(v, e) in exps {
            *m.entry(v.to_string()).or_insert(0) += e;
        }
        Self::from_monomials([(m, c)])
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_monomials(items: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let items: Vec<(Monomial, Rational)> = items.into_iter().collect();
        let vars: BTreeSet<&String> = items
            .iter()
            .flat_map(|(m, _)| m.iter().filter(|(_, &e)| e != 0).map(|(v, _)| v))
            .collect();
        let vars: Vec<String> = vars.into_iter().cloned().collect();
        let mut terms: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (m, c) in items {
            if c.is_zero() {
                continue;
            }
            let key: Vec<i32> = vars.iter().map(|v| m.get(v).copied().unwrap_or(0)).collect();
            *terms.entry(key).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        let mut p = LaurentPoly { vars, terms };
        p.prune_vars();
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(monomial, coefficient)` in a deterministic order.
    pub fn monomials(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(move |(k, c)| {
            let m: Monomial = self
                .vars
                .iter()
                .zip(k)
                .filter(|(_, &e)| e != 0)
                .map(|(v, &e)| (v.clone(), e))
                .collect();
            (m, c)
        })
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 if self.vars.is_empty() => self.terms.values().next().cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Coefficient of the monomial given by `exps` (missing variables have exponent 0).
    pub fn coeff(&self, exps: &[(&str, i32)]) -> Rational {
        let target: Monomial = exps.iter().map(|&(v, e)| (v.to_string(), e)).collect();
        if target.keys().any(|v| target[v] != 0 && !self.vars.contains(v)) {
            return Rational::zero();
        }
        let key: Vec<i32> = self.vars.iter().map(|v| target.get(v).copied().unwrap_or(0)).collect();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Sum of all coefficients, i.e. the value at all variables equal to 1.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().sum()
    }

    /// `(min, max)` exponent of `v` over all terms; `None` for the zero polynomial.
    pub fn degree_range(&self, v: &str) -> Option<(i32, i32)> {
        if self.is_zero() {
            return None;
        }
        match self.vars.iter().position(|x| x == v) {
            None => Some((0, 0)),
            Some(i) => {
                let lo = self.terms.keys().map(|k| k[i]).min().unwrap();
                let hi = self.terms.keys().map(|k| k[i]).max().unwrap();
                Some((lo, hi))
            }
        }
    }

    /// Splits `self = Σ_e c_e · v^e` and returns the map `e ↦ c_e`.
    pub fn coefficients_in(&self, v: &str) -> BTreeMap<i32, LaurentPoly> {
        let mut parts: BTreeMap<i32, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (mut m, c) in self.monomials() {
            let e = m.remove(v).unwrap_or(0);
            parts.entry(e).or_default().push((m, c.clone()));
        }
        parts.into_iter().map(|(e, items)| (e, LaurentPoly::from_monomials(items))).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Multiplicative inverse; only monomials are units.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_monomial() {
            return Err(Error::NonInvertibleSubstitution(format!("{self}")));
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(k.iter().map(|e| -e).collect(), c.recip()?);
        Ok(LaurentPoly { vars: self.vars.clone(), terms })
    }

    /// Integer power. Negative exponents are allowed for monomials only.
    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if self.is_monomial() {
            let (k, c) = self.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            terms.insert(k.iter().map(|x| x * e).collect(), c.pow(e as i64)?);
            let mut p = LaurentPoly { vars: self.vars.clone(), terms };
            p.prune_vars();
            return Ok(p);
        }
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Ring homomorphism sending each assigned variable to its value. Unassigned
    /// variables are left in place.
    pub fn substitute(&self, assignment: &BTreeMap<String, LaurentPoly>) -> Result<Self> {
        let mut pow_cache: BTreeMap<(usize, i32), LaurentPoly> = BTreeMap::new();
        let mut acc = LaurentPoly::zero();
        for (k, c) in &self.terms {
            let mut fixed = Monomial::new();
            let mut term = LaurentPoly::constant(c.clone());
            for (i, (v, &e)) in self.vars.iter().zip(k).enumerate() {
                if e == 0 {
                    continue;
                }
                match assignment.get(v) {
                    None => {
                        fixed.insert(v.clone(), e);
                    }
                    Some(val) => {
                        let pw = match pow_cache.get(&(i, e)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = val.pow(e).map_err(|_| Error::NonInvertibleSubstitution(v.clone()))?;
                                pow_cache.insert((i, e), p.clone());
                                p
                            }
                        };
                        term = &term * &pw;
                    }
                }
            }
            if !fixed.is_empty() {
                term = &term * &LaurentPoly::from_monomials([(fixed, Rational::one())]);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Evaluates at rational values; every variable must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in self.vars.iter().zip(k) {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("no value for {v}")))?;
                t *= &x.pow(e as i64).map_err(|_| Error::NonInvertibleSubstitution(v.clone()))?;
            }
            total += t;
        }
        Ok(total)
    }

    /// Applies `f` to every monomial's exponent map; coefficients are kept.
    pub fn map_monomials(&self, f: impl Fn(&mut Monomial)) -> Self {
        LaurentPoly::from_monomials(self.monomials().map(|(mut m, c)| {
            f(&mut m);
            (m, c.clone())
        }))
    }

    /// Rewrites `q^e` as `p^⌊e/2⌋ q^(e mod 2)`, i.e. reduces modulo `q² = p`.
    pub fn reduce_sqrt(&self, q: &str, p: &Rational) -> Result<Self> {
        let items: Result<Vec<(Monomial, Rational)>> = self
            .monomials()
            .map(|(mut m, c)| {
                let e = m.remove(q).unwrap_or(0);
                let (half, rest) = (e.div_euclid(2), e.rem_euclid(2));
                if rest != 0 {
                    m.insert(q.to_string(), rest);
                }
                Ok((m, c * p.pow(half as i64)?))
            })
            .collect();
        Ok(LaurentPoly::from_monomials(items?))
    }

    /// Specializes `q² = p`; fails if any odd power of `q` remains.
    pub fn specialize_sqrt(&self, q: &str, p: &Rational) -> Result<Self> {
        let r = self.reduce_sqrt(q, p)?;
        if r.vars.iter().any(|v| v == q) {
            return Err(Error::Invariant(format!("odd power of {q} in {self}")));
        }
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| json!([k, c.to_string()]))
            .collect();
        json!({"vars": self.vars, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("laurent poly: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        let vars: Vec<String> = obj
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing vars"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("var not a string")))
            .collect::<Result<_>>()?;
        let distinct: BTreeSet<&String> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(bad("duplicate variable"));
        }
        let terms = obj.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut items = Vec::with_capacity(terms.len());
        for t in terms {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term not a pair"))?;
            let exps = pair[0].as_array().ok_or_else(|| bad("exponents not an array"))?;
            if exps.len() != vars.len() {
                return Err(bad("exponent length mismatch"));
            }
            let mut m = Monomial::new();
            for (name, e) in vars.iter().zip(exps) {
                let e = e
                    .as_i64()
                    .and_then(|e| i32::try_from(e).ok())
                    .ok_or_else(|| bad("exponent not a 32-bit integer"))?;
                m.insert(name.clone(), e);
            }
            let c: Rational = pair[1].as_str().ok_or_else(|| bad("coefficient not a string"))?.parse()?;
            items.push((m, c));
        }
        Ok(LaurentPoly::from_monomials(items))
    }

    fn prune_vars(&mut self) {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|k| k[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(k, c)| (k.iter().zip(&used).filter(|(_, &u)| u).map(|(e, _)| *e).collect(), c))
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    /// Re-keys both operands over the merged variable list.
    fn unify(&self, other: &Self) -> (Vec<String>, Vec<usize>, Vec<usize>) {
        let merged: Vec<String> = self
            .vars
            .iter()
            .chain(&other.vars)
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos = |vs: &[String]| vs.iter().map(|v| merged.binary_search(v).unwrap()).collect();
        let a = pos(&self.vars);
        let b = pos(&other.vars);
        (merged, a, b)
    }
}

fn rekey(k: &[i32], pos: &[usize], width: usize) -> Vec<i32> {
    let mut out = vec![0; width];
    for (e, &p) in k.iter().zip(pos) {
        out[p] = *e;
    }
    out
}

fn add_impl(a: &LaurentPoly, b: &LaurentPoly, negate_b: bool) -> LaurentPoly {
    let (vars, pa, pb) = a.unify(b);
    let w = vars.len();
    let mut terms: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
    for (k, c) in &a.terms {
        terms.insert(rekey(k, &pa, w), c.clone());
    }
    for (k, c) in &b.terms {
        let e = terms.entry(rekey(k, &pb, w)).or_default();
        if negate_b {
            *e -= c;
        } else {
            *e += c;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    let mut p = LaurentPoly { vars, terms };
    p.prune_vars();
    p
}

fn mul_impl(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() || b.is_zero() {
        return LaurentPoly::zero();
    }
    let (vars, pa, pb) = a.unify(b);
    let w = vars.len();
    let bk: Vec<(Vec<i32>, &Rational)> = b.terms.iter().map(|(k, c)| (rekey(k, &pb, w), c)).collect();
    let mut terms: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
    for (k, c) in &a.terms {
        let ka = rekey(k, &pa, w);
        for (kb, d) in &bk {
            let key: Vec<i32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *terms.entry(key).or_default() += c * *d;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    let mut p = LaurentPoly { vars, terms };
    p.prune_vars();
    p
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &'b LaurentPoly) -> LaurentPoly {
                $body(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(&self, &rhs)
            }
        }
        impl<'b> $tr<&'b LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &'b LaurentPoly) -> LaurentPoly {
                $body(&self, rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a, b| add_impl(a, b, false));
poly_binop!(Sub, sub, |a, b| add_impl(a, b, true));
poly_binop!(Mul, mul, mul_impl);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(Rational::from(c))
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::one(), |a, b| a * b)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            for (v, &e) in self.vars.iter().zip(k) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
