use super::rational::Rational;
use crate::error::{Error, Result};

/// Element of `Q(ζ_N)` for a prime power `N`, written as `Σ c_e ζ^e` with
/// `0 ≤ e < N`. The representation is not reduced; [`Cyclotomic::reduce`]
/// maps it into the basis `1, ζ, …, ζ^(φ(N)−1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    prime: u64,
    coeffs: Vec<Rational>,
}

fn prime_of_power(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Result<Self> {
        let prime = prime_of_power(order)
            .ok_or_else(|| Error::InvalidArgument(format!("root-of-unity order {order} is not a prime power")))?;
        Ok(Cyclotomic { order, prime, coeffs: vec![Rational::zero(); order as usize] })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Adds `w · ζ^e`; `e` is taken modulo the order.
    pub fn add_root(&mut self, e: i64, w: &Rational) {
        let idx = e.rem_euclid(self.order as i64) as usize;
        self.coeffs[idx] += w;
    }

    pub fn add(&mut self, other: &Cyclotomic) {
        assert_eq!(self.order, other.order);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        for a in &mut self.coeffs {
            *a *= c;
        }
    }

    /// Coordinates in the power basis of degree `φ(N)`, obtained by reducing
    /// modulo the cyclotomic polynomial `Φ_N(x) = Φ_p(x^(N/p))`.
    pub fn reduce(&self) -> Vec<Rational> {
        let n = self.order as usize;
        let p = self.prime as usize;
        let step = n / p;
        let deg = n - step;
        let mut c = self.coeffs.clone();
        // Φ_N = Σ_{t<p} x^(t·step) is monic of degree (p−1)·step.
        for top in (deg..n).rev() {
            let lead = std::mem::take(&mut c[top]);
            if lead.is_zero() {
                continue;
            }
            let shift = top - deg;
            for t in 0..p - 1 {
                c[shift + t * step] -= &lead;
            }
        }
        c.truncate(deg);
        c
    }

    /// The value as a rational number, or an error if it is irrational.
    pub fn to_rational(&self) -> Result<Rational> {
        let r = self.reduce();
        if r[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant(format!("cyclotomic sum of order {} is not rational", self.order)));
        }
        Ok(r[0].clone())
    }
}
