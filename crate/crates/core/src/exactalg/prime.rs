use std::fmt;

use super::laurent::LaurentPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Name of the variable standing for `√p` in formal computations.
pub const SQRT_P: &str = "q";

/// A prime, either a concrete number or the formal symbol `p = q²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Numeric(u64),
    Formal,
}

impl Prime {
    /// `p^e` as a polynomial.
    pub fn pow(&self, e: i64) -> LaurentPoly {
        match self {
            Prime::Numeric(p) => LaurentPoly::constant(Rational::int_pow(*p as i64, e)),
            Prime::Formal => LaurentPoly::monomial(&[(SQRT_P, (2 * e) as i32)], Rational::one()),
        }
    }

    /// `p^(e/2)`. For a numeric prime `e` must be even.
    pub fn half_pow(&self, e: i64) -> Result<LaurentPoly> {
        match self {
            Prime::Numeric(_) if e % 2 != 0 => {
                Err(Error::InvalidArgument(format!("p^({e}/2) is irrational for numeric p")))
            }
            Prime::Numeric(_) => Ok(self.pow(e / 2)),
            Prime::Formal => Ok(LaurentPoly::monomial(&[(SQRT_P, e as i32)], Rational::one())),
        }
    }

    pub fn numeric(&self) -> Option<u64> {
        match self {
            Prime::Numeric(p) => Some(*p),
            Prime::Formal => None,
        }
    }
}

impl From<u64> for Prime {
    fn from(p: u64) -> Self {
        Prime::Numeric(p)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Numeric(p) => write!(f, "{p}"),
            Prime::Formal => write!(f, "{SQRT_P}^2"),
        }
    }
}
