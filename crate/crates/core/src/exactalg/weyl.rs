use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Generators of the Weyl group acting on `X0..Xn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylGen {
    /// Swap `X_i` and `X_j` (both at least 1).
    Transposition(usize, usize),
    /// `X_i ↦ X_i⁻¹`, `X_0 ↦ X_0·X_i`.
    Sigma(usize),
}

pub fn x_name(i: usize) -> String {
    format!("X{i}")
}

pub fn x_var(i: usize) -> LaurentPoly {
    LaurentPoly::var(&x_name(i))
}

/// Symbols other than `X<i>` (such as `q`) are treated as scalars.
fn check_vars(f: &LaurentPoly, n: usize) -> Result<()> {
    for v in f.vars() {
        if let Some(i) = v.strip_prefix('X').and_then(|s| s.parse::<usize>().ok()) {
            if i > n {
                return Err(Error::IndexOutOfRange(format!("variable {v} not among X0..X{n}")));
            }
        }
    }
    Ok(())
}

/// Applies one generator to a polynomial in `X0..Xn` (other symbols are scalars).
pub fn weyl_action(f: &LaurentPoly, n: usize, g: WeylGen) -> Result<LaurentPoly> {
    check_vars(f, n)?;
    match g {
        WeylGen::Transposition(i, j) => {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::IndexOutOfRange(format!("transposition ({i},{j}) for n={n}")));
            }
            let (a, b) = (x_name(i), x_name(j));
            Ok(f.map_monomials(|m| {
                let ea = m.remove(&a);
                let eb = m.remove(&b);
                if let Some(e) = ea {
                    m.insert(b.clone(), e);
                }
                if let Some(e) = eb {
                    m.insert(a.clone(), e);
                }
            }))
        }
        WeylGen::Sigma(i) => {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange(format!("sigma_{i} for n={n}")));
            }
            let xi = x_name(i);
            let x0 = x_name(0);
            // X_0^f X_i^e ↦ X_0^f X_i^(f-e)
            Ok(f.map_monomials(|m| {
                let f0 = m.get(&x0).copied().unwrap_or(0);
                let e = m.get(&xi).copied().unwrap_or(0);
                m.insert(xi.clone(), f0 - e);
            }))
        }
    }
}

/// True iff `f` is fixed by every `σ_i` and every adjacent transposition.
pub fn is_weyl_invariant(f: &LaurentPoly, n: usize) -> Result<bool> {
    let mut gens: Vec<WeylGen> = (1..=n).map(WeylGen::Sigma).collect();
    gens.extend((1..n).map(|i| WeylGen::Transposition(i, i + 1)));
    for g in gens {
        if weyl_action(f, n, g)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}
