use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// Gaussian binomial `g_p(n, i)`: the number of `i`-dimensional subspaces of `F_p^n`.
pub fn g_p_count(p: u64, n: i64, i: i64) -> Rational {
    if i == 0 {
        return Rational::one();
    }
    if i < 1 || i > n {
        return Rational::zero();
    }
    let p = p as i64;
    (1..=i)
        .map(|a| (Rational::int_pow(p, n - a + 1) - Rational::one()) / (Rational::int_pow(p, a) - Rational::one()))
        .product()
}

/// Which of the five coset counts to take. `H` is `H_i` (with `j = n`) or
/// `H_{i,j}`; the second letter is the set acted on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetKind {
    HGl,
    HSi,
    HijGl,
    HijSi,
    HijSij,
}

impl CosetKind {
    pub const ALL: [CosetKind; 5] = [CosetKind::HGl, CosetKind::HSi, CosetKind::HijGl, CosetKind::HijSi, CosetKind::HijSij];

    pub fn name(&self) -> &'static str {
        match self {
            CosetKind::HGl => "H_GL",
            CosetKind::HSi => "H_S_i",
            CosetKind::HijGl => "Hij_GL",
            CosetKind::HijSi => "Hij_S_i",
            CosetKind::HijSij => "Hij_S_ij",
        }
    }

    fn uses_j(&self) -> bool {
        !matches!(self, CosetKind::HGl | CosetKind::HSi)
    }
}

fn check_indices(n: i64, i: i64, j: i64) -> Result<()> {
    if !(0 <= i && i <= j && j <= n) || n < 1 {
        return Err(Error::InvalidArgument(format!("need 0 <= i <= j <= n, n >= 1; got n={n} i={i} j={j}")));
    }
    Ok(())
}

/// Closed-form coset counts. For the `H_i` kinds `j` is ignored.
pub fn coset_count(kind: CosetKind, p: u64, n: i64, i: i64, j: i64) -> Result<Rational> {
    let j = if kind.uses_j() { j } else { n };
    check_indices(n, i, j)?;
    let g = |a, b| g_p_count(p, a, b);
    let pw = |e: i64| Rational::int_pow(p as i64, e);
    Ok(match kind {
        CosetKind::HGl => g(n, i),
        CosetKind::HSi => g(n - 1, i),
        CosetKind::HijGl => pw(i * (n - j)) * g(n, j) * g(j, i),
        CosetKind::HijSi => pw(i * (n - j)) * g(n - 1, i) * g(n - i, n - j),
        CosetKind::HijSij => pw(i * (n - 1 - j)) * g(n - 1, j) * g(j, i),
    })
}

/// `(a0, a1, a2)` with `a0 = |H\S_ij|`, `a0+a1 = |H\S_i|`, `a0+a1+a2 = |H\GL|`.
pub fn lattice_multiplicities(p: u64, n: i64, i: i64, j: i64) -> Result<(Rational, Rational, Rational)> {
    let gl = coset_count(CosetKind::HijGl, p, n, i, j)?;
    let si = coset_count(CosetKind::HijSi, p, n, i, j)?;
    let sij = coset_count(CosetKind::HijSij, p, n, i, j)?;
    Ok((sij.clone(), &si - &sij, gl - si))
}

/// Square matrix over `Z/modulus`, row-major.
type Mat = Vec<i64>;

fn mat_mul(a: &Mat, b: &Mat, n: usize, modulus: i64) -> Mat {
    let mut c = vec![0; n * n];
    for r in 0..n {
        for s in 0..n {
            let v: i64 = (0..n).map(|t| a[r * n + t] * b[t * n + s]).sum();
            c[r * n + s] = v.rem_euclid(modulus);
        }
    }
    c
}

fn det(a: &Mat, n: usize, modulus: i64) -> i64 {
    match n {
        1 => a[0].rem_euclid(modulus),
        2 => (a[0] * a[3] - a[1] * a[2]).rem_euclid(modulus),
        _ => {
            // cofactor expansion along the first row
            let mut total = 0;
            for c in 0..n {
                let minor: Mat = (1..n)
                    .flat_map(|r| (0..n).filter(move |&s| s != c).map(move |s| (r, s)))
                    .map(|(r, s)| a[r * n + s])
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                total += sign * a[c] * det(&minor, n - 1, modulus);
            }
            total.rem_euclid(modulus)
        }
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    (1..m).find(|&x| (a * x).rem_euclid(m) == 1)
}

/// Inverse via the adjugate; `a` must be invertible mod `modulus`.
fn mat_inverse(a: &Mat, n: usize, modulus: i64) -> Mat {
    let d = det(a, n, modulus);
    let dinv = mod_inverse(d, modulus).expect("invertible");
    let mut inv = vec![0; n * n];
    for r in 0..n {
        for c in 0..n {
            let minor: Mat = (0..n)
                .filter(|&x| x != c)
                .flat_map(|x| (0..n).filter(move |&y| y != r).map(move |y| (x, y)))
                .map(|(x, y)| a[x * n + y])
                .collect();
            let cof = if n == 1 { 1 } else { det(&minor, n - 1, modulus) };
            let sign = if (r + c) % 2 == 0 { 1 } else { -1 };
            inv[r * n + c] = (sign * cof * dinv).rem_euclid(modulus);
        }
    }
    inv
}

/// Block index (0, 1, 2) of coordinate `a` for the partition `i | j−i | n−j`.
fn block(a: usize, i: usize, j: usize) -> usize {
    if a < i {
        0
    } else if a < j {
        1
    } else {
        2
    }
}

/// Counts `|H\X|` by enumerating `GL_n(Z/p²)` (determinant `±1`), where `H`
/// is the reduction of `H_{i,j}` and `X` the reduction of the chosen set, and
/// walking left `H`-orbits explicitly.
pub fn coset_count_bruteforce(kind: CosetKind, p: u64, n: i64, i: i64, j: i64) -> Result<Rational> {
    let j = if kind.uses_j() { j } else { n };
    check_indices(n, i, j)?;
    if n > 2 {
        return Err(Error::InvalidArgument("brute-force coset counts only for n <= 2".into()));
    }
    let (nu, iu, ju) = (n as usize, i as usize, j as usize);
    let p = p as i64;
    let m = p * p;
    let size = nu * nu;
    let total = m.pow(size as u32);

    let mut gl: Vec<Mat> = Vec::new();
    for code in 0..total {
        let mut c = code;
        let a: Mat = (0..size)
            .map(|_| {
                let v = c % m;
                c /= m;
                v
            })
            .collect();
        let d = det(&a, nu, m);
        if d == 1 || d == m - 1 {
            gl.push(a);
        }
    }

    let in_h = |a: &Mat| {
        (0..nu).all(|r| {
            (0..nu).all(|c| {
                let need = match (block(r, iu, ju), block(c, iu, ju)) {
                    (1, 0) | (2, 1) => p,
                    (2, 0) => m,
                    _ => 1,
                };
                a[r * nu + c] % need == 0
            })
        })
    };
    let in_set = |a: &Mat| -> bool {
        let inv = mat_inverse(a, nu, m);
        let last = &inv[(nu - 1) * nu..];
        match kind {
            CosetKind::HGl | CosetKind::HijGl => true,
            CosetKind::HSi | CosetKind::HijSi => last[..iu].iter().all(|x| x % p == 0),
            CosetKind::HijSij => last[..iu].iter().all(|x| x % m == 0) && last[iu..ju].iter().all(|x| x % p == 0),
        }
    };

    let h: Vec<&Mat> = gl.iter().filter(|a| in_h(a)).collect();
    let members: Vec<&Mat> = gl.iter().filter(|a| in_set(a)).collect();
    let member_set: HashSet<&Mat> = members.iter().copied().collect();
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut orbits = 0i64;
    for a in members {
        if seen.contains(a) {
            continue;
        }
        orbits += 1;
        for g in &h {
            let b = mat_mul(g, a, nu, m);
            if !member_set.contains(&b) {
                return Err(Error::Invariant(format!("set for {} not stable under H", kind.name())));
            }
            seen.insert(b);
        }
    }
    Ok(Rational::from(orbits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomial() {
        assert_eq!(g_p_count(5, 3, 0), Rational::one());
        assert_eq!(g_p_count(2, 2, 1), Rational::from(3));
        assert_eq!(g_p_count(3, 2, 3), Rational::zero());
        assert_eq!(g_p_count(2, 4, 2), Rational::from(35));
        assert_eq!(g_p_count(2, -1, 1), Rational::zero());
    }

    #[test]
    fn lines_in_f2_squared() {
        // one line per nonzero vector up to scaling; over F_2 every nonzero vector is its own line
        let lines = (1..4).count();
        assert_eq!(g_p_count(2, 2, 1), Rational::from(lines as i64));
    }

    #[test]
    fn count_examples() {
        assert_eq!(coset_count(CosetKind::HGl, 7, 3, 0, 0).unwrap(), Rational::one());
        assert_eq!(coset_count(CosetKind::HGl, 2, 2, 1, 2).unwrap(), Rational::from(3));
        assert_eq!(coset_count(CosetKind::HijGl, 5, 1, 0, 1).unwrap(), Rational::one());
        assert!(coset_count(CosetKind::HijGl, 2, 2, 2, 1).is_err());
        assert_eq!(coset_count_bruteforce(CosetKind::HGl, 2, 2, 1, 2).unwrap(), Rational::from(3));
    }

    #[test]
    fn multiplicities_trivial_and_nonnegative() {
        let (a0, a1, a2) = lattice_multiplicities(3, 2, 0, 0).unwrap();
        assert_eq!((a0, a1, a2), (Rational::one(), Rational::zero(), Rational::zero()));
        for p in [2, 3] {
            for n in 1..=3 {
                for j in 0..=n {
                    for i in 0..=j {
                        let (a0, a1, a2) = lattice_multiplicities(p, n, i, j).unwrap();
                        for a in [a0, a1, a2] {
                            assert!(a.is_integer() && !a.is_negative(), "p={p} n={n} i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn n1_multiplicities_match_bruteforce() {
        for p in [2, 3, 5] {
            let gl = coset_count_bruteforce(CosetKind::HijGl, p, 1, 1, 1).unwrap();
            let sij = coset_count_bruteforce(CosetKind::HijSij, p, 1, 1, 1).unwrap();
            let (a0, a1, a2) = lattice_multiplicities(p, 1, 1, 1).unwrap();
            assert_eq!(a0, sij);
            assert_eq!(&a0 + &a1 + a2, gl);
            assert_eq!(gl, Rational::one());
        }
    }
}
