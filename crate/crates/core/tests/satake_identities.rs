use std::collections::BTreeMap;

use maass_core::exactalg::{is_weyl_invariant, x_name, LaurentPoly, PolyMatrix, Prime, Rational, SQRT_P};
use maass_core::satake::*;

fn primes() -> [Prime; 3] {
    [Prime::Numeric(2), Prime::Numeric(3), Prime::Formal]
}

#[test]
fn row_recursion_by_b_matrix() {
    for p in primes() {
        for l in 2..=4i64 {
            let prev: Vec<LaurentPoly> = (0..l).map(|t| phi_t(t, l - 1, p).unwrap()).collect();
            let prev = PolyMatrix::new(1, l as usize, prev).unwrap();
            let row = prev.mul(&build_b(l, p).unwrap()).unwrap().row(0);
            let direct: Vec<LaurentPoly> = (0..=l).map(|j| phi_t(j, l, p).unwrap()).collect();
            assert_eq!(row, direct, "p={p} l={l}");
        }
        for n in 1..=4 {
            let direct: Vec<LaurentPoly> = (0..=n).map(|j| phi_t(j, n, p).unwrap()).collect();
            assert_eq!(phi_row_by_matrix(n, p).unwrap(), direct, "p={p} n={n}");
        }
    }
}

#[test]
fn weyl_invariance_and_similitude_degree() {
    for p in primes() {
        for n in 1..=4i64 {
            for l in 0..=n {
                let f = phi_t(l, n, p).unwrap();
                assert!(is_weyl_invariant(&f, n as usize).unwrap(), "p={p} l={l} n={n}");
                assert_eq!(f.degree_range(&x_name(0)), Some((2, 2)));
            }
        }
    }
}

#[test]
fn bprime_palindromic_in_each_variable() {
    for p in primes() {
        for n in 2..=3i64 {
            let bp = build_bprime(n, p).unwrap();
            for i in 2..2 * n {
                let name = x_name(i as usize);
                let flipped = bp.map(|e| {
                    e.map_monomials(|m| {
                        if let Some(v) = m.get_mut(&name) {
                            *v = -*v;
                        }
                    })
                });
                assert_eq!(flipped, bp, "p={p} n={n} X{i}");
            }
        }
    }
}

#[test]
fn aprime_palindromic() {
    for n in 2..=3i64 {
        let formal = build_aprime(n, Prime::Formal).unwrap();
        let q2_over_u = LaurentPoly::monomial(&[(SQRT_P, 2), (U_VAR, -1)], Rational::one());
        let at: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), q2_over_u)].into();
        assert_eq!(formal.substitute(&at).unwrap(), formal, "formal n={n}");
        for p in [2u64, 3] {
            let a = build_aprime(n, Prime::Numeric(p)).unwrap();
            let p_over_u = LaurentPoly::monomial(&[(U_VAR, -1)], Rational::from(p as i64));
            let at: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), p_over_u)].into();
            assert_eq!(a.substitute(&at).unwrap(), a, "p={p} n={n}");
            // the numeric matrix is the formal one with q² = p
            let spec = formal.try_map(|e| e.specialize_sqrt(SQRT_P, &Rational::from(p as i64))).unwrap();
            assert_eq!(spec, a);
        }
    }
}

#[test]
fn adash_for_all_weights() {
    for n in 2..=3i64 {
        for p in [2u64, 3] {
            let p = Prime::Numeric(p);
            let ap = build_aprime(n, p).unwrap();
            for k in [4i64, 6, 8, 10] {
                let lhs = build_a(2 * n - 1, p, k + n).unwrap();
                let at: BTreeMap<String, LaurentPoly> = [(U_VAR.to_string(), p.pow(1 - k))].into();
                let rhs = ap.substitute(&at).unwrap().scale(&p.pow(-(n - 1) * (2 * k - 1)));
                assert_eq!(lhs, rhs, "n={n} p={p} k={k}");
            }
        }
    }
}

#[test]
fn satake_poly_lambda_g() {
    // Weight k+n normalization with μ_1 = b² reproduces λ_g(p²).
    let b2 = LaurentPoly::monomial(&[("b", 2)], Rational::one());
    for (k, n) in [(4i64, 2i64), (10, 2), (6, 3)] {
        for p in [Prime::Numeric(2), Prime::Formal] {
            let w = k + n;
            let mu0_sq = p.pow(w - 1) * b2.inverse().unwrap();
            let sv = SatakeVector::new(mu0_sq, vec![b2.clone()]).unwrap();
            assert!(sv.is_weight_normalized(w, p));
            let ev = eigenvalue_at(&sv, 1, p).unwrap();
            let expect = p.pow(k + n - 2) * (p.pow(1) * &b2 + (&p.pow(1) - &LaurentPoly::one()) + p.pow(1) * b2.inverse().unwrap());
            assert_eq!(ev, expect, "k={k} n={n} p={p}");
        }
    }
}
