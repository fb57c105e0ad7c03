use maass_core::arith::{sigma, zeta_one_minus};
use maass_core::exactalg::{Prime, Rational};
use maass_core::qexp::*;
use maass_core::satake::{eigenvalue_at, eisenstein_satake, value_at_ones};
use proptest::prelude::*;

/// `E_4 = 1 + 240 Σ σ_3(n) qⁿ`, written out independently of the library.
fn e4(n: i64) -> Rational {
    if n == 0 {
        Rational::one()
    } else {
        Rational::from(240) * Rational::from(sigma(3, n))
    }
}

#[test]
fn weight_four_restriction_factorizes() {
    // dim M_4 = 1, so E_4^(2) restricted to the diagonal is E_4 ⊗ E_4.
    for n in 0..=3i64 {
        for m in 0..=3i64 {
            let rb = r_bound(n, m);
            let s: Rational = (-rb..=rb).map(|r| siegel2_coeff(4, (n, r, m)).unwrap()).sum();
            assert_eq!(s, e4(n) * e4(m), "n={n} m={m}");
        }
    }
    let one: Rational = (-2..=2).map(|r| siegel2_coeff(4, (1, r, 1)).unwrap()).sum();
    assert_eq!(one, Rational::from(57600));
}

#[test]
fn expansion_matches_pointwise_and_fj_routes() {
    let e = siegel2_expand(6, 4).unwrap();
    for m in 0..=4 {
        assert_eq!(fourier_jacobi_from(&e, m, 4).unwrap(), fourier_jacobi(6, m, 4).unwrap());
    }
    assert!(matches!(fourier_jacobi_from(&e, 5, 2), Err(maass_core::Error::InsufficientPrecision { .. })));
}

#[test]
fn u_composes() {
    let e = fourier_jacobi(4, 2, 3).unwrap();
    for (a, b) in [(2, 3), (3, 3), (2, 5)] {
        let lhs = apply_u(&apply_u(&e, a).unwrap(), b).unwrap();
        assert_eq!(lhs, apply_u(&e, a * b).unwrap());
    }
}

#[test]
fn v_optimized_matches_cosets() {
    for k in [4i64, 6] {
        for m in [1i64, 2] {
            for p in [2i64, 3] {
                let e = fourier_jacobi(k, m, 4 * p * p).unwrap();
                for l in [0, 1] {
                    let fast = apply_v(&e, l, p).unwrap();
                    let slow = apply_v_generic(&e, l, p).unwrap();
                    assert_eq!(fast, slow, "k={k} m={m} p={p} l={l}");
                }
                assert_eq!(apply_v(&e, 1, p).unwrap().n_complete(), 4);
            }
        }
    }
}

#[test]
fn z0_specialization_intertwines_hecke() {
    // W(φ)|T(p²) = p^{2k−2}·W(φ|V_{1,0}(p²))
    for k in [4i64, 6] {
        for m in [1i64, 2, 3] {
            for p in [2i64, 3] {
                let e = fourier_jacobi(k, m, 3 * p * p).unwrap();
                let lhs = hecke_t_elliptic(&specialize_z0(&e), k, p).unwrap();
                let rhs = specialize_z0(&apply_v(&e, 1, p).unwrap()).scale(&Rational::int_pow(p, 2 * k - 2));
                assert_eq!(lhs, rhs, "k={k} m={m} p={p}");
            }
        }
    }
}

#[test]
fn elliptic_eigenvalue_agrees_with_satake() {
    for (k, p) in [(4i64, 2i64), (4, 3), (6, 2), (12, 5)] {
        let f = elliptic_eisenstein(k, (3 * p * p + 1) as usize).unwrap();
        let direct = hecke_t_elliptic(&f, k, p).unwrap();
        assert_eq!(direct, hecke_t_elliptic_generic(&f, k, p).unwrap());
        let lambda = direct.0[0].clone();
        assert_eq!(direct, f.truncate_to(direct.len()).scale(&lambda));
        let ev = eigenvalue_at(&eisenstein_satake(k, Prime::Numeric(p as u64)), 1, Prime::Numeric(p as u64)).unwrap();
        assert_eq!(value_at_ones(&ev), lambda, "k={k} p={p}");
        let expect = Rational::int_pow(p, 2 * k - 2) + Rational::from(p - 1) * Rational::int_pow(p, k - 2) + Rational::one();
        assert_eq!(lambda, expect);
    }
    let f = elliptic_eisenstein(4, 13).unwrap();
    assert_eq!(hecke_t_elliptic(&f, 4, 2).unwrap().0[0], Rational::from(69));
}

#[test]
fn normalized_eisenstein_constant_term() {
    for k in [4i64, 6] {
        let ck = Rational::from(2) / zeta_one_minus(k as usize);
        for m in [1i64, 2, 4, 8, 9, 12, 16] {
            let hat = jacobi_eisenstein(k, m, 1).unwrap();
            assert_eq!(hat.get(0, 0).unwrap(), ck, "k={k} m={m}");
        }
    }
}

#[test]
fn fourier_jacobi_large_index_cheap() {
    let e = fourier_jacobi(4, 81, 2).unwrap();
    assert_eq!(e.index(), 81);
    assert_eq!(e.get(0, 0).unwrap(), Rational::from(240) * Rational::from(sigma(3, 81)));
}

proptest! {
    #[test]
    fn jacobi_json_roundtrip(k in prop::sample::select(vec![4i64, 6, 8]), m in 0i64..5, n in 0i64..4) {
        let e = fourier_jacobi(k, m, n).unwrap();
        let text = e.to_json().to_string();
        let back = JacobiExpansion::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.to_json().to_string(), text);
        prop_assert_eq!(back, e);
    }
}
