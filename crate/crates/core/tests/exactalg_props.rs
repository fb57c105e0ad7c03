use std::collections::BTreeMap;

use maass_core::exactalg::*;
use num_integer::Integer;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rational::frac(n, d))
}

/// Random Laurent polynomial in X0, X1, q with small exponents.
fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-2i32..=2, -2i32..=2, -1i32..=1), small_rational()), 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .map(|((a, b, c), coef)| LaurentPoly::monomial(&[("X0", a), ("X1", b), ("q", c)], coef))
            .sum()
    })
}

fn point() -> impl Strategy<Value = BTreeMap<String, Rational>> {
    let nonzero = (1i64..=7, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| Rational::frac(if neg { -n } else { n }, d));
    (nonzero.clone(), nonzero.clone(), nonzero)
        .prop_map(|(a, b, c)| [("X0".to_string(), a), ("X1".to_string(), b), ("q".to_string(), c)].into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eval_is_ring_homomorphism(f in laurent(), g in laurent(), at in point()) {
        let (fv, gv) = (f.eval(&at).unwrap(), g.eval(&at).unwrap());
        prop_assert_eq!((&f + &g).eval(&at).unwrap(), &fv + &gv);
        prop_assert_eq!((&f * &g).eval(&at).unwrap(), &fv * &gv);
        prop_assert_eq!((&f - &g).eval(&at).unwrap(), fv - gv);
    }

    #[test]
    fn rational_normal_form(n in -10_000i64..10_000, d in 1i64..10_000, s in 1i64..50) {
        let r = Rational::frac(n * s, d * s);
        prop_assert_eq!(&r, &Rational::frac(n, d));
        let g = n.gcd(&d);
        prop_assert_eq!(r.to_string(), format!("{}/{}", n / g, d / g));
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn sigma_is_involution(f in laurent(), i in 1usize..=2) {
        // rename X1 to X_i, then σ_i twice is the identity
        let g = if i == 1 { f } else { f.map_monomials(|m| if let Some(e) = m.remove("X1") { m.insert("X2".into(), e); }) };
        let once = weyl_action(&g, 2, WeylGen::Sigma(i)).unwrap();
        prop_assert_eq!(weyl_action(&once, 2, WeylGen::Sigma(i)).unwrap(), g);
    }

    #[test]
    fn laurent_json_roundtrip(f in laurent()) {
        let back = LaurentPoly::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn rational_parse_errors() {
    assert!("1/0".parse::<Rational>().is_err());
    assert!("abc".parse::<Rational>().is_err());
    assert!("1/2/3".parse::<Rational>().is_err());
    assert_eq!("-6/4".parse::<Rational>().unwrap(), Rational::frac(-3, 2));
}
