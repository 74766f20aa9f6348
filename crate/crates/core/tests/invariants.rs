use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use pcf_core::analysis::tietze_check;
use pcf_core::generators::pincherle_family;
use pcf_core::rational::int;
use pcf_core::{CfSpec, IntPolynomial, RationalFunction};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-9i64..=9, 0..5).prop_map(|c| IntPolynomial::from_i64s(&c))
}

fn nonzero_poly() -> impl Strategy<Value = IntPolynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #[test]
    fn poly_ring_ops_agree_with_evaluation(p in poly(), q in poly(), n in -50i64..50) {
        let x = BigInt::from(n);
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!((&p - &q).eval(&x), p.eval(&x) - q.eval(&x));
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.shift(&BigInt::from(3)).eval(&x), p.eval(&(x + 3)));
    }

    #[test]
    fn poly_text_round_trip(p in poly()) {
        let back: IntPolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn gcd_divides_both(p in nonzero_poly(), q in nonzero_poly(), r in nonzero_poly()) {
        let (a, b) = (&p * &r, &q * &r);
        let g = a.gcd(&b);
        prop_assert!(a.div_exact(&g).is_some());
        prop_assert!(b.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&r.primitive()).is_some());
    }

    #[test]
    fn rational_function_normal_form(p in nonzero_poly(), q in nonzero_poly(), r in nonzero_poly()) {
        let f = RationalFunction::new(&p * &r, &q * &r).unwrap();
        let g = RationalFunction::new(p.clone(), q.clone()).unwrap();
        prop_assert_eq!(&f, &g);
        let back: RationalFunction = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn sign_threshold_is_a_bound(p in nonzero_poly()) {
        let f = RationalFunction::from_poly(p.clone());
        let t = f.sign_threshold();
        let lead_positive = p.leading().unwrap() > &BigInt::from(0);
        for k in 0..20 {
            let v = p.eval(&(&t + k));
            prop_assert!(v != BigInt::from(0));
            prop_assert_eq!(v > BigInt::from(0), lead_positive);
        }
    }

    #[test]
    fn tietze_n0_ignores_scan_limit(c0 in -20i64..=5, c1 in 1i64..=4, a1 in 1i64..=3, limit in 1u64..300) {
        let b = RationalFunction::from_poly(IntPolynomial::from_i64s(&[c0, c1 + a1]));
        let a = RationalFunction::from_poly(IntPolynomial::from_i64s(&[0, a1]));
        let cf = CfSpec::with_tail(int(0), vec![], a, b, 1);
        let base = tietze_check(&cf, 1).unwrap();
        let other = tietze_check(&cf, limit).unwrap();
        prop_assert!(base.holds);
        prop_assert_eq!(base.n0, other.n0);
    }

    #[test]
    fn pincherle_limit_ignores_b(c in prop::collection::vec(1i64..=9, 1..3)) {
        prop_assume!(c.len() > 1 || c[0] > 1);
        let b = RationalFunction::from_poly(IntPolynomial::from_i64s(&c));
        let h: RationalFunction = "n+2".parse().unwrap();
        let m = pincherle_family(&h, &b).unwrap();
        prop_assert!(m.verified());
        let approx = m.cf.approximants(80).unwrap();
        let v = approx.get(80).unwrap();
        let two = BigRational::from_integer(2.into());
        let err = (v - &two).abs();
        prop_assert!(err < BigRational::new(1.into(), BigInt::from(10).pow(8)));
    }
}
