//! Exact identities of the transforms and the fundamental recurrences,
//! checked over random inputs.

use num_rational::BigRational;
use num_traits::{One, Zero};
use pcf_core::cf::{e_cf, CfSpec, Convergent};
use pcf_core::rational::int;
use pcf_core::transforms::{
    bauer_muir, bernoulli_from_sequence, euler_from_series, even_part, extension_bmoe, generalized_euler,
    generalized_product, odd_part, product_to_cf, ProductSpec, SeriesSpec,
};
use pcf_core::Error;
use proptest::prelude::*;

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-30i64..=-1, 1i64..=30], 1i64..=12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=30, 1i64..=12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn positive_cf(len: usize) -> impl Strategy<Value = CfSpec> {
    (
        positive_rational(),
        prop::collection::vec((positive_rational(), positive_rational()), len),
    )
        .prop_map(|(b0, terms)| CfSpec::finite(b0, terms))
}

fn partial_sums(a: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .scan(BigRational::zero(), |s, x| {
            *s += x;
            Some(s.clone())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bernoulli_reproduces_sequence(k in prop::collection::vec(rational(), 61)) {
        prop_assume!(k.windows(2).all(|w| w[0] != w[1]));
        let cf = bernoulli_from_sequence(&k).unwrap();
        let conv = cf.convergents(60).unwrap();
        for n in 0..=60 {
            prop_assert_eq!(conv[n].value(), Some(k[n].clone()), "n = {}", n);
        }
    }

    #[test]
    fn euler_reproduces_partial_sums(a in prop::collection::vec(nonzero_rational(), 61)) {
        let cf = euler_from_series(&SeriesSpec::new(a.clone())).unwrap();
        let sums = partial_sums(&a);
        let conv = cf.convergents(60).unwrap();
        for n in 0..=60 {
            prop_assert_eq!(conv[n].value(), Some(sums[n].clone()), "n = {}", n);
        }
    }

    #[test]
    fn generalized_euler_reproduces_perturbed_sums(
        a in prop::collection::vec(nonzero_rational(), 61),
        b in prop::collection::vec(rational(), 61),
    ) {
        let spec = SeriesSpec::perturbed(a.clone(), b.clone());
        let cf = match generalized_euler(&spec) {
            Err(Error::DegenerateTerm { .. }) => return Err(TestCaseError::reject("degenerate increment")),
            r => r.unwrap(),
        };
        let sums = partial_sums(&a);
        let conv = cf.convergents(60).unwrap();
        for n in 0..=60 {
            prop_assert_eq!(conv[n].value(), Some(&sums[n] + &b[n]), "n = {}", n);
        }
    }

    #[test]
    fn product_reproduces_partial_products(a in prop::collection::vec(nonzero_rational(), 60)) {
        prop_assume!(a.iter().all(|x| !x.is_one()));
        let cf = product_to_cf(&ProductSpec::new(a.clone())).unwrap();
        let conv = cf.convergents(60).unwrap();
        let mut p = BigRational::one();
        prop_assert_eq!(conv[0].value(), Some(p.clone()));
        for n in 1..=60 {
            p *= &a[n - 1];
            prop_assert_eq!(conv[n].value(), Some(p.clone()), "n = {}", n);
        }
    }

    #[test]
    fn generalized_product_reproduces_perturbed_products(
        a in prop::collection::vec(nonzero_rational(), 60),
        b in prop::collection::vec(nonzero_rational(), 61),
    ) {
        let spec = ProductSpec::perturbed(a.clone(), b.clone());
        let cf = match generalized_product(&spec) {
            Err(Error::DegenerateTerm { .. }) => return Err(TestCaseError::reject("degenerate increment")),
            r => r.unwrap(),
        };
        let conv = cf.convergents(60).unwrap();
        let mut p = BigRational::one();
        prop_assert_eq!(conv[0].value(), Some(b[0].clone()));
        for n in 1..=60 {
            p *= &a[n - 1];
            prop_assert_eq!(conv[n].value(), Some(&p * &b[n]), "n = {}", n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn contractions_pick_canonical_pairs(cf in positive_cf(101)) {
        let conv = cf.convergents(101).unwrap();
        let even = even_part(&cf, 50).unwrap().convergents(50).unwrap();
        for k in 0..=50 {
            prop_assert_eq!(&even[k].numerator, &conv[2 * k].numerator, "even k = {}", k);
            prop_assert_eq!(&even[k].denominator, &conv[2 * k].denominator, "even k = {}", k);
        }
        let odd = odd_part(&cf, 50).unwrap().convergents(50).unwrap();
        prop_assert_eq!(odd[0].value(), conv[1].value());
        for k in 1..=50 {
            prop_assert_eq!(&odd[k].numerator, &conv[2 * k + 1].numerator, "odd k = {}", k);
            prop_assert_eq!(&odd[k].denominator, &conv[2 * k + 1].denominator, "odd k = {}", k);
        }
    }

    #[test]
    fn bauer_muir_shifts_canonical_pairs(
        cf in positive_cf(50),
        w in prop::collection::vec(rational(), 51),
    ) {
        let bm = match bauer_muir(&cf, &w, 50) {
            Err(Error::TransformDoesNotExist { .. }) => return Err(TestCaseError::reject("no transform")),
            r => r.unwrap(),
        };
        let conv = cf.convergents(50).unwrap();
        let out = bm.cf.convergents(50).unwrap();
        let (one, zero) = (BigRational::one(), BigRational::zero());
        for n in 0..=50 {
            let (pa, pb) = if n == 0 { (&one, &zero) } else { (&conv[n - 1].numerator, &conv[n - 1].denominator) };
            prop_assert_eq!(&out[n].numerator, &(&conv[n].numerator + &w[n] * pa), "n = {}", n);
            prop_assert_eq!(&out[n].denominator, &(&conv[n].denominator + &w[n] * pb), "n = {}", n);
        }
    }

    #[test]
    fn determinant_identity(cf in (rational(), prop::collection::vec((nonzero_rational(), rational()), 200))
        .prop_map(|(b0, t)| CfSpec::finite(b0, t)))
    {
        determinant_holds(&cf, 200)?;
    }
}

fn determinant_holds(cf: &CfSpec, n: usize) -> Result<(), TestCaseError> {
    let conv: Vec<Convergent> = cf.convergents(n).unwrap();
    let terms = cf.terms(n).unwrap();
    let mut prod = BigRational::one();
    // N = 0 pairs (A_0, B_0) with (A_{-1}, B_{-1}) = (1, 0)
    prop_assert_eq!(
        &conv[0].numerator * BigRational::zero() - BigRational::one() * &conv[0].denominator,
        -BigRational::one()
    );
    for big_n in 1..=n {
        prod *= &terms[big_n - 1].0;
        let lhs = &conv[big_n].numerator * &conv[big_n - 1].denominator
            - &conv[big_n - 1].numerator * &conv[big_n].denominator;
        let sign = if big_n % 2 == 1 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        prop_assert_eq!(lhs, sign * &prod, "N = {}", big_n);
    }
    Ok(())
}

#[test]
fn determinant_identity_named_fractions() {
    determinant_holds(&e_cf(), 200).unwrap();
    determinant_holds(&pcf_core::brouncker_cf(), 200).unwrap();
}

#[test]
fn extension_interleaves_original_and_bauer_muir() {
    let cf = e_cf();
    let n = 20;
    let w: Vec<BigRational> = (0..=2 * n as i64 + 2)
        .map(|i| if i == 0 { int(0) } else { int(i + 1) })
        .collect();
    let ext = extension_bmoe(&cf, &w, n).unwrap();
    let original = cf.approximants(n).unwrap();
    let even = even_part(&ext, n).unwrap().approximants(n).unwrap();
    for k in 0..=n {
        assert_eq!(even.get(k), original.get(k), "even k = {k}");
    }
    let bm = bauer_muir(&cf, &w, n + 1).unwrap().cf.approximants(n + 1).unwrap();
    let odd = odd_part(&ext, n - 1).unwrap().approximants(n - 1).unwrap();
    for k in 0..n {
        assert_eq!(odd.get(k), bm.get(k + 1), "odd k = {k}");
    }
}

#[test]
fn similarity_clears_denominators() {
    let cf = CfSpec::finite(
        int(0),
        vec![
            (
                BigRational::new(3.into(), 2.into()),
                BigRational::new(1.into(), 2.into()),
            ),
            (
                BigRational::new(4.into(), 3.into()),
                BigRational::new(1.into(), 2.into()),
            ),
            (
                BigRational::new(5.into(), 4.into()),
                BigRational::new(2.into(), 3.into()),
            ),
        ],
    );
    let cleared = cf.to_integer_cf(3).unwrap();
    assert!(cleared.prefix.iter().all(|(a, b)| a.is_integer() && b.is_integer()));
    assert_eq!(cleared.approximants(3).unwrap(), cf.approximants(3).unwrap());
    let ones = vec![BigRational::one(); 4];
    assert_eq!(cf.similarity_scale(&ones).unwrap(), cf);
}
