//! Structural transformations between sequences, series, products and
//! continued fractions, plus contractions and the Bauer-Muir transform.
//!
//! All transforms work on finite realizations and return prefix-only
//! fractions; closed-form tails are the business of [`crate::generators`].

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cf::{CfSpec, Term};
use crate::error::{Error, Result};

/// Series `a_0 + a_1 + ...`, optionally with a perturbation `b_0, b_1, ...`
/// of the same length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub terms: Vec<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub perturbation: Option<Vec<BigRational>>,
}

/// Product `a_1 a_2 ...`, optionally with a perturbation `b_0, ..., b_N`
/// (one longer than the factor list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub factors: Vec<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub perturbation: Option<Vec<BigRational>>,
}

mod opt_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => crate::rational::serde_rational_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| {
            v.iter()
                .map(|s| crate::rational::parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

impl SeriesSpec {
    pub fn new(terms: Vec<BigRational>) -> Self {
        SeriesSpec {
            terms,
            perturbation: None,
        }
    }

    pub fn perturbed(terms: Vec<BigRational>, perturbation: Vec<BigRational>) -> Self {
        SeriesSpec {
            terms,
            perturbation: Some(perturbation),
        }
    }

    /// Terms `a_0..=a_n` from a closure.
    pub fn from_fn(n: usize, f: impl FnMut(usize) -> BigRational) -> Self {
        Self::new((0..=n).map(f).collect())
    }
}

impl ProductSpec {
    pub fn new(factors: Vec<BigRational>) -> Self {
        ProductSpec {
            factors,
            perturbation: None,
        }
    }

    pub fn perturbed(factors: Vec<BigRational>, perturbation: Vec<BigRational>) -> Self {
        ProductSpec {
            factors,
            perturbation: Some(perturbation),
        }
    }
}

/// The fraction whose `n`-th approximant is `k[n]`.
pub fn bernoulli_from_sequence(k: &[BigRational]) -> Result<CfSpec> {
    let Some(k0) = k.first() else {
        return Err(Error::InvalidArgument("empty sequence".into()));
    };
    if let Some(i) = (1..k.len()).find(|&i| k[i] == k[i - 1]) {
        return Err(Error::RepeatedValue { index: i });
    }
    let mut prefix: Vec<Term> = Vec::with_capacity(k.len().saturating_sub(1));
    for n in 1..k.len() {
        prefix.push(match n {
            1 => (&k[1] - k0, BigRational::one()),
            2 => (&k[1] - &k[2], &k[2] - k0),
            _ => ((&k[n - 2] - &k[n - 3]) * (&k[n - 1] - &k[n]), &k[n] - &k[n - 2]),
        });
    }
    Ok(CfSpec::finite(k0.clone(), prefix))
}

/// Euler's transformation: approximant `n` is `a_0 + ... + a_n`.
pub fn euler_from_series(s: &SeriesSpec) -> Result<CfSpec> {
    if s.perturbation.is_some() {
        return Err(Error::InvalidArgument("perturbed series: use generalized_euler".into()));
    }
    let a = &s.terms;
    let Some(a0) = a.first() else {
        return Err(Error::InvalidArgument("empty series".into()));
    };
    if let Some(i) = (1..a.len()).find(|&i| a[i].is_zero()) {
        return Err(Error::ZeroTerm { index: i });
    }
    let prefix = (1..a.len())
        .map(|n| match n {
            1 => (a[1].clone(), BigRational::one()),
            2 => (-&a[2], &a[1] + &a[2]),
            _ => (-(&a[n - 2] * &a[n]), &a[n - 1] + &a[n]),
        })
        .collect();
    Ok(CfSpec::finite(a0.clone(), prefix))
}

/// Perturbed Euler transformation: approximant `n` is
/// `a_0 + ... + a_n + b_n`.
pub fn generalized_euler(s: &SeriesSpec) -> Result<CfSpec> {
    let a = &s.terms;
    let Some(b) = &s.perturbation else {
        return euler_from_series(s);
    };
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    if b.len() < a.len() {
        return Err(Error::InsufficientTerms {
            needed: a.len(),
            available: b.len(),
        });
    }
    // e[n] = a_n + b_n - b_{n-1}, the increment of the perturbed partial sums
    let e: Vec<BigRational> = (0..a.len())
        .map(|n| {
            if n == 0 {
                BigRational::zero()
            } else {
                &a[n] + &b[n] - &b[n - 1]
            }
        })
        .collect();
    if let Some(i) = (1..a.len()).find(|&i| e[i].is_zero()) {
        return Err(Error::DegenerateTerm { index: i });
    }
    let prefix = (1..a.len())
        .map(|n| match n {
            1 => (e[1].clone(), BigRational::one()),
            2 => (-&e[2], &a[2] + &a[1] + &b[2] - &b[0]),
            _ => (-(&e[n - 2] * &e[n]), &a[n] + &a[n - 1] + &b[n] - &b[n - 2]),
        })
        .collect();
    Ok(CfSpec::finite(&a[0] + &b[0], prefix))
}

/// Product to fraction: approximant `n` is `a_1 ... a_n` (approximant 0 is 1).
pub fn product_to_cf(p: &ProductSpec) -> Result<CfSpec> {
    if p.perturbation.is_some() {
        return Err(Error::InvalidArgument(
            "perturbed product: use generalized_product".into(),
        ));
    }
    let a = &p.factors;
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::ZeroTerm { index: i + 1 });
        }
        if x.is_one() {
            return Err(Error::UnitTerm { index: i + 1 });
        }
    }
    let one = BigRational::one();
    // factor a_i lives at a[i - 1]
    let f = |i: usize| &a[i - 1];
    let prefix = (1..=a.len())
        .map(|n| match n {
            1 => (f(1) - &one, one.clone()),
            2 => (-(f(1) * (f(2) - &one)), f(2) * f(1) - &one),
            _ => (-(f(n - 1) * (f(n - 2) - &one) * (f(n) - &one)), f(n) * f(n - 1) - &one),
        })
        .collect();
    Ok(CfSpec::finite(one, prefix))
}

/// Perturbed product: approximant `n` is `b_n a_1 ... a_n`.
pub fn generalized_product(p: &ProductSpec) -> Result<CfSpec> {
    let Some(b) = &p.perturbation else {
        return product_to_cf(p);
    };
    let a = &p.factors;
    if b.len() < a.len() + 1 {
        return Err(Error::InsufficientTerms {
            needed: a.len() + 1,
            available: b.len(),
        });
    }
    if let Some(i) = a.iter().position(Zero::is_zero) {
        return Err(Error::ZeroTerm { index: i + 1 });
    }
    let f = |i: usize| &a[i - 1];
    // e(i) = a_i b_i - b_{i-1}
    let e = |i: usize| f(i) * &b[i] - &b[i - 1];
    if let Some(i) = (1..=a.len()).find(|&i| e(i).is_zero()) {
        return Err(Error::DegenerateTerm { index: i });
    }
    let prefix = (1..=a.len())
        .map(|n| match n {
            1 => (e(1), BigRational::one()),
            2 => (-(f(1) * e(2)), f(2) * f(1) * &b[2] - &b[0]),
            _ => (-(f(n - 1) * e(n - 2) * e(n)), f(n) * f(n - 1) * &b[n] - &b[n - 2]),
        })
        .collect();
    Ok(CfSpec::finite(b[0].clone(), prefix))
}

/// Canonical contraction onto the even approximants, `n` terms long
/// (uses terms `1..=2n` of `cf`).
pub fn even_part(cf: &CfSpec, n: usize) -> Result<CfSpec> {
    let t = cf.terms(2 * n)?;
    let a = |i: usize| &t[i - 1].0;
    let b = |i: usize| &t[i - 1].1;
    if let Some(k) = (1..=n).find(|&k| b(2 * k).is_zero()) {
        return Err(Error::ZeroEvenDenominator { index: 2 * k });
    }
    let prefix = (1..=n)
        .map(|k| {
            if k == 1 {
                (b(2) * a(1), b(2) * b(1) + a(2))
            } else {
                let (i, j) = (2 * k, 2 * k - 2);
                let r = b(i) / b(j);
                (-(a(j) * a(i - 1) * &r), a(i) + b(i - 1) * b(i) + a(i - 1) * &r)
            }
        })
        .collect();
    Ok(CfSpec::finite(cf.b0.clone(), prefix))
}

/// Canonical contraction onto the odd approximants, `n` terms long (uses
/// terms `1..=2n+1`). The leading term is `A_1/B_1`, so `C_0/D_0` matches
/// approximant 1 by value and `(C_k, D_k) = (A_{2k+1}, B_{2k+1})` for `k >= 1`.
pub fn odd_part(cf: &CfSpec, n: usize) -> Result<CfSpec> {
    let t = cf.terms(2 * n + 1)?;
    let a = |i: usize| &t[i - 1].0;
    let b = |i: usize| &t[i - 1].1;
    if let Some(k) = (0..=n).find(|&k| b(2 * k + 1).is_zero()) {
        return Err(Error::ZeroOddDenominator { index: 2 * k + 1 });
    }
    let lead = (&cf.b0 * b(1) + a(1)) / b(1);
    let prefix = (1..=n)
        .map(|k| match k {
            1 => (-(a(1) * a(2) * b(3) / b(1)), b(1) * (a(3) + b(2) * b(3)) + a(2) * b(3)),
            2 => (
                -(a(3) * a(4) * b(5) * b(1) / b(3)),
                a(5) + b(4) * b(5) + a(4) * b(5) / b(3),
            ),
            _ => {
                let i = 2 * k + 1;
                let r = b(i) / b(i - 2);
                (-(a(i - 2) * a(i - 1) * &r), a(i) + b(i - 1) * b(i) + a(i - 1) * &r)
            }
        })
        .collect();
    Ok(CfSpec::finite(lead, prefix))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BauerMuirResult {
    pub cf: CfSpec,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub w: Vec<BigRational>,
    /// `a_n - w_{n-1}(b_n + w_n)` for `n = 1..=N`.
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub existence_margin: Vec<BigRational>,
}

fn margins(t: &[Term], w: &[BigRational]) -> Result<Vec<BigRational>> {
    let mut m = Vec::with_capacity(t.len());
    for n in 1..=t.len() {
        let (a, b) = &t[n - 1];
        let v = a - &w[n - 1] * (b + &w[n]);
        if v.is_zero() {
            return Err(Error::TransformDoesNotExist { index: n });
        }
        m.push(v);
    }
    Ok(m)
}

/// Bauer-Muir transform of the first `n` terms with respect to
/// `w_0, ..., w_n`: its canonical pairs are `A_k + w_k A_{k-1}`,
/// `B_k + w_k B_{k-1}`.
pub fn bauer_muir(cf: &CfSpec, w: &[BigRational], n: usize) -> Result<BauerMuirResult> {
    if w.len() < n + 1 {
        return Err(Error::InsufficientTerms {
            needed: n + 1,
            available: w.len(),
        });
    }
    let t = cf.terms(n)?;
    let m = margins(&t, w)?;
    let prefix = (1..=n)
        .map(|k| {
            let (_, b) = &t[k - 1];
            if k == 1 {
                (m[0].clone(), b + &w[1])
            } else {
                let ratio = &m[k - 1] / &m[k - 2];
                (&t[k - 2].0 * &ratio, b + &w[k] - &w[k - 2] * &ratio)
            }
        })
        .collect();
    Ok(BauerMuirResult {
        cf: CfSpec::finite(&cf.b0 + &w[0], prefix),
        w: w[..=n].to_vec(),
        existence_margin: m,
    })
}

/// The `2n`-term fraction interleaving `(a_k/w_{k-1}, b_k + w_k - a_k/w_{k-1})`
/// with `(-w_k, 1)`. Its even part has the approximants of `cf`; its odd
/// part has the approximants of the Bauer-Muir transform (shifted by one
/// index: odd-part approximant `k` is Bauer-Muir approximant `k + 1`).
pub fn extension_bmoe(cf: &CfSpec, w: &[BigRational], n: usize) -> Result<CfSpec> {
    if w.len() < n + 1 {
        return Err(Error::InsufficientTerms {
            needed: n + 1,
            available: w.len(),
        });
    }
    if !w[0].is_zero() {
        return Err(Error::NonzeroW0);
    }
    if let Some(k) = (1..=n).find(|&k| w[k].is_zero()) {
        return Err(Error::ZeroW { index: k });
    }
    let t = cf.terms(n)?;
    margins(&t, w)?;
    let mut prefix = Vec::with_capacity(2 * n);
    for k in 1..=n {
        let (a, b) = &t[k - 1];
        if k == 1 {
            prefix.push((a.clone(), b + &w[1]));
        } else {
            let q = a / &w[k - 1];
            prefix.push((q.clone(), b + &w[k] - q));
        }
        prefix.push((-&w[k], BigRational::one()));
    }
    Ok(CfSpec::finite(cf.b0.clone(), prefix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::e_cf;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn values(cf: &CfSpec, n: usize) -> Vec<Option<BigRational>> {
        cf.approximants(n).unwrap().entries
    }

    #[test]
    fn bernoulli_examples() {
        let cf = bernoulli_from_sequence(&ints(&[1, 2, 3, 4])).unwrap();
        assert_eq!(cf.b0, int(1));
        assert_eq!(cf.prefix, vec![(int(1), int(1)), (int(-1), int(2)), (int(-1), int(2))]);
        assert_eq!(
            values(&cf, 3),
            ints(&[1, 2, 3, 4]).into_iter().map(Some).collect::<Vec<_>>()
        );

        let cf = bernoulli_from_sequence(&ints(&[0, 1])).unwrap();
        assert_eq!(cf.prefix, vec![(int(1), int(1))]);
        assert_eq!(values(&cf, 1)[1], Some(int(1)));

        assert_eq!(
            bernoulli_from_sequence(&ints(&[1, 1, 2])),
            Err(Error::RepeatedValue { index: 1 })
        );
    }

    #[test]
    fn euler_examples() {
        let leibniz = SeriesSpec::from_fn(5, |k| {
            let s = if k % 2 == 0 { 1 } else { -1 };
            ratio(s, 2 * k as i64 + 1)
        });
        let cf = euler_from_series(&leibniz).unwrap();
        let ap = values(&cf, 2);
        assert_eq!(ap, vec![Some(int(1)), Some(ratio(2, 3)), Some(ratio(13, 15))]);

        let single = euler_from_series(&SeriesSpec::new(ints(&[5]))).unwrap();
        assert_eq!(values(&single, 0), vec![Some(int(5))]);

        let zero = SeriesSpec::new(ints(&[1, 0, 2]));
        assert_eq!(euler_from_series(&zero), Err(Error::ZeroTerm { index: 1 }));
    }

    #[test]
    fn generalized_euler_examples() {
        let a = (0..=4)
            .map(|i| if i == 0 { int(0) } else { ratio(1, i * i) })
            .collect::<Vec<_>>();
        let b = (0..=4).map(|n| ratio(1, n + 1)).collect::<Vec<_>>();
        let cf = generalized_euler(&SeriesSpec::perturbed(a.clone(), b)).unwrap();
        assert_eq!(cf.approximants(2).unwrap().entries[2], Some(ratio(19, 12)));

        let zeros = vec![int(0); 5];
        let g = generalized_euler(&SeriesSpec::perturbed(a.clone(), zeros)).unwrap();
        let e = euler_from_series(&SeriesSpec::new(a.clone())).unwrap();
        assert_eq!(values(&g, 4), values(&e, 4));

        // a_1 + b_1 - b_0 = 1 + 0 - 1
        let bad = SeriesSpec::perturbed(a, ints(&[1, 0, 0, 0, 0]));
        assert_eq!(generalized_euler(&bad), Err(Error::DegenerateTerm { index: 1 }));
    }

    #[test]
    fn product_examples() {
        let cf = product_to_cf(&ProductSpec::new(vec![int(2), ratio(3, 2)])).unwrap();
        assert_eq!(values(&cf, 2), vec![Some(int(1)), Some(int(2)), Some(int(3))]);
        assert_eq!(
            product_to_cf(&ProductSpec::new(vec![int(2), int(1)])),
            Err(Error::UnitTerm { index: 2 })
        );
        assert_eq!(
            product_to_cf(&ProductSpec::new(vec![int(0)])),
            Err(Error::ZeroTerm { index: 1 })
        );
    }

    #[test]
    fn generalized_product_examples() {
        let a = vec![int(2), ratio(3, 2), int(5)];
        let ones = vec![int(1); 4];
        let g = generalized_product(&ProductSpec::perturbed(a.clone(), ones)).unwrap();
        let p = product_to_cf(&ProductSpec::new(a.clone())).unwrap();
        assert_eq!(values(&g, 3), values(&p, 3));

        let b = vec![int(1), ratio(1, 2), ratio(1, 3)];
        let degenerate = ProductSpec::perturbed(vec![int(2), ratio(3, 2)], b);
        assert_eq!(
            generalized_product(&degenerate),
            Err(Error::DegenerateTerm { index: 1 })
        );

        let b = vec![int(1), ratio(1, 3), ratio(1, 2), int(2)];
        let cf = generalized_product(&ProductSpec::perturbed(a, b)).unwrap();
        assert_eq!(
            values(&cf, 3),
            vec![Some(int(1)), Some(ratio(2, 3)), Some(ratio(3, 2)), Some(int(30))]
        );
    }

    #[test]
    fn contraction_examples() {
        let e = e_cf();
        let conv = e.convergents(9).unwrap();
        let ev = even_part(&e, 4).unwrap().convergents(4).unwrap();
        assert_eq!((ev[1].numerator.clone(), ev[1].denominator.clone()), (int(24), int(9)));
        for k in 0..=4 {
            assert_eq!(ev[k].numerator, conv[2 * k].numerator);
            assert_eq!(ev[k].denominator, conv[2 * k].denominator);
        }
        let od = odd_part(&e, 4).unwrap().convergents(4).unwrap();
        assert_eq!(
            (od[1].numerator.clone(), od[1].denominator.clone()),
            (int(120), int(44))
        );
        assert_eq!(od[0].value(), conv[1].value());
        for k in 1..=4 {
            assert_eq!(od[k].numerator, conv[2 * k + 1].numerator);
            assert_eq!(od[k].denominator, conv[2 * k + 1].denominator);
        }

        let z2 = CfSpec::finite(int(0), vec![(int(1), int(1)), (int(1), int(0))]);
        assert_eq!(even_part(&z2, 1), Err(Error::ZeroEvenDenominator { index: 2 }));
        let z1 = CfSpec::finite(int(0), vec![(int(1), int(0)), (int(1), int(1)), (int(1), int(1))]);
        assert_eq!(odd_part(&z1, 1), Err(Error::ZeroOddDenominator { index: 1 }));
    }

    #[test]
    fn bauer_muir_examples() {
        let e = e_cf();
        let ones = vec![int(1); 6];
        let bm = bauer_muir(&e, &ones, 5).unwrap();
        let c = bm.cf.convergents(1).unwrap();
        assert_eq!((c[1].numerator.clone(), c[1].denominator.clone()), (int(8), int(3)));

        let zeros = vec![int(0); 11];
        let same = bauer_muir(&e, &zeros, 10).unwrap();
        assert_eq!(same.cf.convergents(10).unwrap(), e.convergents(10).unwrap());

        // a_1 - w_0(b_1 + w_1) = 2 - 1 * (2 + 0)
        let w = ints(&[1, 0, 0]);
        assert_eq!(bauer_muir(&e, &w, 2), Err(Error::TransformDoesNotExist { index: 1 }));
    }

    #[test]
    fn extension_examples() {
        let e = e_cf();
        let w: Vec<_> = (0..=20).map(|n| if n == 0 { int(0) } else { int(n + 1) }).collect();
        let ext = extension_bmoe(&e, &w, 20).unwrap();
        let even = even_part(&ext, 20).unwrap();
        assert_eq!(values(&even, 20), values(&e, 20));
        let odd = odd_part(&ext, 19).unwrap();
        let bm = bauer_muir(&e, &w, 20).unwrap();
        let (ov, bv) = (values(&odd, 19), values(&bm.cf, 20));
        for k in 0..=19 {
            assert_eq!(ov[k], bv[k + 1], "index {k}");
        }

        assert_eq!(extension_bmoe(&e, &ints(&[1, 2, 3]), 2), Err(Error::NonzeroW0));
        assert_eq!(extension_bmoe(&e, &ints(&[0, 2, 0]), 2), Err(Error::ZeroW { index: 2 }));
    }
}
