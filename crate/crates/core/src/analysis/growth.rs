use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::float::{digits_for_bits, BigFloat};
use crate::poly::Degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthKind {
    /// `B_n >= C (D/(1+eps))^n (n!)^k`
    FactorialPower,
    /// `B_n >= C phi^n`
    GoldenRatio,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthBound {
    pub kind: GrowthKind,
    pub k: u32,
    /// Leading coefficient of `b`; `None` for the golden-ratio bound.
    pub d: Option<BigRational>,
    pub epsilon: BigRational,
    /// Smallest ratio `B_n / bound_n` over the range.
    pub c: BigFloat,
    pub phi: BigFloat,
    pub range: usize,
    pub precision_bits: u32,
}

impl Serialize for GrowthBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let digits = digits_for_bits(self.precision_bits);
        let mut st = s.serialize_struct("GrowthBound", 7)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("D", &self.d.as_ref().map(crate::rational::format_rational))?;
        st.serialize_field("epsilon", &crate::rational::format_rational(&self.epsilon))?;
        st.serialize_field("C", &self.c.to_decimal_string(digits))?;
        st.serialize_field("phi", &self.phi.to_decimal_string(digits))?;
        st.serialize_field("N", &self.range)?;
        st.end()
    }
}

pub fn golden_ratio(prec: u32) -> BigFloat {
    let w = prec + 16;
    BigFloat::from_i64(5)
        .sqrt(w)
        .add(&BigFloat::from_i64(1), w)
        .mul_pow2(-1)
        .round(prec)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Computes `B_1..B_N` exactly and the largest constant `C` for which the
/// applicable lower bound holds on that range.
///
/// The factorial-power bound applies when the tail has non-constant `a` and
/// `b`; otherwise only the golden-ratio bound is available.
pub fn growth_diagnostics(cf: &CfSpec, n: usize, epsilon: &BigRational, prec: u32) -> Result<GrowthBound> {
    if n == 0 {
        return Err(Error::EmptyRange);
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let one = BigRational::one();
    for (i, (a, b)) in cf.terms(n)?.iter().enumerate() {
        if *a < one || *b < one {
            return Err(Error::HypothesisViolation {
                name: format!("a_n >= 1 and b_n >= 1 (fails at n = {})", i + 1),
            });
        }
    }
    let factorial_kind = cf.tail.as_ref().and_then(|t| match (t.a.degree(), t.b.degree()) {
        (Degree::Finite(da), Degree::Finite(db)) if da >= 1 && db >= 1 => {
            Some((db as u32, t.b.leading_coefficient().ok()?))
        }
        _ => None,
    });

    let w = prec + 32;
    let phi = golden_ratio(w);
    let convergents = cf.convergents(n)?;
    let mut c: Option<BigFloat> = None;
    for conv in &convergents[1..] {
        let i = conv.index;
        let ratio = match &factorial_kind {
            Some((k, d)) => {
                let base = d.abs() / (&one + epsilon);
                let bound = base.pow(i as i32) * BigRational::from_integer(factorial(i).pow(*k));
                BigFloat::from_rational(&(&conv.denominator / bound), w)
            }
            None => BigFloat::from_rational(&conv.denominator, w).div(&phi.powi(i as u64, w), w),
        };
        c = Some(match c {
            Some(prev) if prev <= ratio => prev,
            _ => ratio,
        });
    }
    let (kind, k, d) = match factorial_kind {
        Some((k, d)) => (GrowthKind::FactorialPower, k, Some(d)),
        None => (GrowthKind::GoldenRatio, 0, None),
    };
    Ok(GrowthBound {
        kind,
        k,
        d,
        epsilon: epsilon.clone(),
        c: c.expect("range is non-empty").round(prec),
        phi: phi.round(prec),
        range: n,
        precision_bits: prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::e_cf;
    use crate::poly::rf;
    use crate::rational::{int, ratio};

    #[test]
    fn e_grows_factorially() {
        let g = growth_diagnostics(&e_cf(), 50, &int(1), 128).unwrap();
        assert_eq!(g.kind, GrowthKind::FactorialPower);
        assert_eq!(g.k, 1);
        assert_eq!(g.d, Some(int(1)));
        assert!(g.c > BigFloat::zero());
    }

    #[test]
    fn all_ones_is_fibonacci() {
        let cf = CfSpec::with_tail(int(0), vec![], rf("1"), rf("1"), 1);
        let g = growth_diagnostics(&cf, 50, &int(1), 128).unwrap();
        assert_eq!(g.kind, GrowthKind::GoldenRatio);
        assert!(g.c > BigFloat::zero());
        // B_n = F_{n+1}; the minimum of F_{n+1}/phi^n over n >= 1 is at n = 1
        let expected = BigFloat::from_i64(1).div(&golden_ratio(160), 160).round(128);
        assert_eq!(g.c, expected);
        assert!(g.phi.to_decimal_string(12).starts_with("1.6180339887"));
    }

    #[test]
    fn errors() {
        assert_eq!(growth_diagnostics(&e_cf(), 0, &int(1), 64), Err(Error::EmptyRange));
        let cf = CfSpec::with_tail(int(0), vec![], rf("1"), rf("n-3"), 1);
        assert!(matches!(
            growth_diagnostics(&cf, 10, &int(1), 64),
            Err(Error::HypothesisViolation { .. })
        ));
        assert!(growth_diagnostics(&e_cf(), 10, &ratio(-1, 2), 64).is_err());
    }
}
