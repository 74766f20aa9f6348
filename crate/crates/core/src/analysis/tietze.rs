use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::poly::RationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TietzeMethod {
    AsymptoticPlusScan,
    ScanOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeReport {
    pub holds: bool,
    #[serde(rename = "N0")]
    pub n0: Option<u64>,
    pub method: TietzeMethod,
    /// Last index checked term by term; may exceed the requested limit when
    /// the asymptotic argument needs a longer scan.
    pub scan_limit: u64,
}

fn sign_of(r: &RationalFunction) -> i32 {
    match r.leading_coefficient() {
        Ok(c) if c.is_positive() => 1,
        Ok(_) => -1,
        Err(_) => 0,
    }
}

/// `b_n >= 1`, and `b_n >= |a_n|`, strengthened to `|a_n| + 1` when
/// `a_{n+1} < 0`.
fn condition(cur: &(BigRational, BigRational), next_a: &BigRational) -> bool {
    let (a, b) = cur;
    let need = if next_a.is_negative() {
        a.abs() + BigRational::one()
    } else {
        a.abs()
    };
    *b >= BigRational::one() && *b >= need
}

/// Decides the irrationality criterion for a fraction with integer terms.
///
/// For a polynomial tail the criterion is reduced to a finite check: past the
/// root bounds of `a`, `b - 1` and `b - |a| - [a < 0]`, every sign is that of
/// a leading coefficient. Indices below that are scanned one by one and
/// `N0` is the smallest index from which the scan never fails.
pub fn tietze_check(cf: &CfSpec, scan_limit: u64) -> Result<TietzeReport> {
    let m = cf.prefix.len();
    for (i, (a, b)) in cf.prefix.iter().enumerate() {
        if !a.is_integer() || !b.is_integer() {
            return Err(Error::NonIntegerTerms { index: i + 1 });
        }
    }
    let Some(tail) = &cf.tail else {
        // a finite fraction is rational
        return Ok(TietzeReport {
            holds: false,
            n0: None,
            method: TietzeMethod::ScanOnly,
            scan_limit: m as u64,
        });
    };
    if !tail.a.is_integer_polynomial() || !tail.b.is_integer_polynomial() {
        return Err(Error::NonIntegerTerms { index: m + 1 });
    }

    // tail terms as functions of the term index
    let c = tail.start_index - m as i64 - 1;
    let a = tail.a.shift(c);
    let b = tail.b.shift(c);
    let sa = sign_of(&a);
    let one = RationalFunction::one();
    let b_minus_one = &b - &one;
    let abs_a = if sa < 0 { -a.clone() } else { a.clone() };
    let mut slack = &b - &abs_a;
    if sa < 0 {
        slack = &slack - &one;
    }
    let eventually_ok = |r: &RationalFunction| r.is_zero() || sign_of(r) > 0;
    if sa == 0 || !eventually_ok(&b_minus_one) || !eventually_ok(&slack) {
        return Ok(TietzeReport {
            holds: false,
            n0: None,
            method: TietzeMethod::AsymptoticPlusScan,
            scan_limit,
        });
    }

    let threshold: BigInt = [
        a.sign_threshold(),
        b_minus_one.sign_threshold(),
        slack.sign_threshold(),
        BigInt::from(m),
    ]
    .into_iter()
    .max()
    .unwrap_or_default()
        + 1;
    let threshold = threshold
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("root bound too large to scan".into()))?;
    let limit = scan_limit.max(threshold).max(1);

    let mut n0 = 1u64;
    let mut cur = cf.term_at(1)?;
    for n in 1..=limit {
        let next = cf.term_at(n as usize + 1)?;
        if !condition(&cur, &next.0) {
            n0 = n + 1;
        }
        cur = next;
    }
    debug_assert!(!cur.0.is_zero());
    Ok(TietzeReport {
        holds: true,
        n0: Some(n0),
        method: TietzeMethod::AsymptoticPlusScan,
        scan_limit: limit,
    })
}
