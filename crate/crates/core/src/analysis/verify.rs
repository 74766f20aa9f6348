use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::{evaluate_terms, LimitEstimate};
use crate::float::{digits_for_bits, BigFloat};
use crate::generators::{FamilyMember, LimitClaim};

use super::oracle::reference_constant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub preset: String,
    pub params: BTreeMap<String, String>,
    pub terms: usize,
    pub claimed: String,
    pub oracle: String,
    pub value: String,
    pub abs_err: String,
    pub rel_err: Option<String>,
    pub error_bound: String,
    pub tol: String,
    pub verdict: Verdict,
    #[serde(skip)]
    pub abs_err_value: BigFloat,
    #[serde(skip)]
    pub estimate: LimitEstimate,
}

/// Evaluates exactly `terms` approximants and compares the last one with the
/// claimed limit.
///
/// `Pass` when the discrepancy is within `tol`; `Inconclusive` when it is
/// only within `tol` plus the evaluation and oracle error bounds; `Fail`
/// otherwise.
pub fn verify_limit(
    member: &FamilyMember,
    terms: usize,
    precision_bits: u32,
    tol: &BigRational,
) -> Result<VerificationReport> {
    let prec = precision_bits;
    let work = prec + 64;
    let est = evaluate_terms(&member.cf, terms, tol, prec)?;
    let oracle = match &member.limit {
        LimitClaim::ExactRational { value } => BigFloat::from_rational(value, prec),
        LimitClaim::NamedConstant { constant } => reference_constant(constant, prec.max(64))?,
    };
    let abs_err = est.value.sub(&oracle, work).abs();
    let rel_err = (!oracle.is_zero()).then(|| abs_err.div(&oracle.abs(), prec));
    // oracle and rounding slack: a few ulps of each side
    let ulps = oracle.abs().add(&est.value.abs(), work).mul_pow2(4 - prec as i64);
    let slack = est.error_bound.add(&ulps, work);
    let tol_f = BigFloat::from_rational(tol, work);
    let verdict = if abs_err <= tol_f {
        Verdict::Pass
    } else if abs_err <= tol_f.add(&slack, work) {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    let digits = digits_for_bits(prec);
    Ok(VerificationReport {
        preset: member.name.clone(),
        params: member.params.clone(),
        terms: est.terms_used,
        claimed: member.limit.to_string(),
        oracle: oracle.to_decimal_string(digits),
        value: est.value.to_decimal_string(digits),
        abs_err: abs_err.to_sci_string(6),
        rel_err: rel_err.map(|r| r.to_sci_string(6)),
        error_bound: est.error_bound.to_sci_string(6),
        tol: tol_f.to_sci_string(6),
        verdict,
        abs_err_value: abs_err,
        estimate: est,
    })
}
