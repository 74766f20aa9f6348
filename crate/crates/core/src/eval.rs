//! Numerical limits of continued fractions.
//!
//! Convergents are run exactly while they stay small, then in `BigFloat`
//! with guard bits once the integers get large.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::float::{digits_for_bits, BigFloat};
use crate::rational::format_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitEstimate {
    pub value: BigFloat,
    /// Last observed difference between successive defined approximants.
    pub error_bound: BigFloat,
    /// Number of partial quotients consumed (index of the last approximant).
    pub terms_used: usize,
    pub converged: bool,
    pub precision_bits: u32,
    /// The last approximant as an exact rational, when still tracked exactly.
    pub exact: Option<BigRational>,
}

impl Serialize for LimitEstimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let digits = digits_for_bits(self.precision_bits);
        let mut st = s.serialize_struct("LimitEstimate", 6)?;
        st.serialize_field("value", &self.value.to_decimal_string(digits))?;
        st.serialize_field("error_bound", &self.error_bound.to_sci_string(6))?;
        st.serialize_field("terms_used", &self.terms_used)?;
        st.serialize_field("converged", &self.converged)?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.serialize_field("exact", &self.exact.as_ref().map(format_rational))?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Exact while convergents are below `exact_limit_bits`, floating after.
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub mode: EvalMode,
    /// Switch-over size for `Auto`; `None` means four times the precision.
    pub exact_limit_bits: Option<u64>,
    pub guard_bits: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            mode: EvalMode::Auto,
            exact_limit_bits: None,
            guard_bits: 64,
        }
    }
}

enum State {
    Exact {
        prev: (BigRational, BigRational),
        prev2: (BigRational, BigRational),
    },
    Float {
        prev: (BigFloat, BigFloat),
        prev2: (BigFloat, BigFloat),
    },
}

fn rat_bits(q: &BigRational) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

enum Approx {
    Exact(BigRational),
    Float(BigFloat),
}

impl Approx {
    fn to_float(&self, prec: u32) -> BigFloat {
        match self {
            Approx::Exact(q) => BigFloat::from_rational(q, prec),
            Approx::Float(f) => f.clone(),
        }
    }
}

/// Iterates approximants until two consecutive successive differences are
/// below `tol`, or `max_terms` terms are used. A finite fraction that runs
/// out of terms yields its exact value with zero error.
pub fn evaluate(cf: &CfSpec, tol: &BigRational, max_terms: usize, precision_bits: u32) -> Result<LimitEstimate> {
    evaluate_with(cf, tol, max_terms, precision_bits, EvalConfig::default())
}

pub fn evaluate_with(
    cf: &CfSpec,
    tol: &BigRational,
    max_terms: usize,
    precision_bits: u32,
    config: EvalConfig,
) -> Result<LimitEstimate> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if max_terms < 2 {
        return Err(Error::InvalidArgument("max_terms must be at least 2".into()));
    }
    let est = run(cf, tol, max_terms, precision_bits, config, true)?;
    if est.converged {
        Ok(est)
    } else {
        Err(Error::DidNotConverge {
            estimate: Box::new(est),
        })
    }
}

/// Uses exactly `terms` partial quotients (fewer only if the fraction is
/// finite). `converged` reports whether the last two differences were below
/// `tol`; no error is raised either way.
pub fn evaluate_terms(cf: &CfSpec, terms: usize, tol: &BigRational, precision_bits: u32) -> Result<LimitEstimate> {
    run(cf, tol, terms, precision_bits, EvalConfig::default(), false)
}

pub fn evaluate_terms_with(
    cf: &CfSpec,
    terms: usize,
    tol: &BigRational,
    precision_bits: u32,
    config: EvalConfig,
) -> Result<LimitEstimate> {
    run(cf, tol, terms, precision_bits, config, false)
}

fn run(
    cf: &CfSpec,
    tol: &BigRational,
    max_terms: usize,
    prec: u32,
    config: EvalConfig,
    stop_early: bool,
) -> Result<LimitEstimate> {
    let work = prec + config.guard_bits;
    let limit_bits = config.exact_limit_bits.unwrap_or(4 * prec as u64);
    let tol_f = BigFloat::from_rational(tol, work);
    let one = BigRational::from_integer(1.into());
    let zero = BigRational::zero();

    let b0 = cf.b0.clone();
    let mut state = State::Exact {
        prev: (b0.clone(), one.clone()),
        prev2: (one.clone(), zero.clone()),
    };
    if config.mode == EvalMode::Float {
        state = to_float(state, work);
    }

    let mut last: Option<Approx> = Some(Approx::Exact(b0));
    let mut last_index = 0usize;
    let mut last_diff: Option<BigFloat> = None;
    let mut streak = 0u32;
    let mut exhausted = false;

    for n in 1..=max_terms {
        if cf.len().is_some_and(|len| n > len) {
            exhausted = true;
            break;
        }
        let (a, b) = cf.term_at(n)?;
        let mut switch = false;
        let current = match &mut state {
            State::Exact { prev, prev2 } => {
                let num = &b * &prev.0 + &a * &prev2.0;
                let den = &b * &prev.1 + &a * &prev2.1;
                let big = rat_bits(&num).max(rat_bits(&den)) > limit_bits;
                let value = if den.is_zero() {
                    None
                } else {
                    Some(Approx::Exact(&num / &den))
                };
                *prev2 = std::mem::replace(prev, (num, den));
                switch = big && config.mode == EvalMode::Auto;
                value
            }
            State::Float { prev, prev2 } => {
                let af = BigFloat::from_rational(&a, work);
                let bf = BigFloat::from_rational(&b, work);
                let num = bf.mul(&prev.0, work).add(&af.mul(&prev2.0, work), work);
                let den = bf.mul(&prev.1, work).add(&af.mul(&prev2.1, work), work);
                let value = if den.is_zero() {
                    None
                } else {
                    Some(Approx::Float(num.div(&den, work)))
                };
                *prev2 = std::mem::replace(prev, (num, den));
                value
            }
        };
        if switch {
            state = to_float(state, work);
        }
        last_index = n;
        let Some(current) = current else { continue };
        if let Some(previous) = &last {
            let diff = match (&current, previous) {
                (Approx::Exact(x), Approx::Exact(y)) => BigFloat::from_rational(&(x - y).abs(), work),
                (x, y) => x.to_float(work).sub(&y.to_float(work), work).abs(),
            };
            if diff < tol_f {
                streak += 1;
            } else {
                streak = 0;
            }
            last_diff = Some(diff);
        }
        last = Some(current);
        if stop_early && streak >= 2 {
            break;
        }
    }

    let last = last.expect("b0 is always defined");
    let exact = match &last {
        Approx::Exact(q) => Some(q.clone()),
        Approx::Float(_) => None,
    };
    let value = last.to_float(work).round(prec);
    if exhausted {
        if let Some(q) = exact {
            return Ok(LimitEstimate {
                value,
                error_bound: BigFloat::zero(),
                terms_used: last_index,
                converged: true,
                precision_bits: prec,
                exact: Some(q),
            });
        }
    }
    Ok(LimitEstimate {
        value,
        error_bound: last_diff.unwrap_or_default().round(prec),
        terms_used: last_index,
        converged: exhausted || streak >= 2,
        precision_bits: prec,
        exact,
    })
}

fn to_float(state: State, work: u32) -> State {
    match state {
        State::Exact { prev, prev2 } => {
            let f = |q: &BigRational| BigFloat::from_rational(q, work);
            State::Float {
                prev: (f(&prev.0), f(&prev.1)),
                prev2: (f(&prev2.0), f(&prev2.1)),
            }
        }
        s => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{brouncker_cf, e_cf};
    use crate::rational::{int, parse_rational, ratio};

    #[test]
    fn e_to_twelve_digits() {
        let est = evaluate(&e_cf(), &parse_rational("1e-12").unwrap(), 40, 128).unwrap();
        assert!(est.converged);
        assert!(est.value.to_decimal_string(16).starts_with("2.71828182845904"));
        assert!(est.error_bound < BigFloat::from_rational(&parse_rational("1e-12").unwrap(), 128));
    }

    #[test]
    fn constant_fraction() {
        let est = evaluate(&CfSpec::constant(int(7)), &ratio(1, 1000), 10, 64).unwrap();
        assert_eq!(est.value, BigFloat::from_i64(7));
        assert!(est.error_bound.is_zero());
        assert!(est.converged);
        assert_eq!(est.exact, Some(int(7)));
    }

    #[test]
    fn not_converging_reports_best_estimate() {
        let err = evaluate(&brouncker_cf(), &parse_rational("1e-30").unwrap(), 50, 64).unwrap_err();
        match err {
            Error::DidNotConverge { estimate } => {
                assert!(!estimate.converged);
                assert_eq!(estimate.terms_used, 50);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn exact_and_float_modes_agree() {
        let tol = parse_rational("1e-20").unwrap();
        let prec = 128;
        let exact = EvalConfig {
            mode: EvalMode::Exact,
            ..Default::default()
        };
        let float = EvalConfig {
            mode: EvalMode::Float,
            ..Default::default()
        };
        let x = evaluate_terms_with(&e_cf(), 60, &tol, prec, exact).unwrap();
        let y = evaluate_terms_with(&e_cf(), 60, &tol, prec, float).unwrap();
        let rel = x.value.sub(&y.value, 256).abs().div(&x.value, 64);
        assert!(rel <= BigFloat::from_parts(1.into(), 1 - prec as i64));
    }

    #[test]
    fn fixed_terms_mode_uses_all_terms() {
        let est = evaluate_terms(&e_cf(), 30, &ratio(1, 10), 64).unwrap();
        assert_eq!(est.terms_used, 30);
        assert!(est.converged);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(evaluate(&e_cf(), &int(0), 10, 64).is_err());
        assert!(evaluate(&e_cf(), &ratio(1, 2), 1, 64).is_err());
    }
}
