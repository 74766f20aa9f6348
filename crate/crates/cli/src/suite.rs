//! The fixed list of identity checks run by `reproduce-paper`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use pcf_core::analysis::{growth_diagnostics, reference_constant, tietze_check, verify_limit, GrowthKind, Verdict};
use pcf_core::float::BigFloat;
use pcf_core::rational::parse_rational;
use pcf_core::{brouncker_cf, e_cf, preset, CfSpec, NamedConstant, RationalFunction, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// `|value - limit|`
    Direct,
    /// `|4/value - pi|`, for the fraction converging to `4/pi`.
    FourOverValueVsPi,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub criterion: &'static str,
    pub preset: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub terms: usize,
    pub precision_bits: u32,
    pub tol: &'static str,
    pub metric: Metric,
}

impl Check {
    fn new(
        criterion: &'static str,
        preset: &'static str,
        params: &[(&'static str, String)],
        terms: usize,
        tol: &'static str,
    ) -> Self {
        Check {
            criterion,
            preset,
            params: params.to_vec(),
            terms,
            precision_bits: 128,
            tol,
            metric: Metric::Direct,
        }
    }

    pub fn label(&self) -> String {
        let mut s = format!("{}-{}", self.criterion, self.preset);
        for (k, v) in &self.params {
            s.push_str(&format!("-{k}={v}"));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub criterion: String,
    pub label: String,
    pub verdict: Verdict,
    pub detail: Value,
}

impl Outcome {
    pub fn file_name(&self) -> String {
        let safe: String = self
            .label
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || "-_.=".contains(c) {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        format!("{safe}.json")
    }
}

/// One check per identity and parameter choice, at the stated term counts
/// and tolerances.
pub fn limit_checks() -> Vec<Check> {
    let s = |v: i64| v.to_string();
    let mut out = Vec::new();
    out.push(Check {
        metric: Metric::FourOverValueVsPi,
        ..Check::new("2a", "brouncker", &[], 10_000, "1e-3")
    });
    for f in ["1", "n", "n^2"] {
        for m in 1..=3 {
            out.push(Check::new("2b", "ex1.1", &[("f", f.into()), ("m", s(m))], 100, "1e-8"));
        }
    }
    for id in ["ex2.2", "ex2.4", "ex2.5"] {
        out.push(Check::new("2c", id, &[], 100, "1e-8"));
    }
    for a in 1..=5 {
        out.push(Check::new("2d", "ex3.3", &[("A", s(a))], 10_000, "1e-3"));
    }
    for (k, terms, tol, prec) in [(2, 200, "1e-4", 128), (3, 400, "1e-6", 128), (11, 200, "1e-20", 192)] {
        for a in 1..=3 {
            out.push(Check {
                precision_bits: prec,
                ..Check::new("2e", "ex3.4", &[("k", s(k)), ("A", s(a))], terms, tol)
            });
        }
    }
    for a in 1..=3 {
        out.push(Check::new("2f", "ex3.5", &[("A", s(a))], 120, "1e-12"));
    }
    for a in [-1, 0, 1] {
        out.push(Check::new("2g", "ex4.2", &[("A", s(a))], 10_000, "1e-3"));
    }
    for a in 0..=3 {
        out.push(Check::new("2h", "ex5.6", &[("A", s(a))], 60, "1e-10"));
    }
    out.push(Check::new(
        "2i",
        "entry13",
        &[("a", s(1)), ("b", s(1)), ("d", s(1))],
        200,
        "1e-6",
    ));
    out
}

fn params_map(p: &[(&str, String)]) -> BTreeMap<String, String> {
    p.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn failed(criterion: &str, label: String, err: impl std::fmt::Display) -> Outcome {
    Outcome {
        criterion: criterion.into(),
        label,
        verdict: Verdict::Fail,
        detail: json!({ "error": err.to_string() }),
    }
}

pub fn run_check(check: &Check) -> Outcome {
    match try_check(check) {
        Ok(o) => o,
        Err(e) => failed(check.criterion, check.label(), e),
    }
}

fn try_check(check: &Check) -> Result<Outcome> {
    let member = preset(check.preset, &params_map(&check.params))?;
    let tol = parse_rational(check.tol)?;
    let report = verify_limit(&member, check.terms, check.precision_bits, &tol)?;
    let (verdict, criterion_err) = match check.metric {
        Metric::Direct => (report.verdict, report.abs_err.clone()),
        Metric::FourOverValueVsPi => {
            let w = check.precision_bits + 64;
            let pi = reference_constant(&NamedConstant::PiOver4, check.precision_bits)?.mul_pow2(2);
            let v = &report.estimate.value;
            let err = BigFloat::from_i64(4).div(v, w).sub(&pi, w).abs();
            let pass = err <= BigFloat::from_rational(&tol, w);
            (if pass { Verdict::Pass } else { Verdict::Fail }, err.to_sci_string(6))
        }
    };
    Ok(Outcome {
        criterion: check.criterion.into(),
        label: check.label(),
        verdict,
        detail: json!({
            "hypotheses_verified": member.verified(),
            "criterion_err": criterion_err,
            "report": report,
        }),
    })
}

/// Ten distinct admissible `b` for `H = n + 2`, drawn from `seed`.
pub fn independence_members(seed: u64) -> Vec<RationalFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = Vec::new();
    while seen.len() < 10 {
        let deg = rng.gen_range(0..=2);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(1..=9)).collect();
        // a constant b must exceed 1
        if deg == 0 && coeffs[0] < 2 {
            continue;
        }
        let text = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c}n^{i}"))
            .collect::<Vec<_>>()
            .join("+");
        let b: RationalFunction = text.parse().expect("generated polynomial parses");
        if !seen.contains(&b) {
            seen.push(b);
        }
    }
    seen
}

fn independence_check(seed: u64) -> Outcome {
    let label = format!("3-independence-seed={seed}");
    let run = || -> Result<Outcome> {
        let h: RationalFunction = "n+2".parse()?;
        let tol = parse_rational("1e-8")?;
        let mut rows = Vec::new();
        let mut all = true;
        for b in independence_members(seed) {
            let member = pcf_core::generators::pincherle_family(&h, &b)?;
            let r = verify_limit(&member, 100, 128, &tol)?;
            all &= r.verdict == Verdict::Pass && member.verified();
            rows.push(
                json!({"b": b.to_string(), "verified": member.verified(), "abs_err": r.abs_err, "verdict": r.verdict}),
            );
        }
        Ok(Outcome {
            criterion: "3".into(),
            label: label.clone(),
            verdict: if all { Verdict::Pass } else { Verdict::Fail },
            detail: json!({ "H": "n + 2", "claimed": "2", "members": rows }),
        })
    };
    run().unwrap_or_else(|e| failed("3", label.clone(), e))
}

fn tietze_outcome() -> Outcome {
    let run = || -> Result<Outcome> {
        let e = tietze_check(&e_cf(), 1000)?;
        let b = tietze_check(&brouncker_cf(), 1000)?;
        let pass = e.holds && e.n0 == Some(1) && !b.holds;
        Ok(Outcome {
            criterion: "4".into(),
            label: "4-tietze".into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            detail: json!({ "e": e, "brouncker": b }),
        })
    };
    run().unwrap_or_else(|e| failed("4", "4-tietze".into(), e))
}

fn growth_outcome() -> Outcome {
    let run = || -> Result<Outcome> {
        let one = BigRational::from_integer(1.into());
        let ones = CfSpec::with_tail(
            BigRational::from_integer(0.into()),
            vec![],
            "1".parse()?,
            "1".parse()?,
            1,
        );
        let e = growth_diagnostics(&e_cf(), 50, &one, 128)?;
        let f = growth_diagnostics(&ones, 50, &one, 128)?;
        let pass = e.kind == GrowthKind::FactorialPower
            && e.k == 1
            && e.c > BigFloat::zero()
            && f.kind == GrowthKind::GoldenRatio
            && f.c > BigFloat::zero();
        Ok(Outcome {
            criterion: "5".into(),
            label: "5-growth".into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            detail: json!({ "e": e, "all_ones": f }),
        })
    };
    run().unwrap_or_else(|e| failed("5", "5-growth".into(), e))
}

/// Every check, run in parallel and returned in a fixed order.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    enum Job {
        Limit(Check),
        Independence,
        Tietze,
        Growth,
    }
    let mut jobs: Vec<Job> = limit_checks().into_iter().map(Job::Limit).collect();
    jobs.extend([Job::Independence, Job::Tietze, Job::Growth]);
    jobs.par_iter()
        .map(|j| match j {
            Job::Limit(c) => run_check(c),
            Job::Independence => independence_check(seed),
            Job::Tietze => tietze_outcome(),
            Job::Growth => growth_outcome(),
        })
        .collect()
}
