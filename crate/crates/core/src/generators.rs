//! Constructors for infinite families of polynomial continued fractions with
//! known limits, and named presets for the individual identities.
//!
//! A constructor whose hypotheses fail still returns its member, flagged:
//! convergence often holds outside the proven range and it is useful to be
//! able to look. [`FamilyMember::ensure_verified`] turns a flag into an error.
//! Inputs that make the fraction itself undefined (a pole in a leading term,
//! a zero in the claimed limit's denominator) are hard errors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cf::{brouncker_cf, CfSpec};
use crate::error::{Error, Result};
use crate::poly::{rf, Degree, RationalFunction};
use crate::rational::{format_rational, int, parse_rational};

/// Constants with independent high-precision oracles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum NamedConstant {
    PiOver4,
    E,
    Zeta {
        k: u32,
    },
    /// `(p/q)^(r/s)`.
    Root {
        #[serde(with = "bigint_str")]
        p: BigInt,
        #[serde(with = "bigint_str")]
        q: BigInt,
        #[serde(with = "bigint_str")]
        r: BigInt,
        #[serde(with = "bigint_str")]
        s: BigInt,
    },
    /// `m sin(pi/m) / pi`.
    SineProduct {
        m: u32,
    },
    /// `4/pi`.
    BrounckerPi,
}

mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedConstant::PiOver4 => write!(f, "pi/4"),
            NamedConstant::E => write!(f, "e"),
            NamedConstant::Zeta { k } => write!(f, "zeta({k})"),
            NamedConstant::Root { p, q, r, s } => write!(f, "({p}/{q})^({r}/{s})"),
            NamedConstant::SineProduct { m } => write!(f, "{m}*sin(pi/{m})/pi"),
            NamedConstant::BrounckerPi => write!(f, "4/pi"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LimitClaim {
    ExactRational {
        #[serde(with = "crate::rational::serde_rational")]
        value: BigRational,
    },
    NamedConstant {
        constant: NamedConstant,
    },
}

impl LimitClaim {
    pub fn exact(value: BigRational) -> Self {
        LimitClaim::ExactRational { value }
    }

    pub fn named(constant: NamedConstant) -> Self {
        LimitClaim::NamedConstant { constant }
    }
}

impl fmt::Display for LimitClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitClaim::ExactRational { value } => write!(f, "{}", format_rational(value)),
            LimitClaim::NamedConstant { constant } => write!(f, "{constant}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

impl Hypothesis {
    fn new(name: impl Into<String>, holds: bool) -> Self {
        Hypothesis {
            name: name.into(),
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub cf: CfSpec,
    pub limit: LimitClaim,
    pub hypotheses: Vec<Hypothesis>,
}

impl FamilyMember {
    pub fn verified(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    /// `Err(HypothesisViolation)` naming the first failed hypothesis.
    pub fn ensure_verified(&self) -> Result<()> {
        match self.hypotheses.iter().find(|h| !h.holds) {
            Some(h) => Err(Error::HypothesisViolation { name: h.name.clone() }),
            None => Ok(()),
        }
    }

    fn with_params(mut self, params: &[(&str, String)]) -> Self {
        for (k, v) in params {
            self.params.insert(k.to_string(), v.clone());
        }
        self
    }
}

fn at(r: &RationalFunction, n: i64) -> Result<BigRational> {
    r.eval_i64(n)
}

fn konst(q: &BigRational) -> RationalFunction {
    RationalFunction::constant(q)
}

fn positive_from(r: &RationalFunction, n: i64) -> bool {
    r.eventually_positive(&BigInt::from(n)).unwrap_or(false)
}

fn nonnegative_from(r: &RationalFunction, n: i64) -> bool {
    r.eventually_nonnegative(&BigInt::from(n)).unwrap_or(false)
}

fn nonzero_from(r: &RationalFunction, n: i64) -> bool {
    r.nonvanishing_from(&BigInt::from(n)).unwrap_or(false)
}

fn degree_at_least_one(r: &RationalFunction) -> bool {
    matches!(r.degree(), Degree::Finite(d) if d >= 1)
}

fn undefined(name: &str) -> Error {
    Error::HypothesisViolation { name: name.to_string() }
}

/// `K (H_n + b_n H_{n-1}) / H_{n-2} / b_n` with limit `H_0/H_{-1}`.
pub fn pincherle_family(h: &RationalFunction, b: &RationalFunction) -> Result<FamilyMember> {
    const H_POS: &str = "H(n) > 0 for n >= -1";
    let h1 = h.shift(-1);
    let h2 = h.shift(-2);
    let a = (h + &(b * &h1)).checked_div(&h2).map_err(|_| undefined(H_POS))?;
    let hm1 = at(h, -1).map_err(|_| undefined(H_POS))?;
    if hm1.is_zero() {
        return Err(undefined(H_POS));
    }
    let limit = at(h, 0).map_err(|_| undefined(H_POS))? / hm1;
    let deg_ok = match b.degree() {
        Degree::Finite(d) if d > 0 => true,
        Degree::Finite(0) => b.leading_coefficient().is_ok_and(|c| c > int(1)),
        _ => false,
    };
    Ok(FamilyMember {
        name: "pincherle".into(),
        params: BTreeMap::from([("H".into(), h.to_string()), ("b".into(), b.to_string())]),
        cf: CfSpec::with_tail(BigRational::zero(), Vec::new(), a, b.clone(), 1),
        limit: LimitClaim::exact(limit),
        hypotheses: vec![
            Hypothesis::new(H_POS, positive_from(h, -1)),
            Hypothesis::new("b(n) > 0 for n >= 1", positive_from(b, 1)),
            Hypothesis::new("deg b > 0, or deg b = 0 with leading coefficient > 1", deg_ok),
        ],
    })
}

/// The polynomial form of the Pincherle family with `H = f/g`, `b = c/d`;
/// limit `f_0 g_{-1} / (g_0 f_{-1})`.
pub fn pincherle_poly_family(
    f: &RationalFunction,
    g: &RationalFunction,
    c: &RationalFunction,
    d: &RationalFunction,
) -> Result<FamilyMember> {
    const FG: &str = "f(n), g(n) nonzero with the same sign for n >= -1";
    let v = |r: &RationalFunction, n: i64| at(r, n).map_err(|_| undefined(FG));
    let (fm1, f0, f1, f2) = (v(f, -1)?, v(f, 0)?, v(f, 1)?, v(f, 2)?);
    let (gm1, g0, g1, g2) = (v(g, -1)?, v(g, 0)?, v(g, 1)?, v(g, 2)?);
    let (c1, c2, d1, d2) = (at(c, 1)?, at(c, 2)?, at(d, 1)?, at(d, 2)?);
    if fm1.is_zero() || g0.is_zero() {
        return Err(undefined(FG));
    }
    let limit = &f0 * &gm1 / (&g0 * &fm1);
    let prefix = vec![
        (&gm1 * (&d1 * &f1 * &g0 + &c1 * &f0 * &g1), &c1 * &fm1 * &g0 * &g1),
        (
            &d1 * &fm1 * &g0 * &g0 * (&d2 * &f2 * &g1 + &c2 * &f1 * &g2),
            &c2 * &f0 * &g2,
        ),
    ];
    let s = |r: &RationalFunction, k: i64| r.shift(k);
    let tail_a = s(d, -1) * s(f, -3) * s(g, -2) * (d * f * s(g, -1) + (c * &s(f, -1)) * g.clone());
    let tail_b = c * &s(f, -2) * g.clone();
    let deg_ok = match (c.degree(), d.degree()) {
        (Degree::Finite(x), Degree::Finite(y)) if x > y => true,
        (Degree::Finite(x), Degree::Finite(y)) if x == y => {
            matches!((c.leading_coefficient(), d.leading_coefficient()), (Ok(p), Ok(q)) if p > q)
        }
        _ => false,
    };
    Ok(FamilyMember {
        name: "pincherle-poly".into(),
        params: BTreeMap::from([
            ("f".into(), f.to_string()),
            ("g".into(), g.to_string()),
            ("c".into(), c.to_string()),
            ("d".into(), d.to_string()),
        ]),
        cf: CfSpec::with_tail(BigRational::zero(), prefix, tail_a, tail_b, 3),
        limit: LimitClaim::exact(limit),
        hypotheses: vec![
            Hypothesis::new(FG, positive_from(&(f * g), -1)),
            Hypothesis::new(
                "c(n), d(n) nonzero with the same sign for n >= 0",
                positive_from(&(c * d), 0),
            ),
            Hypothesis::new(
                "deg c > deg d, or equal degrees with leading coefficient of c greater",
                deg_ok,
            ),
        ],
    })
}

/// Perturbed Euler transform of the Leibniz series with `b_n = (-1)^{n-1}/f_n`.
pub fn family_pi(f: &RationalFunction) -> Result<FamilyMember> {
    const F0: &str = "f(0) != 0";
    let f0 = at(f, 0).map_err(|_| undefined(F0))?;
    if f0.is_zero() {
        return Err(undefined(F0));
    }
    let f1 = f.shift(-1);
    let f2 = f.shift(-2);
    let n = RationalFunction::var();
    let g = f * &f1 + rf("2n-1") * (f + &f1);
    let (fa1, fa2) = (at(f, 1)?, at(f, 2)?);
    let prefix = vec![
        (at(&g, 1)?, &fa1 * &f0),
        (&f0 * &f0 * at(&g, 2)?, int(2) * &fa2 * &f0 + int(3) * (&fa2 - &f0)),
    ];
    let tail_a = rf("(2n-3)^2") * g.shift(-2) * g.clone();
    let tail_b = rf("2") * f * &f2 + rf("(2n-1)(2n-3)") * (f - &f2);
    let _ = n;
    Ok(FamilyMember {
        name: "pi-family".into(),
        params: BTreeMap::from([("f".into(), f.to_string())]),
        cf: CfSpec::with_tail(-f0.recip(), prefix, tail_a, tail_b, 3),
        limit: LimitClaim::named(NamedConstant::PiOver4),
        hypotheses: vec![
            Hypothesis::new("f(n) > 0 for n >= 1", positive_from(f, 1)),
            Hypothesis::new(F0, true),
            Hypothesis::new("deg f >= 1 (perturbation tends to 0)", degree_at_least_one(f)),
            Hypothesis::new("g_n != 0 for n >= 1", nonzero_from(&g, 1)),
        ],
    })
}

fn n_pow(k: u32) -> RationalFunction {
    RationalFunction::var().pow(k)
}

/// Perturbed Euler transform of `sum 1/n^k` with `b_n = 1/d_n`.
pub fn family_zeta(k: u32, d: &RationalFunction) -> Result<FamilyMember> {
    const D0: &str = "d(n) != 0 for n >= 0";
    let d0 = at(d, 0).map_err(|_| undefined(D0))?;
    if d0.is_zero() {
        return Err(undefined(D0));
    }
    let nk = n_pow(k);
    let nk1 = nk.shift(-1);
    let dm1 = d.shift(-1);
    let dm2 = d.shift(-2);
    let g = d * &dm1 + nk.clone() * (&dm1 - d);
    let (d1, d2) = (at(d, 1)?, at(d, 2)?);
    let two_k = int(2).pow(k as i32);
    let prefix = vec![
        (at(&g, 1)?, &d0 * &d1),
        (
            -(&d0 * &d0 * at(&g, 2)?),
            &d2 * &d0 * (int(1) + &two_k) + &two_k * (&d0 - &d2),
        ),
    ];
    let tail_a = -(nk1.pow(2) * g.shift(-2) * g.clone());
    let tail_b = d * &dm2 * (&nk1 + &nk) + nk1 * nk * (&dm2 - d);
    Ok(FamilyMember {
        name: "zeta-family".into(),
        params: BTreeMap::from([("k".into(), k.to_string()), ("d".into(), d.to_string())]),
        cf: CfSpec::with_tail(d0.recip(), prefix, tail_a, tail_b, 3),
        limit: LimitClaim::named(NamedConstant::Zeta { k }),
        hypotheses: vec![
            Hypothesis::new("k >= 2", k >= 2),
            Hypothesis::new("deg d >= 1", degree_at_least_one(d)),
            Hypothesis::new(D0, nonzero_from(d, 0)),
            Hypothesis::new("g_n != 0 for n >= 1", nonzero_from(&g, 1)),
        ],
    })
}

/// Perturbed Euler transform of the binomial series for `(1+x)^alpha` with
/// `b_n = r_n x^n (alpha)_n / n!`.
pub fn family_binomial(alpha: &BigRational, x: &BigRational, r: &RationalFunction) -> Result<FamilyMember> {
    let al = konst(alpha);
    let xr = konst(x);
    let one = RationalFunction::one();
    let n = RationalFunction::var();
    let rm1 = r.shift(-1);
    let rm2 = r.shift(-2);
    // g_n = (alpha - n + 1) x (1 + r_n) - n r_{n-1}
    let g = (&al - &n + one.clone()) * &xr * (&one + r) - n.clone() * rm1;
    let (r0, r2) = (at(r, 0)?, at(r, 2)?);
    let ax = alpha * x;
    let one_q = BigRational::one();
    let prefix = vec![
        (at(&g, 1)?, one_q.clone()),
        (
            -(&ax * at(&g, 2)?),
            &ax * ((alpha - &one_q) * x * (&one_q + &r2) + int(2)) - int(2) * &r0,
        ),
    ];
    let tail_a = -((&n - &one) * &xr * (&al - &n + rf("2")) * g.shift(-2) * g.clone());
    let tail_b = (&al - &n + rf("2")) * &xr * ((&al - &n + one.clone()) * &xr * (&one + r) + n.clone())
        - n.clone() * (&n - &one) * rm2;
    let base = &one_q + x;
    Ok(FamilyMember {
        name: "binomial".into(),
        params: BTreeMap::from([
            ("alpha".into(), format_rational(alpha)),
            ("x".into(), format_rational(x)),
            ("r".into(), r.to_string()),
        ]),
        cf: CfSpec::with_tail(&one_q + &r0, prefix, tail_a, tail_b, 3),
        limit: LimitClaim::named(NamedConstant::Root {
            p: base.numer().clone(),
            q: base.denom().clone(),
            r: alpha.numer().clone(),
            s: alpha.denom().clone(),
        }),
        hypotheses: vec![
            Hypothesis::new("|x| < 1", x.abs() < one_q),
            Hypothesis::new("g_n != 0 for n >= 1", nonzero_from(&g, 1)),
        ],
    })
}

fn sine_pieces(m: i64, a: i64) -> (RationalFunction, RationalFunction) {
    let m2 = m * m;
    let g = rf(&format!("({m2}n+1)({a})+(n+1)"));
    let h = rf(&format!(
        "({m2}n^2-1)({m2}(n-1)^2-1)(({a})+n+1) - {}n^2(n^2-1)(({a})+n-1)",
        m2 * m2
    ));
    (g, h)
}

/// Perturbed product transform of `prod (1 - 1/(m n)^2) = m sin(pi/m)/pi`
/// with `b_n = 1 + A/(n+1)`.
pub fn family_sin_product(m: u32, a: i64) -> Result<FamilyMember> {
    let mi = m as i64;
    let m2 = mi * mi;
    let (g, h) = sine_pieces(mi, a);
    let prefix = vec![
        (int((m2 - 1) * (a + 2) - 2 * m2 * (a + 1)), int(2 * m2)),
        (int(2 * m2 * (m2 - 1)) * at(&g, 2)?, at(&h, 2)?),
    ];
    let tail_a = rf(&format!("-n(n-1)({m2})({m2}(n-1)^2-1)")) * g.shift(-2) * g.clone();
    let factor = rf(&format!("1 - 1/({m2}n^2)"));
    let pert = rf(&format!("1 + ({a})/(n+1)"));
    let increment = factor * pert.clone() - pert.shift(-1);
    Ok(FamilyMember {
        name: "sin-product".into(),
        params: BTreeMap::from([("m".into(), m.to_string()), ("A".into(), a.to_string())]),
        cf: CfSpec::with_tail(int(1 + a), prefix, tail_a, h, 3),
        limit: LimitClaim::named(NamedConstant::SineProduct { m }),
        hypotheses: vec![
            Hypothesis::new("m >= 2 (no zero factor)", m >= 2),
            Hypothesis::new("a_n b_n - b_{n-1} != 0 for n >= 1", nonzero_from(&increment, 1)),
        ],
    })
}

/// Bauer-Muir transform of the continued fraction for `e` with
/// `w_n = A(n+1)`, written in simplified polynomial form.
pub fn family_e_bauer_muir(a: i64) -> Result<FamilyMember> {
    let q = |v: i64| int(v);
    let s = a * (1 + a);
    let prefix = vec![
        (q(1), q(1 + a)),
        (q(1 - 2 * s), q(2 * (1 + a))),
        (q(2 * (1 - 3 * s)), q(3 - 5 * a - 6 * a * a)),
    ];
    let tail_a = rf(&format!("(n-1)(1-({s})n)(1-({s})(n-2))"));
    let tail_b = rf(&format!("n - (n(n-1)-1)({a}) - n(n-1)({})", a * a));
    let margin = rf(&format!("(n+1)(1-({s})n)"));
    Ok(FamilyMember {
        name: "e-bauer-muir".into(),
        params: BTreeMap::from([("A".into(), a.to_string())]),
        cf: CfSpec::with_tail(q(2), prefix, tail_a, tail_b, 4),
        limit: LimitClaim::named(NamedConstant::E),
        hypotheses: vec![
            Hypothesis::new("A >= 0", a >= 0),
            Hypothesis::new("a_n - w_{n-1}(b_n + w_n) != 0 for n >= 1", nonzero_from(&margin, 1)),
        ],
    })
}

/// The family converging to `6m + 1` for every admissible `f`.
pub fn family_bml02(f: &RationalFunction, m: i64) -> Result<FamilyMember> {
    let a = f * &rf(&format!("(n^2+3n+2)n({m})+1")) + rf(&format!("2({m})n^2+6({m})n+4({m})-1"));
    let b = f * &rf(&format!("(n^2-1)n({m})+1")) + rf(&format!("2(n^2-1)({m})-2"));
    Ok(FamilyMember {
        name: "bml02".into(),
        params: BTreeMap::from([("f".into(), f.to_string()), ("m".into(), m.to_string())]),
        cf: CfSpec::with_tail(BigRational::zero(), Vec::new(), a, b, 1),
        limit: LimitClaim::exact(int(6 * m + 1)),
        hypotheses: vec![
            Hypothesis::new(
                "f(n) >= 1 for n >= 1",
                nonnegative_from(&(f - &RationalFunction::one()), 1),
            ),
            Hypothesis::new("m >= 1", m >= 1),
        ],
    })
}

fn rational_linear(c0: &BigRational, c1: &BigRational) -> RationalFunction {
    RationalFunction::from_rational_coeffs(&[c0.clone(), c1.clone()])
}

/// `ab/(a+b+d) - (a+d)(b+d)/(a+b+3d) - ...`, whose value is `a`.
pub fn ramanujan_entry13(a: &BigRational, b: &BigRational, d: &BigRational) -> Result<FamilyMember> {
    // a + (n-1)d, b + (n-1)d, a + b + (2n-1)d
    let an = rational_linear(&(a - d), d);
    let bn = rational_linear(&(b - d), d);
    let den = rational_linear(&(a + b - d), &(d * int(2)));
    let tail_a = -(an * bn);
    let prefix = vec![(a * b, a + b + d)];

    let branch_i = if d.is_zero() {
        false
    } else {
        let t = -(b / d);
        let b_ok = !(t.is_integer() && !t.is_negative());
        b_ok && ((a - b) / d).is_negative()
    };
    let branch_ii = !d.is_zero() && a == b;
    let branch_iii = d.is_zero() && a.abs() < b.abs();
    let name = if branch_i {
        "branch (i): d != 0, b != -kd, (a-b)/d < 0"
    } else if branch_ii {
        "branch (ii): d != 0 and a = b"
    } else if branch_iii {
        "branch (iii): d = 0 and |a| < |b|"
    } else {
        "one of: (i) d != 0, b != -kd, (a-b)/d < 0; (ii) d != 0, a = b; (iii) d = 0, |a| < |b|"
    };
    Ok(FamilyMember {
        name: "entry13".into(),
        params: BTreeMap::from([
            ("a".into(), format_rational(a)),
            ("b".into(), format_rational(b)),
            ("d".into(), format_rational(d)),
        ]),
        cf: CfSpec::with_tail(BigRational::zero(), prefix, tail_a, den, 2),
        limit: LimitClaim::exact(a.clone()),
        hypotheses: vec![Hypothesis::new(name, branch_i || branch_ii || branch_iii)],
    })
}

/// Preset identifiers accepted by [`preset`].
pub const PRESETS: &[&str] = &[
    "brouncker",
    "ex1.1",
    "ex2.2",
    "ex2.4",
    "ex2.5",
    "ex3.3",
    "ex3.4",
    "ex3.5",
    "ex4.2",
    "ex5.6",
    "entry13",
    "pincherle",
    "pincherle-poly",
    "pi-family",
    "zeta-family",
    "binomial",
    "sin-product",
];

struct Params<'a> {
    id: &'a str,
    raw: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn allow(&self, keys: &[&str]) -> Result<()> {
        match self.raw.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!(
                "preset {} does not take parameter {k}",
                self.id
            ))),
            None => Ok(()),
        }
    }

    fn get(&self, key: &str, default: &str) -> String {
        self.raw.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    fn int(&self, key: &str, default: i64) -> Result<i64> {
        let Some(s) = self.raw.get(key) else { return Ok(default) };
        let q = parse_rational(s)?;
        if !q.is_integer() {
            return Err(Error::InvalidArgument(format!("{key} must be an integer, got {s}")));
        }
        i64::try_from(q.to_integer()).map_err(|_| Error::InvalidArgument(format!("{key} out of range")))
    }

    fn rat(&self, key: &str, default: &str) -> Result<BigRational> {
        parse_rational(&self.get(key, default))
    }

    fn func(&self, key: &str, default: &str) -> Result<RationalFunction> {
        self.get(key, default).parse()
    }
}

/// Builds a named preset. Unknown ids and unknown or malformed parameters
/// are errors; omitted parameters take the documented defaults.
pub fn preset(id: &str, raw: &BTreeMap<String, String>) -> Result<FamilyMember> {
    let p = Params { id, raw };
    let member = match id {
        "brouncker" => {
            p.allow(&[])?;
            FamilyMember {
                name: "brouncker".into(),
                params: BTreeMap::new(),
                cf: brouncker_cf(),
                limit: LimitClaim::named(NamedConstant::BrounckerPi),
                hypotheses: Vec::new(),
            }
        }
        "ex1.1" => {
            p.allow(&["f", "m"])?;
            family_bml02(&p.func("f", "1")?, p.int("m", 1)?)?
        }
        "ex2.2" => {
            p.allow(&["b"])?;
            ex2_2(&p.func("b", "n+3")?)?
        }
        "ex2.4" => {
            p.allow(&["c"])?;
            ex2_4(&p.func("c", "n+2")?)?
        }
        "ex2.5" => {
            p.allow(&["c"])?;
            ex2_5(&p.func("c", "n+3")?)?
        }
        "ex3.3" => {
            p.allow(&["A"])?;
            ex3_3(p.int("A", 1)?)?
        }
        "ex3.4" => {
            p.allow(&["k", "A"])?;
            let k = p.int("k", 11)?;
            let k = u32::try_from(k).map_err(|_| Error::InvalidArgument("k must be >= 0".into()))?;
            ex3_4(k, p.int("A", 1)?)?
        }
        "ex3.5" => {
            p.allow(&["A"])?;
            ex3_5(p.int("A", 1)?)?
        }
        "ex4.2" => {
            p.allow(&["A"])?;
            ex4_2(p.int("A", 0)?)?
        }
        "ex5.6" => {
            p.allow(&["A"])?;
            family_e_bauer_muir(p.int("A", 0)?)?
        }
        "entry13" => {
            p.allow(&["a", "b", "d"])?;
            ramanujan_entry13(&p.rat("a", "1")?, &p.rat("b", "1")?, &p.rat("d", "1")?)?
        }
        "pincherle" => {
            p.allow(&["H", "b"])?;
            pincherle_family(&p.func("H", "n+2")?, &p.func("b", "2")?)?
        }
        "pincherle-poly" => {
            p.allow(&["f", "g", "c", "d"])?;
            pincherle_poly_family(
                &p.func("f", "1")?,
                &p.func("g", "1")?,
                &p.func("c", "n+2")?,
                &p.func("d", "1")?,
            )?
        }
        "pi-family" => {
            p.allow(&["f"])?;
            family_pi(&p.func("f", "2n+1")?)?
        }
        "zeta-family" => {
            p.allow(&["k", "d"])?;
            let k = u32::try_from(p.int("k", 2)?).map_err(|_| Error::InvalidArgument("k must be >= 0".into()))?;
            family_zeta(k, &p.func("d", "n+1")?)?
        }
        "binomial" => {
            p.allow(&["alpha", "x", "r"])?;
            family_binomial(&p.rat("alpha", "1/5")?, &p.rat("x", "5/7")?, &p.func("r", "n-1")?)?
        }
        "sin-product" => {
            p.allow(&["m", "A"])?;
            let m = u32::try_from(p.int("m", 3)?).map_err(|_| Error::InvalidArgument("m must be >= 0".into()))?;
            family_sin_product(m, p.int("A", 0)?)?
        }
        _ => return Err(Error::UnknownPreset(id.to_string())),
    };
    Ok(FamilyMember {
        name: id.to_string(),
        ..member
    })
}

/// `H_n = n + 2` after clearing denominators.
fn ex2_2(b: &RationalFunction) -> Result<FamilyMember> {
    let base = pincherle_family(&rf("n+2"), b)?;
    let b1 = at(b, 1)?;
    let prefix = vec![(int(3) + int(2) * &b1, b1)];
    let n = RationalFunction::var();
    let tail_a = rf("n-1") * (rf("n+2") + rf("n+1") * b.clone());
    let tail_b = n * b.clone();
    let mut hyps = base.hypotheses.clone();
    hyps.push(Hypothesis::new(
        "b(n) >= 2 for n >= 1",
        nonnegative_from(&(b - &rf("2")), 1),
    ));
    Ok(FamilyMember {
        cf: CfSpec::with_tail(BigRational::zero(), prefix, tail_a, tail_b, 2),
        hypotheses: hyps,
        ..base
    }
    .with_params(&[("b", b.to_string())]))
}

/// `f = n^2 + 1`, `g = d = 1`.
fn ex2_4(c: &RationalFunction) -> Result<FamilyMember> {
    let one = RationalFunction::one();
    let mut m = pincherle_poly_family(&rf("n^2+1"), &one, c, &one)?;
    m.hypotheses.push(Hypothesis::new(
        "c(n) >= 2 for n >= 0",
        nonnegative_from(&(c - &rf("2")), 0),
    ));
    m.params = BTreeMap::from([("c".into(), c.to_string())]);
    Ok(m)
}

/// `f = d = 1`, `g = c`, with the factor `c_{-1}/c_0` cancelled.
fn ex2_5(c: &RationalFunction) -> Result<FamilyMember> {
    let one = RationalFunction::one();
    let base = pincherle_poly_family(&one, c, c, &one)?;
    let (c0, c1) = (at(c, 0)?, at(c, 1)?);
    let prefix = vec![(&c0 + &c1 * &c1, &c1 * &c1)];
    let tail_a = c.shift(-2) * (c.shift(-1) + c.pow(2));
    let mut hyps = base.hypotheses.clone();
    hyps.push(Hypothesis::new(
        "c(n) >= 2 for n >= -1",
        nonnegative_from(&(c - &rf("2")), -1),
    ));
    Ok(FamilyMember {
        params: BTreeMap::from([("c".into(), c.to_string())]),
        cf: CfSpec::with_tail(BigRational::zero(), prefix, tail_a, c.pow(2), 2),
        limit: LimitClaim::exact(int(1)),
        hypotheses: hyps,
        ..base
    })
}

/// `f_n = A(2n - 1)`.
fn ex3_3(a: i64) -> Result<FamilyMember> {
    let base = family_pi(&rf(&format!("({a})(2n-1)")))?;
    let prefix = vec![(int(1), int(1)), (int(-(4 + a)), int(4 - 2 * a))];
    let tail_a = rf(&format!("(2n-3)(2n-5)(({a})(2n-7)+4(n-3))(({a})(2n-3)+4(n-1))"));
    let tail_b = rf(&format!("2({a})(2n-5)+4(2n-3)"));
    let mut hyps = base.hypotheses.clone();
    hyps.push(Hypothesis::new("A >= 1", a >= 1));
    Ok(FamilyMember {
        params: BTreeMap::from([("A".into(), a.to_string())]),
        cf: CfSpec::with_tail(BigRational::new(1.into(), a.into()), prefix, tail_a, tail_b, 3),
        hypotheses: hyps,
        ..base
    })
}

/// `d_n = A(n + 1)`.
fn ex3_4(k: u32, a: i64) -> Result<FamilyMember> {
    if a == 0 {
        return Err(undefined("A >= 1"));
    }
    let base = family_zeta(k, &rf(&format!("({a})(n+1)")))?;
    let mut hyps = base.hypotheses.clone();
    hyps.push(Hypothesis::new("A >= 1", a >= 1));
    if k < 2 {
        return Ok(FamilyMember {
            hypotheses: hyps,
            ..base
        }
        .with_params(&[("A", a.to_string())]));
    }
    let two = |e: u32| BigInt::from(2).pow(e);
    let (ab, kb) = (BigInt::from(a), k);
    let prefix = vec![
        (
            BigRational::from_integer(&ab * 2i32 - 1i32),
            BigRational::from_integer(&ab * 2i32),
        ),
        (
            BigRational::from_integer(-(&ab * 2i32) * (&ab * 3i32 - two(kb - 1))),
            BigRational::from_integer(&ab * 3i32 * (two(kb) + 1i32) - two(kb + 1)),
        ),
    ];
    let tail_a = rf(&format!(
        "-n(n-1)^{}(({a})(n-1)-(n-2)^{})(({a})(n+1)-n^{})",
        2 * k - 1,
        k - 1,
        k - 1
    ));
    let tail_b = rf(&format!("({a})(n+1)((n-1)^{k}+n^{k})-2n^{k}(n-1)^{}", k - 1));
    Ok(FamilyMember {
        params: BTreeMap::from([("k".into(), k.to_string()), ("A".into(), a.to_string())]),
        cf: CfSpec::with_tail(BigRational::new(1.into(), a.into()), prefix, tail_a, tail_b, 3),
        hypotheses: hyps,
        ..base
    })
}

/// `alpha = 1/5`, `x = 5/7`, `r_n = An - 1`.
fn ex3_5(a: i64) -> Result<FamilyMember> {
    let base = family_binomial(
        &BigRational::new(1.into(), 5.into()),
        &BigRational::new(5.into(), 7.into()),
        &rf(&format!("({a})n-1")),
    )?;
    let prefix = vec![(int(a + 7), int(7)), (int(7 * (11 * a - 7)), int(-4 * a + 56))];
    let tail_a = rf(&format!("7(5n-11)(n-2)((12n-37)({a})-7)((12n-13)({a})-7)"));
    let tail_b = rf(&format!("-2({a})(12n^2-31n+16)+14(2+n)"));
    let mut hyps = base.hypotheses.clone();
    hyps.push(Hypothesis::new("A != -7", a != -7));
    Ok(FamilyMember {
        params: BTreeMap::from([("A".into(), a.to_string())]),
        cf: CfSpec::with_tail(BigRational::zero(), prefix, tail_a, tail_b, 3),
        hypotheses: hyps,
        ..base
    })
}

/// `m = 3`, with the expanded cubic denominator.
fn ex4_2(a: i64) -> Result<FamilyMember> {
    let base = family_sin_product(3, a)?;
    let prefix = vec![(int(-10 * a - 2), int(18)), (int(2736 * a + 432), int(-692 * a - 132))];
    let tail_a = rf(&format!(
        "9n(1-n)(3n-2)(3n-4)((1+9({a}))n+({a})+1)((1+9({a}))n-17({a})-1)"
    ));
    let tail_b = rf(&format!("-8(1+({a})) + 2(5+9({a}))n + 144({a})n^2 - 18(1+9({a}))n^3"));
    Ok(FamilyMember {
        params: BTreeMap::from([("A".into(), a.to_string())]),
        cf: CfSpec::with_tail(int(1 + a), prefix, tail_a, tail_b, 3),
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::e_cf;
    use crate::rational::ratio;
    use crate::transforms::bauer_muir;

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn pincherle_examples() {
        let m = pincherle_family(&rf("n+2"), &rf("n+3")).unwrap();
        assert!(m.verified());
        assert_eq!(m.limit, LimitClaim::exact(int(2)));

        let m = pincherle_family(&rf("3"), &rf("2")).unwrap();
        assert_eq!(m.limit, LimitClaim::exact(int(1)));
        for n in 1..5 {
            assert_eq!(m.cf.term_at(n).unwrap(), (int(3), int(2)));
        }

        let bad = pincherle_family(&rf("n+2"), &rf("1")).unwrap();
        assert!(!bad.verified());
        assert!(matches!(bad.ensure_verified(), Err(Error::HypothesisViolation { .. })));
    }

    #[test]
    fn ex2_2_is_integer_form_of_pincherle() {
        let general = pincherle_family(&rf("n+2"), &rf("n+3")).unwrap();
        let display = preset("ex2.2", &params(&[("b", "n+3")])).unwrap();
        assert_eq!(
            display.cf.approximants(30).unwrap(),
            general.cf.approximants(30).unwrap()
        );
        let cleared = general.cf.to_integer_cf(10).unwrap();
        assert!(cleared.prefix.iter().all(|(a, b)| a.is_integer() && b.is_integer()));
        assert_eq!(display.cf.term_at(1).unwrap(), (int(11), int(4)));
        assert_eq!(display.cf.term_at(3).unwrap(), (int(2 * (5 + 4 * 6)), int(18)));
    }

    #[test]
    fn poly_family_examples() {
        let m = preset("ex2.4", &params(&[])).unwrap();
        assert_eq!(m.limit, LimitClaim::exact(ratio(1, 2)));
        // c = n + 2: (c_1 + 2)/(2 c_1), 2(2 c_2 + 5)/c_2, (5 c_3 + 10)/(2 c_3)
        assert_eq!(m.cf.term_at(1).unwrap(), (int(5), int(6)));
        assert_eq!(m.cf.term_at(2).unwrap(), (int(26), int(4)));
        assert_eq!(m.cf.term_at(3).unwrap(), (int(35), int(10)));
        assert!(m.verified());

        let m = preset("ex2.5", &params(&[("c", "n^2+2")])).unwrap();
        assert_eq!(m.limit, LimitClaim::exact(int(1)));
        assert!(m.verified());
        let general = pincherle_poly_family(&rf("1"), &rf("n^2+2"), &rf("n^2+2"), &rf("1")).unwrap();
        // the display drops the factor c_{-1}/c_0 from the leading numerator
        assert_eq!(general.limit, LimitClaim::exact(ratio(3, 2)));
        let scale = ratio(2, 3);
        let g = general.cf.approximants(20).unwrap();
        let d = m.cf.approximants(20).unwrap();
        for n in 1..=20 {
            assert_eq!(d.get(n).unwrap(), &(g.get(n).unwrap() * &scale), "n={n}");
        }

        // equal degrees and equal leading coefficients: limit claimed, member flagged
        let same = pincherle_poly_family(&rf("n+2"), &rf("n+2"), &rf("n+2"), &rf("n+1")).unwrap();
        assert_eq!(same.limit, LimitClaim::exact(int(1)));
        assert!(!same.verified());
    }

    #[test]
    fn pi_family_specializes_to_display() {
        for a in 1..=5 {
            let general = family_pi(&rf(&format!("{a}(2n-1)"))).unwrap();
            let display = preset("ex3.3", &params(&[("A", &a.to_string())])).unwrap();
            assert!(display.verified(), "A={a}");
            assert_eq!(display.cf.b0, ratio(1, a));
            let (g, d) = (
                general.cf.approximants(25).unwrap(),
                display.cf.approximants(25).unwrap(),
            );
            assert_eq!(g.entries[1..], d.entries[1..], "A={a}");
        }
        let flat = family_pi(&rf("1")).unwrap();
        assert!(matches!(flat.ensure_verified(), Err(Error::HypothesisViolation { name }) if name.contains("deg f")));
    }

    #[test]
    fn zeta_display_terms() {
        let m = preset("ex3.4", &params(&[("k", "11"), ("A", "1")])).unwrap();
        let (a2, _) = m.cf.term_at(2).unwrap();
        assert_eq!(a2, int(-2 * (3 - 1024)));
        for k in [2, 3, 11] {
            for a in 1..=3 {
                let general = family_zeta(k, &rf(&format!("{a}(n+1)"))).unwrap();
                let display = ex3_4(k, a).unwrap();
                assert_eq!(
                    general.cf.approximants(15).unwrap(),
                    display.cf.approximants(15).unwrap(),
                    "k={k} A={a}"
                );
            }
        }
    }

    #[test]
    fn binomial_examples() {
        let m = preset("ex3.5", &params(&[("A", "1")])).unwrap();
        let general = family_binomial(&ratio(1, 5), &ratio(5, 7), &rf("n-1")).unwrap();
        assert_eq!(
            m.cf.approximants(20).unwrap().entries[1..],
            general.cf.approximants(20).unwrap().entries[1..]
        );
        assert_eq!(
            m.limit,
            LimitClaim::named(NamedConstant::Root {
                p: 12.into(),
                q: 7.into(),
                r: 1.into(),
                s: 5.into()
            })
        );
        let trunc = family_binomial(&int(1), &ratio(1, 2), &rf("0")).unwrap();
        assert!(!trunc.verified());
    }

    #[test]
    fn sine_examples() {
        let m = preset("ex4.2", &params(&[("A", "0")])).unwrap();
        assert_eq!(m.cf.b0, int(1));
        assert_eq!(m.cf.term_at(1).unwrap(), (int(-2), int(18)));
        assert_eq!(m.cf.term_at(2).unwrap(), (int(432), int(-132)));
        for a in [-1, 0, 1, 4] {
            let general = family_sin_product(3, a).unwrap();
            let display = ex4_2(a).unwrap();
            assert_eq!(general.cf.tail.as_ref().unwrap().b, display.cf.tail.as_ref().unwrap().b);
            assert_eq!(
                general.cf.approximants(12).unwrap(),
                display.cf.approximants(12).unwrap()
            );
        }
        assert_eq!(
            family_sin_product(2, 0).unwrap().limit,
            LimitClaim::named(NamedConstant::SineProduct { m: 2 })
        );
    }

    #[test]
    fn e_bauer_muir_matches_transform() {
        let m = preset("ex5.6", &params(&[("A", "0")])).unwrap();
        let terms: Vec<_> = (1..=5).map(|n| m.cf.term_at(n).unwrap()).collect();
        assert_eq!(
            terms,
            vec![
                (int(1), int(1)),
                (int(1), int(2)),
                (int(2), int(3)),
                (int(3), int(4)),
                (int(4), int(5))
            ]
        );
        for a in 0..=3 {
            let member = family_e_bauer_muir(a).unwrap();
            let w: Vec<_> = (0..=20)
                .map(|n| if n == 0 { int(0) } else { int(a * (n + 1)) })
                .collect();
            let bm = bauer_muir(&e_cf(), &w, 20).unwrap();
            assert_eq!(
                member.cf.approximants(20).unwrap(),
                bm.cf.approximants(20).unwrap(),
                "A={a}"
            );
        }
    }

    #[test]
    fn bml02_examples() {
        let m = preset("ex1.1", &params(&[])).unwrap();
        assert_eq!(m.limit, LimitClaim::exact(int(7)));
        assert!(m.verified());
        let m = family_bml02(&rf("n^2"), 2).unwrap();
        assert_eq!(m.limit, LimitClaim::exact(int(13)));
        let bad = family_bml02(&rf("n-5"), 1).unwrap();
        assert!(!bad.verified());
    }

    #[test]
    fn entry13_branches() {
        let m = ramanujan_entry13(&int(1), &int(1), &int(1)).unwrap();
        assert!(m.verified());
        assert!(m.hypotheses[0].name.contains("(ii)"));
        let m = ramanujan_entry13(&int(1), &int(2), &int(0)).unwrap();
        assert!(m.hypotheses[0].name.contains("(iii)"));
        assert_eq!(m.cf.term_at(1).unwrap(), (int(2), int(3)));
        assert_eq!(m.cf.term_at(2).unwrap(), (int(-2), int(3)));
        let m = ramanujan_entry13(&int(1), &int(3), &int(1)).unwrap();
        assert!(m.hypotheses[0].name.contains("(i)"));
        // (a-b)/d > 0: the misprinted sign
        let m = ramanujan_entry13(&int(3), &int(1), &int(1)).unwrap();
        assert!(!m.verified());
        // b = -kd
        let m = ramanujan_entry13(&int(-3), &int(-2), &int(1)).unwrap();
        assert!(!m.verified());
    }

    #[test]
    fn preset_parameter_validation() {
        assert!(matches!(preset("nope", &params(&[])), Err(Error::UnknownPreset(_))));
        assert!(matches!(
            preset("ex3.3", &params(&[("k", "2")])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            preset("ex3.3", &params(&[("A", "1/2")])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(preset("ex2.2", &params(&[("b", "n+")])), Err(Error::Parse(_))));
        for id in PRESETS {
            let m = preset(id, &params(&[])).unwrap();
            assert_eq!(m.name, *id);
            m.cf.terms(5).unwrap();
        }
    }

    #[test]
    fn json_round_trip() {
        let m = preset("ex3.5", &params(&[])).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: FamilyMember = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
