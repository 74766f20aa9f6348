//! Reference values for the named constants, computed without continued
//! fractions: arctangent series for pi, the factorial series for e, direct
//! summation with an Euler-Maclaurin tail for zeta, integer roots for
//! rational powers and a Taylor series for sine.
//!
//! Internally everything is fixed point: an integer `x` stands for
//! `x / 2^w` with `w` a few dozen bits above the requested precision.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::BigFloat;
use crate::generators::NamedConstant;

/// Environment variable naming a JSON file that persists computed constants.
pub const CACHE_ENV: &str = "PCF_CONSTANT_CACHE";

const GUARD: u32 = 32;

fn fixed_one(w: u32) -> BigInt {
    BigInt::one() << w
}

fn to_fixed(q: &BigRational, w: u32) -> BigInt {
    (q.numer() << w as usize).div_floor(q.denom())
}

/// `atan(1/x)` for integer `x > 1`.
fn atan_inv(x: u64, w: u32) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut term = fixed_one(w) / x;
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term /= &x2;
        if term.is_zero() {
            return sum;
        }
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
}

fn pi_fixed(w: u32) -> BigInt {
    16 * atan_inv(5, w) - 4 * atan_inv(239, w)
}

fn e_fixed(w: u32) -> BigInt {
    let mut term = fixed_one(w);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !term.is_zero() {
        sum += &term;
        n += 1;
        term /= n;
    }
    sum
}

/// `sin(x)` for fixed-point `x` with `|x| <= 4`.
fn sin_fixed(x: &BigInt, w: u32) -> BigInt {
    let x2 = (x * x) >> w as usize;
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut j = 1u64;
    loop {
        term = -((&term * &x2) >> w as usize) / ((2 * j) * (2 * j + 1));
        if term.is_zero() {
            return sum;
        }
        sum += &term;
        j += 1;
    }
}

/// `B_0..=B_m` with `B_1 = -1/2`.
fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j<n} C(n+1, j) B_j + (n+1) B_n = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * (n + 1 - j) / (j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

fn zeta_fixed(k: u32, w: u32) -> Result<BigInt> {
    let big_n = (w as u64 / 2).max(16);
    let mut sum = BigInt::zero();
    for n in 1..big_n {
        sum += fixed_one(w) / BigInt::from(n).pow(k);
    }
    // Euler-Maclaurin for sum_{n >= N} n^-k. The remainder is bounded by the
    // first omitted correction since every derivative of x^-k is monotone.
    let nq = BigRational::from_integer(BigInt::from(big_n));
    let kq = BigRational::from_integer(BigInt::from(k));
    let inv_nk = nq.pow(-(k as i32));
    let mut tail = &inv_nk * &nq / (&kq - BigRational::one()) + &inv_nk / BigRational::from_integer(2.into());
    let eps = BigRational::new(BigInt::one(), fixed_one(w));
    let max_j = 4 * big_n as usize;
    let mut bern = bernoulli(128);
    // rising factorial k (k+1) ... (k+2j-2) and (2j)!
    let mut rising = kq.clone();
    let mut fact = BigRational::from_integer(2.into());
    let mut power = &inv_nk / &nq;
    for j in 1..=max_j {
        if 2 * j >= bern.len() {
            bern = bernoulli(4 * j);
        }
        let term = &bern[2 * j] / &fact * &rising * &power;
        if term.abs() < eps {
            return Ok(sum + to_fixed(&tail, w));
        }
        tail += term;
        let (a, b) = (BigInt::from(k as usize + 2 * j - 1), BigInt::from(k as usize + 2 * j));
        rising *= BigRational::from_integer(a * b);
        fact *= BigRational::from_integer(BigInt::from((2 * j + 1) * (2 * j + 2)));
        power /= &nq * &nq;
    }
    Err(Error::UnsupportedConstant(format!("zeta({k}) tail did not settle")))
}

fn root_fixed(p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt, w: u32) -> Result<BigInt> {
    let bad = || Error::UnsupportedConstant(format!("({p}/{q})^({r}/{s})"));
    if q.is_zero() || !s.is_positive() {
        return Err(bad());
    }
    let base = BigRational::new(p.clone(), q.clone());
    if !base.is_positive() {
        return Err(bad());
    }
    let base = if r.is_negative() { base.recip() } else { base };
    let e = r.abs().to_i32().ok_or_else(bad)?;
    let s = s.to_u32().ok_or_else(bad)?;
    let t = base.pow(e);
    let scaled = (t.numer() << (w as usize * s as usize)) / t.denom();
    Ok(Roots::nth_root(&scaled, s))
}

fn compute(c: &NamedConstant, prec: u32) -> Result<BigFloat> {
    let w = prec + GUARD;
    let fixed = match c {
        NamedConstant::PiOver4 => pi_fixed(w) >> 2usize,
        NamedConstant::BrounckerPi => (fixed_one(w) << (w as usize + 2)) / pi_fixed(w),
        NamedConstant::E => e_fixed(w),
        NamedConstant::Zeta { k } => {
            if *k < 2 {
                return Err(Error::UnsupportedConstant(format!("zeta({k})")));
            }
            zeta_fixed(*k, w)?
        }
        NamedConstant::Root { p, q, r, s } => root_fixed(p, q, r, s, w)?,
        NamedConstant::SineProduct { m } => {
            if *m == 0 {
                return Err(Error::UnsupportedConstant("m = 0".into()));
            }
            let pi = pi_fixed(w);
            let s = sin_fixed(&(&pi / *m), w);
            ((s * *m) << w as usize) / pi
        }
    };
    Ok(BigFloat::from_parts(fixed, -(w as i64)).round(prec))
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    constant: NamedConstant,
    precision_bits: u32,
    mantissa: String,
    exponent: i64,
}

#[derive(Default)]
struct Cache {
    values: HashMap<(NamedConstant, u32), BigFloat>,
    file: Option<PathBuf>,
}

static CACHE: Lazy<RwLock<Cache>> = Lazy::new(|| RwLock::new(Cache::default()));

/// Points the process-wide cache at a JSON file, loading whatever it holds.
/// A missing file is fine; it is created on the next insertion.
pub fn set_cache_file(path: Option<PathBuf>) -> Result<()> {
    let mut cache = CACHE.write();
    if let Some(p) = &path {
        if p.exists() {
            let text =
                std::fs::read_to_string(p).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))?;
            let entries: Vec<CacheEntry> =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            for e in entries {
                let mant: BigInt = e
                    .mantissa
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad mantissa {}", e.mantissa)))?;
                cache
                    .values
                    .insert((e.constant, e.precision_bits), BigFloat::from_parts(mant, e.exponent));
            }
        }
    }
    cache.file = path;
    Ok(())
}

/// Reads the cache location from [`CACHE_ENV`], if set.
pub fn cache_file_from_env() -> Result<()> {
    match std::env::var_os(CACHE_ENV) {
        Some(p) if !p.is_empty() => set_cache_file(Some(PathBuf::from(p))),
        _ => Ok(()),
    }
}

fn persist(cache: &Cache) {
    let Some(path) = &cache.file else { return };
    let mut entries: Vec<CacheEntry> = cache
        .values
        .iter()
        .map(|((c, p), v)| CacheEntry {
            constant: c.clone(),
            precision_bits: *p,
            mantissa: v.mantissa().to_string(),
            exponent: v.exponent(),
        })
        .collect();
    entries.sort_by_key(|a| (a.constant.to_string(), a.precision_bits));
    let Ok(text) = serde_json::to_string_pretty(&entries) else {
        return;
    };
    // a failed write only costs a recomputation later
    let tmp = path.with_extension("tmp");
    if std::fs::write(&tmp, text).is_ok() {
        let _ = std::fs::rename(&tmp, path);
    }
}

/// `c` rounded to `precision_bits`, with relative error below
/// `2^(4 - precision_bits)`.
pub fn reference_constant(c: &NamedConstant, precision_bits: u32) -> Result<BigFloat> {
    if precision_bits < 64 {
        return Err(Error::InvalidArgument(
            "oracle precision must be at least 64 bits".into(),
        ));
    }
    let key = (c.clone(), precision_bits);
    if let Some(v) = CACHE.read().values.get(&key) {
        return Ok(v.clone());
    }
    let value = compute(c, precision_bits)?;
    let mut cache = CACHE.write();
    if let Entry::Vacant(e) = cache.values.entry(key) {
        e.insert(value.clone());
        persist(&cache);
    }
    Ok(value)
}
