//! Binary floating point on top of `BigInt`: `mant · 2^exp`, rounded to a
//! caller-chosen number of bits with round-half-even.
//!
//! Only the handful of operations the evaluator and the oracles need are
//! provided. Every operation takes the target precision explicitly; nothing is
//! stored on the value itself.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

/// Number of decimal digits that `bits` binary digits represent faithfully.
pub fn digits_for_bits(bits: u32) -> usize {
    ((bits as u64 * 30103 / 100_000).max(2) - 1) as usize
}

fn bits_of(v: &BigInt) -> i64 {
    v.bits() as i64
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    /// Canonical form: odd mantissa (or zero), so equal values compare equal.
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        match mant.trailing_zeros() {
            None => Self::zero(),
            Some(0) => BigFloat { mant, exp },
            Some(tz) => BigFloat {
                mant: mant >> tz as usize,
                exp: exp + tz as i64,
            },
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::from_parts(v, 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Position just above the most significant bit: `|x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + bits_of(&self.mant)
    }

    /// Rounds `p/q` to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::quotient(q.numer(), q.denom(), 0, prec)
    }

    /// `(n / d) · 2^exp` rounded to `prec` bits.
    fn quotient(n: &BigInt, d: &BigInt, exp: i64, prec: u32) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let neg = n.is_negative() != d.is_negative();
        let shift = prec as i64 + 3 + bits_of(d) - bits_of(n);
        let (num, den) = if shift >= 0 {
            (n.magnitude() << shift as usize, d.magnitude().clone())
        } else {
            (n.magnitude().clone(), d.magnitude() << (-shift) as usize)
        };
        let (q, r) = num.div_rem(&den);
        let q = (q << 1usize) | if r.is_zero() { BigUint::zero() } else { BigUint::one() };
        let m = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q);
        Self::from_parts(m, exp - shift - 1).round(prec)
    }

    /// Exact conversion back to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn round(self, prec: u32) -> Self {
        let prec = prec.max(2) as i64;
        let bits = bits_of(&self.mant);
        if bits <= prec {
            return self;
        }
        let shift = (bits - prec) as usize;
        let neg = self.mant.is_negative();
        let mag = self.mant.magnitude().clone();
        let mut q: BigUint = &mag >> shift;
        let rem = &mag - (&q << shift);
        let half = BigUint::one() << (shift - 1);
        if rem > half || (rem == half && q.is_odd()) {
            q += 1u32;
        }
        let mut exp = self.exp + shift as i64;
        if q.bits() as i64 > prec {
            q >>= 1;
            exp += 1;
        }
        Self::from_parts(BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q), exp)
    }

    /// Drops bits far below the precision of interest, keeping a sticky bit
    /// so later rounding still sees "something nonzero was here".
    fn truncate_below(&self, floor_exp: i64) -> Self {
        if self.exp >= floor_exp || self.is_zero() {
            return self.clone();
        }
        let shift = (floor_exp - self.exp) as usize;
        let neg = self.mant.is_negative();
        let mag = self.mant.magnitude();
        let mut q: BigUint = mag >> shift;
        if (&q << shift) != *mag {
            q |= BigUint::one();
        }
        let m = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q);
        // q may be zero with sticky set to 1; keep sign by construction
        Self::from_parts(m, floor_exp)
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return other.clone().round(prec);
        }
        if other.is_zero() {
            return self.clone().round(prec);
        }
        let floor = self.top().max(other.top()) - prec as i64 - 8;
        let a = self.truncate_below(floor);
        let b = other.truncate_below(floor);
        let e = a.exp.min(b.exp);
        let m = (&a.mant << (a.exp - e) as usize) + (&b.mant << (b.exp - e) as usize);
        Self::from_parts(m, e).round(prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        Self::from_parts(&self.mant * &other.mant, self.exp + other.exp).round(prec)
    }

    /// Division; panics on a zero divisor.
    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        Self::quotient(&self.mant, &other.mant, self.exp - other.exp, prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self::from_parts(self.mant.clone(), self.exp + k)
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(-self.mant.clone(), self.exp)
    }

    pub fn abs(&self) -> Self {
        Self::from_parts(self.mant.abs(), self.exp)
    }

    /// Square root of a non-negative value; panics on negative input.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        if self.is_zero() {
            return Self::zero();
        }
        // want mant·2^shift with an even exponent and ~2(prec+3) bits
        let want = 2 * (prec as i64 + 3);
        let mut shift = (want - bits_of(&self.mant)).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift as usize;
        let r = m.sqrt();
        let sticky = if &r * &r == m { 0u32 } else { 1 };
        let r = (r << 1usize) + sticky;
        Self::from_parts(BigInt::from(r), (self.exp - shift) / 2 - 1).round(prec)
    }

    pub fn powi(&self, n: u64, prec: u32) -> Self {
        let mut result = Self::from_i64(1);
        let mut base = self.clone();
        let mut e = n;
        let work = prec + 2 * (64 - n.leading_zeros());
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, work);
            }
            base = base.mul(&base, work);
            e >>= 1;
        }
        result.round(prec)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.clone().round(60);
        let m: f64 = r.mant.to_string().parse().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }

    /// Decimal exponent `E` with `10^E <= |x| < 10^(E+1)`; `x` nonzero.
    fn decimal_exponent(&self) -> i64 {
        let q = self.to_rational().abs();
        let mut e = ((self.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigRational::from_integer(BigInt::from(10));
        let pow10 = |k: i64| -> BigRational {
            if k >= 0 {
                Pow::pow(&ten, k as u64)
            } else {
                Pow::pow(&ten, k.unsigned_abs()).recip()
            }
        };
        while pow10(e) > q {
            e -= 1;
        }
        while pow10(e + 1) <= q {
            e += 1;
        }
        e
    }

    /// `(sign, digit string of length sig, decimal exponent)`, half-even.
    fn decimal_digits(&self, sig: usize) -> (bool, String, i64) {
        let sig = sig.max(1);
        let q = self.to_rational();
        let neg = q.is_negative();
        let q = q.abs();
        let mut e = self.decimal_exponent();
        let scale = sig as i64 - 1 - e;
        let ten = BigInt::from(10);
        let scaled = if scale >= 0 {
            q * BigRational::from_integer(Pow::pow(&ten, scale as u64))
        } else {
            q / BigRational::from_integer(Pow::pow(&ten, scale.unsigned_abs()))
        };
        let mut n = round_half_even(&scaled);
        if n == Pow::pow(&ten, sig as u64) {
            n /= &ten;
            e += 1;
        }
        (neg, n.to_string(), e)
    }

    /// Scientific notation with `sig` significant digits, e.g. `2.718e0`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (neg, digits, e) = self.decimal_digits(sig);
        let (head, rest) = digits.split_at(1);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(head);
        if !rest.is_empty() {
            s.push('.');
            s.push_str(rest);
        }
        s.push_str(&format!("e{e}"));
        s
    }

    /// Positional notation for moderate magnitudes, scientific otherwise.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (neg, digits, e) = self.decimal_digits(sig);
        if !(-6..=30).contains(&e) {
            return self.to_sci_string(sig);
        }
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        if e < 0 {
            s.push_str("0.");
            s.push_str(&"0".repeat((-e - 1) as usize));
            s.push_str(digits.trim_end_matches('0'));
        } else {
            let int_len = e as usize + 1;
            if digits.len() <= int_len {
                s.push_str(&digits);
                s.push_str(&"0".repeat(int_len - digits.len()));
            } else {
                s.push_str(&digits[..int_len]);
                let frac = digits[int_len..].trim_end_matches('0');
                if !frac.is_empty() {
                    s.push('.');
                    s.push_str(frac);
                }
            }
        }
        s
    }
}

fn round_half_even(q: &BigRational) -> BigInt {
    let fl = q.floor();
    let frac = q - &fl;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = fl.to_integer();
    match frac.cmp(&half) {
        Ordering::Less => base,
        Ordering::Greater => base + 1,
        Ordering::Equal => {
            if base.is_even() {
                base
            } else {
                base + 1
            }
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if sa != sb {
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.magnitude() << (self.exp - e) as usize;
                let b = other.mant.magnitude() << (other.exp - e) as usize;
                a.cmp(&b)
            }
            o => o,
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal_string(sig))
    }
}

impl Serialize for BigFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sci_string(20))
    }
}
