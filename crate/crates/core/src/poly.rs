//! Integer polynomials and rational functions in one variable `n`.
//!
//! These carry the symbolic partial numerators and denominators of
//! polynomial continued fractions. Everything is exact: evaluation happens in
//! arbitrary-precision integers and rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Polynomial with integer coefficients, `coeffs[k]` multiplying `n^k`.
///
/// The highest stored coefficient is never zero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// `p(n + c)`.
    pub fn shift(&self, c: &BigInt) -> Self {
        let lin = Self::new(vec![c.clone(), BigInt::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, k| &(&acc * &lin) + &Self::constant(k.clone()))
    }

    /// Non-negative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|k| k / &c).collect())
    }

    fn divide_by_integer(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    /// Pseudo-remainder of `self` by `divisor` (which must be nonzero).
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("nonzero divisor");
        let lc = divisor.leading().expect("nonzero divisor").clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().expect("nonzero").clone();
            let mut shifted = vec![BigInt::zero(); dr - dd];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &lr));
            r = &r.scale(&lc) - &Self::new(shifted);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient; constants give 1.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_positive();
        }
        if other.is_zero() {
            return self.primitive_positive();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        if a.degree() == Some(0) {
            return Self::constant(1);
        }
        a.primitive_positive()
    }

    fn primitive_positive(&self) -> Self {
        let p = self.primitive();
        if p.leading().is_some_and(Signed::is_negative) {
            -p
        } else {
            p
        }
    }

    /// Exact quotient in `Z[n]`; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let lc = divisor.leading()?;
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (k, rem) = r.leading()?.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            let mut shifted = vec![BigInt::zero(); dr - dd];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &k));
            q[dr - dd] = k;
            r = &r - &Self::new(shifted);
        }
        Some(Self::new(q))
    }

    /// Integer bound `R` such that every real root has `|root| < R`
    /// (Cauchy's bound, rounded up). Constants give 1.
    pub fn root_bound(&self) -> BigInt {
        let Some(lc) = self.leading() else {
            return BigInt::one();
        };
        let lc = lc.abs();
        let worst = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs().div_ceil(&lc))
            .max()
            .unwrap_or_default();
        worst + 1
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs.clone())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "n")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| BigInt::from_str(s.trim()).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

/// Degree of a rational function; the zero function has degree
/// `MinusInfinity`, which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(i64),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Quotient of two integer polynomials, always stored reduced: no common
/// polynomial factor, no common integer content, denominator with positive
/// leading coefficient. The zero function is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunction {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: IntPolynomial, den: IntPolynomial) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num,
                den: IntPolynomial::constant(1),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        } else {
            (num, den)
        };
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.divide_by_integer(&c);
            den = den.divide_by_integer(&c);
        }
        if den.leading().is_some_and(Signed::is_negative) {
            num = -num;
            den = -den;
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        Self::from_poly(IntPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The rational function `n`.
    pub fn var() -> Self {
        Self::from_poly(IntPolynomial::var())
    }

    pub fn from_poly(p: IntPolynomial) -> Self {
        Self::reduced(p, IntPolynomial::constant(1))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(IntPolynomial::constant(c))
    }

    pub fn constant(c: &BigRational) -> Self {
        Self::reduced(
            IntPolynomial::constant(c.numer().clone()),
            IntPolynomial::constant(c.denom().clone()),
        )
    }

    /// Polynomial with rational coefficients (ascending), cleared to integer form.
    pub fn from_rational_coeffs(coeffs: &[BigRational]) -> Self {
        let l = crate::rational::common_denominator(coeffs);
        let num = IntPolynomial::new(
            coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        );
        Self::reduced(num, IntPolynomial::constant(l))
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1.
    pub fn is_integer_polynomial(&self) -> bool {
        self.den.degree() == Some(0) && self.den.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, n: &BigInt) -> Result<BigRational> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return Err(Error::PoleAtArgument { n: n.clone() });
        }
        Ok(BigRational::new(self.num.eval(n), d))
    }

    pub fn eval_i64(&self, n: i64) -> Result<BigRational> {
        self.eval(&BigInt::from(n))
    }

    /// `r(n + c)`.
    pub fn shift(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        Self::reduced(self.num.shift(&c), self.den.shift(&c))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::reduced(self.num.pow(e), self.den.pow(e))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn degree(&self) -> Degree {
        match (self.num.degree(), self.den.degree()) {
            (Some(p), Some(q)) => Degree::Finite(p as i64 - q as i64),
            _ => Degree::MinusInfinity,
        }
    }

    pub fn leading_coefficient(&self) -> Result<BigRational> {
        match (self.num.leading(), self.den.leading()) {
            (Some(p), Some(q)) => Ok(BigRational::new(p.clone(), q.clone())),
            _ => Err(Error::ZeroFunction),
        }
    }

    /// Every integer `n` beyond this bound (in absolute value) is neither a
    /// root nor a pole, so the sign there is that of the leading coefficient.
    pub fn sign_threshold(&self) -> BigInt {
        self.num.root_bound().max(self.den.root_bound())
    }

    /// True iff `r(n) > 0` for every integer `n >= from_n`.
    ///
    /// Decided exactly: the sign is constant past the Cauchy root bound, and
    /// every integer below it is checked individually.
    pub fn eventually_positive(&self, from_n: &BigInt) -> Result<bool> {
        self.sign_scan(from_n, true)
    }

    /// True iff `r(n) >= 0` for every integer `n >= from_n`.
    pub fn eventually_nonnegative(&self, from_n: &BigInt) -> Result<bool> {
        self.sign_scan(from_n, false)
    }

    fn sign_scan(&self, from_n: &BigInt, strict: bool) -> Result<bool> {
        if self.is_zero() {
            return Ok(!strict);
        }
        // past the bound the sign is that of the leading coefficient
        let mut ok = !self.leading_coefficient()?.is_negative();
        let bound = self.sign_threshold();
        let mut n = from_n.clone();
        while n <= bound {
            // keep scanning after a sign failure so poles are still reported
            let v = self.eval(&n)?;
            if v.is_negative() || (strict && v.is_zero()) {
                ok = false;
            }
            n += 1;
        }
        Ok(ok)
    }

    /// True iff `r(n) != 0` for every integer `n >= from_n`.
    pub fn nonvanishing_from(&self, from_n: &BigInt) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        let bound = self.sign_threshold();
        let mut n = from_n.clone();
        while n <= bound {
            if self.eval(&n)?.is_zero() {
                return Ok(false);
            }
            n += 1;
        }
        Ok(true)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(&(&self.num * &rhs.den) - &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.leading().is_some_and(One::is_one) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatFnRepr {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFnRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RatFnRepr::deserialize(d)?;
        RationalFunction::new(r.num, r.den).map_err(serde::de::Error::custom)
    }
}

impl FromStr for RationalFunction {
    type Err = Error;

    /// Parses expressions such as `n^2+3n-1`, `(n+1)(2n-1)` or `(n+2)/n`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
        };
        let r = p.expr()?;
        if p.pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(r)
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r: RationalFunction = s.parse()?;
        if !r.is_integer_polynomial() {
            return Err(Error::Parse(format!("{s:?} is not an integer polynomial")));
        }
        Ok(r.num)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().expect("ascii digits")));
            }
            'n' | 'x' => {
                out.push(Tok::Var);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            _ => return Err(Error::Parse(format!("unexpected {c:?} in {s:?}"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs)?;
                }
                Some(Tok::Num(_) | Tok::Var | Tok::Op('(')) => acc = acc * self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(IntPolynomial::constant(v)))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RationalFunction::var())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Shorthand for parsing a rational function literal; panics on bad input.
pub fn rf(s: &str) -> RationalFunction {
    s.parse().unwrap_or_else(|e| panic!("bad rational function {s:?}: {e}"))
}
