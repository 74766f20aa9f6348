//! Continued fractions `b0 + a1/(b1 + a2/(b2 + ...))`: a finite prefix of
//! exact terms optionally followed by a rational-function tail.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::RationalFunction;
use crate::rational::{format_rational, parse_rational};

/// A partial numerator / partial denominator pair `(a_n, b_n)`.
pub type Term = (BigRational, BigRational);

/// Symbolic tail: the `k`-th term after the prefix is `(a(n0+k-1), b(n0+k-1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tail {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub start_index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfSpec {
    pub b0: BigRational,
    pub prefix: Vec<Term>,
    pub tail: Option<Tail>,
}

impl CfSpec {
    pub fn finite(b0: BigRational, prefix: Vec<Term>) -> Self {
        CfSpec { b0, prefix, tail: None }
    }

    pub fn with_tail(
        b0: BigRational,
        prefix: Vec<Term>,
        a: RationalFunction,
        b: RationalFunction,
        start_index: i64,
    ) -> Self {
        CfSpec {
            b0,
            prefix,
            tail: Some(Tail { a, b, start_index }),
        }
    }

    pub fn constant(b0: BigRational) -> Self {
        Self::finite(b0, Vec::new())
    }

    /// Number of terms after `b0`, or `None` when the tail makes it infinite.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.prefix.len()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    /// `(a_n, b_n)` for `n >= 1`.
    pub fn term_at(&self, n: usize) -> Result<Term> {
        if n == 0 {
            return Err(Error::NoSuchTerm { index: 0 });
        }
        let m = self.prefix.len();
        let (a, b) = if n <= m {
            self.prefix[n - 1].clone()
        } else {
            let tail = self.tail.as_ref().ok_or(Error::NoSuchTerm { index: n })?;
            let arg = BigInt::from(tail.start_index) + BigInt::from(n - m - 1);
            (tail.a.eval(&arg)?, tail.b.eval(&arg)?)
        };
        if a.is_zero() {
            return Err(Error::ZeroPartialNumerator { index: n });
        }
        Ok((a, b))
    }

    /// Terms `1..=n`; fails on the first term that cannot be realized.
    pub fn terms(&self, n: usize) -> Result<Vec<Term>> {
        (1..=n).map(|i| self.term_at(i)).collect()
    }

    /// Terms `1..=n`, or fewer if the fraction is finite and shorter.
    pub fn terms_upto(&self, n: usize) -> Result<Vec<Term>> {
        let n = self.len().map_or(n, |len| len.min(n));
        self.terms(n)
    }

    pub fn convergent_iter(&self) -> ConvergentIter<'_> {
        ConvergentIter::new(self)
    }

    /// `(A_n, B_n)` for `n = 0..=big_n`.
    pub fn convergents(&self, big_n: usize) -> Result<Vec<Convergent>> {
        self.convergent_iter()
            .take(big_n + 1)
            .collect::<Result<Vec<_>>>()
            .and_then(|v| {
                if v.len() == big_n + 1 {
                    Ok(v)
                } else {
                    Err(Error::NoSuchTerm { index: v.len() })
                }
            })
    }

    pub fn approximants(&self, big_n: usize) -> Result<ApproximantSequence> {
        Ok(ApproximantSequence::from_convergents(&self.convergents(big_n)?))
    }

    /// Equivalence transformation `a_n -> r_n r_{n-1} a_n`, `b_n -> r_n b_n`
    /// over the first `r.len() - 1` terms. The result is a finite fraction
    /// with the same approximants as `self` at every index it covers.
    pub fn similarity_scale(&self, r: &[BigRational]) -> Result<CfSpec> {
        match r.first() {
            Some(r0) if r0.is_one() => {}
            _ => return Err(Error::LeadingScaleNotOne),
        }
        if let Some(i) = r.iter().position(Zero::is_zero) {
            return Err(Error::ZeroScaleFactor { index: i });
        }
        let mut prefix = Vec::with_capacity(r.len() - 1);
        for n in 1..r.len() {
            let (a, b) = self.term_at(n)?;
            prefix.push((&r[n] * &r[n - 1] * a, &r[n] * b));
        }
        Ok(CfSpec::finite(self.b0.clone(), prefix))
    }

    /// Scale factors that clear every denominator in terms `1..=n`.
    pub fn integer_scale_factors(&self, n: usize) -> Result<Vec<BigRational>> {
        let mut r = vec![BigRational::one()];
        for i in 1..=n {
            let (a, b) = self.term_at(i)?;
            let c = &r[i - 1] * a;
            r.push(BigRational::from_integer(c.denom().lcm(b.denom())));
        }
        Ok(r)
    }

    /// Equivalent finite fraction whose terms `1..=n` are all integers.
    pub fn to_integer_cf(&self, n: usize) -> Result<CfSpec> {
        self.similarity_scale(&self.integer_scale_factors(n)?)
    }

    /// The fraction `a_{k+1}/(b_{k+1} + a_{k+2}/(...))` with `b0 = 0`.
    pub fn tail_cf(&self, k: usize) -> Result<CfSpec> {
        self.terms(k)?;
        let m = self.prefix.len();
        let b0 = BigRational::zero();
        if k <= m {
            return Ok(CfSpec {
                b0,
                prefix: self.prefix[k..].to_vec(),
                tail: self.tail.clone(),
            });
        }
        let tail = self.tail.as_ref().expect("terms past the prefix were realized");
        Ok(CfSpec {
            b0,
            prefix: Vec::new(),
            tail: Some(Tail {
                start_index: tail.start_index + (k - m) as i64,
                ..tail.clone()
            }),
        })
    }
}

/// Canonical numerator and denominator of the `index`-th approximant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(rename = "A", with = "crate::rational::serde_rational")]
    pub numerator: BigRational,
    #[serde(rename = "B", with = "crate::rational::serde_rational")]
    pub denominator: BigRational,
}

impl Convergent {
    pub fn value(&self) -> Option<BigRational> {
        if self.denominator.is_zero() {
            None
        } else {
            Some(&self.numerator / &self.denominator)
        }
    }
}

/// Streams convergents `(A_n, B_n)` from `n = 0`, stopping after the last
/// term of a finite fraction or at the first term error.
pub struct ConvergentIter<'a> {
    cf: &'a CfSpec,
    next_index: usize,
    prev: (BigRational, BigRational),
    prev2: (BigRational, BigRational),
    done: bool,
}

impl<'a> ConvergentIter<'a> {
    fn new(cf: &'a CfSpec) -> Self {
        ConvergentIter {
            cf,
            next_index: 0,
            prev: (BigRational::one(), BigRational::zero()),
            prev2: (BigRational::zero(), BigRational::one()),
            done: false,
        }
    }
}

/// `b x + a y`. Integer inputs skip the gcd normalization, which costs time
/// quadratic in the bit length even against a unit denominator.
fn step(b: &BigRational, x: &BigRational, a: &BigRational, y: &BigRational) -> BigRational {
    if b.is_integer() && x.is_integer() && a.is_integer() && y.is_integer() {
        BigRational::from_integer(b.numer() * x.numer() + a.numer() * y.numer())
    } else {
        b * x + a * y
    }
}

impl Iterator for ConvergentIter<'_> {
    type Item = Result<Convergent>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.next_index;
        let (a, b) = if n == 0 {
            (BigRational::one(), self.cf.b0.clone())
        } else {
            if self.cf.len().is_some_and(|len| n > len) {
                self.done = true;
                return None;
            }
            match self.cf.term_at(n) {
                Ok(t) => t,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        };
        // A_{-1} = 1, B_{-1} = 0 and the virtual A_{-2} = 0, B_{-2} = 1 give A_0 = b0, B_0 = 1
        let num = step(&b, &self.prev.0, &a, &self.prev2.0);
        let den = step(&b, &self.prev.1, &a, &self.prev2.1);
        self.prev2 = std::mem::replace(&mut self.prev, (num.clone(), den.clone()));
        self.next_index += 1;
        Some(Ok(Convergent {
            index: n,
            numerator: num,
            denominator: den,
        }))
    }
}

/// Classical approximants `A_n / B_n`; `None` marks an index with `B_n = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ApproximantSequence {
    pub entries: Vec<Option<BigRational>>,
}

impl ApproximantSequence {
    pub fn from_convergents(c: &[Convergent]) -> Self {
        ApproximantSequence {
            entries: c.iter().map(Convergent::value).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.entries.get(n).and_then(Option::as_ref)
    }

    pub fn last_defined(&self) -> Option<&BigRational> {
        self.entries.iter().rev().find_map(Option::as_ref)
    }
}

impl Serialize for ApproximantSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Option<String>> = self.entries.iter().map(|e| e.as_ref().map(format_rational)).collect();
        v.serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct CfRepr {
    b0: String,
    prefix: Vec<[String; 2]>,
    tail: Option<Tail>,
}

impl Serialize for CfSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CfRepr {
            b0: format_rational(&self.b0),
            prefix: self
                .prefix
                .iter()
                .map(|(a, b)| [format_rational(a), format_rational(b)])
                .collect(),
            tail: self.tail.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CfSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CfRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(D::Error::custom);
        let prefix = r
            .prefix
            .iter()
            .map(|[a, b]| Ok((p(a)?, p(b)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(CfSpec {
            b0: p(&r.b0)?,
            prefix,
            tail: r.tail,
        })
    }
}

impl fmt::Display for CfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.b0))?;
        for (a, b) in &self.prefix {
            write!(f, " + {}/{}", format_rational(a), format_rational(b))?;
        }
        if let Some(t) = &self.tail {
            write!(f, " + K_{{n>={}}} ({})/({})", t.start_index, t.a, t.b)?;
        }
        Ok(())
    }
}

/// `e = 2 + 2/(2 + 3/(3 + 4/(4 + ...)))`.
pub fn e_cf() -> CfSpec {
    CfSpec::with_tail(
        BigRational::from_integer(2.into()),
        Vec::new(),
        RationalFunction::var(),
        RationalFunction::var(),
        2,
    )
}

/// Brouncker's fraction `1 + 1/(2 + 9/(2 + 25/(2 + ...)))`, equal to `4/pi`.
pub fn brouncker_cf() -> CfSpec {
    CfSpec::with_tail(
        BigRational::one(),
        Vec::new(),
        crate::poly::rf("(2n-1)^2"),
        RationalFunction::from_int(2),
        1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rf;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn term_at_examples() {
        assert_eq!(brouncker_cf().term_at(3).unwrap(), (int(25), int(2)));
        let e = e_cf();
        assert_eq!(e.term_at(1).unwrap(), (int(2), int(2)));
        assert_eq!(e.term_at(2).unwrap(), (int(3), int(3)));
        let fin = CfSpec::finite(int(0), vec![(int(1), int(1)), (int(1), int(1))]);
        assert_eq!(fin.term_at(3), Err(Error::NoSuchTerm { index: 3 }));
        let z = CfSpec::finite(int(0), vec![(int(0), int(1))]);
        assert_eq!(z.term_at(1), Err(Error::ZeroPartialNumerator { index: 1 }));
    }

    #[test]
    fn convergent_examples() {
        let c = e_cf().convergents(4).unwrap();
        let a: Vec<_> = c.iter().map(|c| c.numerator.clone()).collect();
        let b: Vec<_> = c.iter().map(|c| c.denominator.clone()).collect();
        assert_eq!(a, ints(&[2, 6, 24, 120, 720]));
        assert_eq!(b, ints(&[1, 2, 9, 44, 265]));
        let br = brouncker_cf().approximants(2).unwrap();
        assert_eq!(br.entries[1..], [Some(ratio(3, 2)), Some(ratio(15, 13))]);
        let c0 = e_cf().convergents(0).unwrap();
        assert_eq!((c0[0].numerator.clone(), c0[0].denominator.clone()), (int(2), int(1)));
    }

    #[test]
    fn approximant_examples() {
        let ap = e_cf().approximants(4).unwrap();
        let want = [int(2), int(3), ratio(8, 3), ratio(30, 11), ratio(144, 53)];
        assert_eq!(ap.entries, want.map(Some).to_vec());
        assert_eq!(
            CfSpec::constant(int(5)).approximants(0).unwrap().entries,
            vec![Some(int(5))]
        );
        let undefined = CfSpec::finite(int(1), vec![(int(1), int(0)), (int(1), int(1))]);
        let ap = undefined.approximants(2).unwrap();
        assert_eq!(ap.entries[1], None);
        assert_eq!(ap.entries[2], Some(int(2)));
    }

    #[test]
    fn finite_cf_convergents_stop() {
        let fin = CfSpec::finite(int(0), vec![(int(1), int(1))]);
        assert_eq!(fin.convergents(2), Err(Error::NoSuchTerm { index: 2 }));
        assert_eq!(fin.convergent_iter().count(), 2);
    }

    #[test]
    fn similarity_examples() {
        let e = e_cf();
        let ones = vec![int(1); 6];
        let same = e.similarity_scale(&ones).unwrap();
        assert_eq!(same.prefix, e.terms(5).unwrap());

        let mut twos = vec![int(1)];
        twos.extend(std::iter::repeat_n(int(2), 10));
        let scaled = e.similarity_scale(&twos).unwrap();
        assert_eq!(scaled.term_at(1).unwrap(), (int(4), int(4)));
        assert_eq!(scaled.term_at(2).unwrap(), (int(12), int(6)));
        assert_eq!(scaled.approximants(10).unwrap(), e.approximants(10).unwrap());

        assert_eq!(e.similarity_scale(&[int(2)]), Err(Error::LeadingScaleNotOne));
        assert_eq!(
            e.similarity_scale(&[int(1), int(3), int(0)]),
            Err(Error::ZeroScaleFactor { index: 2 })
        );
    }

    #[test]
    fn integer_clearing() {
        let cf = CfSpec::with_tail(int(0), Vec::new(), rf("1/n"), rf("1/n^2"), 1);
        let ic = cf.to_integer_cf(20).unwrap();
        assert!(ic.prefix.iter().all(|(a, b)| a.is_integer() && b.is_integer()));
        assert_eq!(ic.approximants(20).unwrap(), cf.approximants(20).unwrap());

        let mixed = CfSpec::finite(int(0), vec![(ratio(3, 2), ratio(1, 2)), (ratio(4, 3), ratio(1, 2))]);
        let ic = mixed.to_integer_cf(2).unwrap();
        assert!(ic.prefix.iter().all(|(a, b)| a.is_integer() && b.is_integer()));
        assert_eq!(ic.approximants(2).unwrap(), mixed.approximants(2).unwrap());

        let e = e_cf();
        assert_eq!(e.to_integer_cf(8).unwrap().prefix, e.terms(8).unwrap());
    }

    #[test]
    fn tails() {
        let e = e_cf();
        let t0 = e.tail_cf(0).unwrap();
        assert_eq!(t0.b0, int(0));
        assert_eq!(t0.tail, e.tail);
        let t1 = e.tail_cf(1).unwrap();
        assert_eq!(t1.tail.as_ref().unwrap().start_index, 3);
        for j in 1..6 {
            assert_eq!(t1.term_at(j).unwrap(), e.term_at(j + 1).unwrap());
        }
        let fin = CfSpec::finite(int(3), vec![(int(1), int(1)), (int(2), int(2))]);
        let empty = fin.tail_cf(2).unwrap();
        assert_eq!(empty, CfSpec::constant(int(0)));
        assert!(fin.tail_cf(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cf = CfSpec::with_tail(ratio(1, 2), vec![(int(3), ratio(-4, 7))], rf("n^2"), rf("2n+1"), 2);
        let j = serde_json::to_string(&cf).unwrap();
        assert!(j.starts_with(r#"{"b0":"1/2","prefix":[["3","-4/7"]],"tail":{"a":"#));
        let back: CfSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, cf);
        let fin: CfSpec = serde_json::from_str(r#"{"b0":"2","prefix":[],"tail":null}"#).unwrap();
        assert_eq!(fin, CfSpec::constant(int(2)));
    }
}
