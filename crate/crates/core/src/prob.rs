//! Exact nonnegative rationals.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;
use crate::space::Outcome;

/// An exact nonnegative rational number in lowest terms.
///
/// Used both for probabilities (where it lies in `[0, 1]`) and for
/// intermediate sums. Subtraction is only exposed through
/// [`Prob::checked_sub`] and [`Prob::complement`] so the value can never
/// go negative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Prob(BigRational);

impl Prob {
    pub fn zero() -> Self {
        Prob(BigRational::zero())
    }

    pub fn one() -> Self {
        Prob(BigRational::one())
    }

    /// `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        Prob(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Wraps a rational, rejecting negative values.
    pub fn from_ratio(r: BigRational) -> Option<Self> {
        if r.is_negative() {
            None
        } else {
            Some(Prob(r))
        }
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True when the value lies in the unit interval.
    pub fn is_probability(&self) -> bool {
        self.0 <= BigRational::one()
    }

    /// `1 - self`, or `None` when `self > 1`.
    pub fn complement(&self) -> Option<Self> {
        Prob::one().checked_sub(self)
    }

    pub fn checked_sub(&self, rhs: &Prob) -> Option<Self> {
        if rhs.0 > self.0 {
            None
        } else {
            Some(Prob(&self.0 - &rhs.0))
        }
    }

    /// `self / rhs`, or `None` for a zero divisor.
    pub fn checked_div(&self, rhs: &Prob) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Prob(&self.0 / &rhs.0))
        }
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Prob {
    type Err = ParseError;

    /// Parses `"p/q"` or `"p"` with nonnegative integers `p`, `q` and `q > 0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Rational(s.to_string());
        let digits = |t: &str| -> Result<BigInt, ParseError> {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        let (numer, denom) = match s.split_once('/') {
            Some((n, d)) => (digits(n)?, digits(d)?),
            None => (digits(s)?, BigInt::one()),
        };
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(Prob(BigRational::new(numer, denom)))
    }
}

impl From<u64> for Prob {
    fn from(n: u64) -> Self {
        Prob(BigRational::from_integer(BigInt::from(n)))
    }
}

impl Add for Prob {
    type Output = Prob;
    fn add(self, rhs: Prob) -> Prob {
        Prob(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Prob> for &'a Prob {
    type Output = Prob;
    fn add(self, rhs: &'a Prob) -> Prob {
        Prob(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Prob> for Prob {
    fn add_assign(&mut self, rhs: &Prob) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Prob {
    fn add_assign(&mut self, rhs: Prob) {
        self.0 += rhs.0;
    }
}

impl Mul for Prob {
    type Output = Prob;
    fn mul(self, rhs: Prob) -> Prob {
        Prob(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Prob> for &'a Prob {
    type Output = Prob;
    fn mul(self, rhs: &'a Prob) -> Prob {
        Prob(&self.0 * &rhs.0)
    }
}

impl Sum for Prob {
    fn sum<I: Iterator<Item = Prob>>(iter: I) -> Prob {
        iter.fold(Prob::zero(), |acc, p| acc + p)
    }
}

impl<'a> Sum<&'a Prob> for Prob {
    fn sum<I: Iterator<Item = &'a Prob>>(iter: I) -> Prob {
        let mut acc = Prob::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

impl Outcome for Prob {
    fn write_ket(&self, out: &mut String) {
        out.push_str(&self.to_string());
    }
}

/// Shorthand for `Prob::new(n, d)`.
pub fn q(n: u64, d: u64) -> Prob {
    Prob::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(q(2, 4).to_string(), "1/2");
        assert_eq!(q(4, 4).to_string(), "1");
        assert_eq!(q(0, 7).to_string(), "0");
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!("3/8".parse::<Prob>().unwrap(), q(3, 8));
        assert_eq!("6/16".parse::<Prob>().unwrap(), q(3, 8));
        assert_eq!("1".parse::<Prob>().unwrap(), Prob::one());
        assert_eq!("0".parse::<Prob>().unwrap(), Prob::zero());
    }

    #[test]
    fn parse_rejects_negative_and_malformed() {
        for bad in ["-1/2", "1/0", "", "1/", "/2", "0.5", "1 /2x", "+1"] {
            assert!(bad.parse::<Prob>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn complement_and_sub() {
        assert_eq!(q(1, 4).complement(), Some(q(3, 4)));
        assert_eq!(q(5, 4).complement(), None);
        assert_eq!(q(1, 4).checked_sub(&q(1, 2)), None);
        assert_eq!(q(1, 2).checked_div(&Prob::zero()), None);
    }
}
