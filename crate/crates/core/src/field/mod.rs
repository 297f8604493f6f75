//! Exact scalar arithmetic.
//!
//! The base field is the rationals ([`Rational`]). [`FieldTower`] builds finite
//! towers of simple algebraic extensions on top of it and [`FieldElement`] is
//! the element type used throughout the library. Everything generic (matrices,
//! polynomials) is written against the [`Field`] trait so it can also run over
//! complex dyadic approximations in the numeric fallback.

mod poly;
mod tower;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use poly::UniPoly;
pub use tower::{FieldElement, FieldTower};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A commutative field of characteristic zero with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Zero
    + One
{
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// Whether division-based elimination is cheap for this value's field.
    /// Extension towers answer `false` and get cofactor expansion instead.
    fn cheap_division(&self) -> bool {
        true
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * &i)
    }

    fn square(&self) -> Self {
        self.clone() * self
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Field for Complex<Rational> {
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if Zero::is_zero(&n) {
            None
        } else {
            Some(Complex::new(&self.re / &n, -&self.im / &n))
        }
    }
    fn from_rational(r: &Rational) -> Self {
        Complex::new(r.clone(), Zero::zero())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optional sign, decimal digits, `q != 0`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |position: usize, message: &str| Error::Parse { position, message: format!("{message} in rational {s:?}") };
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    let (num, den) = match t.find('/') {
        Some(i) => (&t[..i], Some((&t[i + 1..], i + 1))),
        None => (t, None),
    };
    let parse_int = |part: &str, at: usize, signed: bool| -> Result<BigInt> {
        let digits = if signed { part.strip_prefix(['-', '+']).unwrap_or(part) } else { part };
        if digits.is_empty() {
            return Err(err(offset + at, "missing digits"));
        }
        if let Some(p) = digits.find(|c: char| !c.is_ascii_digit()) {
            return Err(err(offset + at + (part.len() - digits.len()) + p, "unexpected character"));
        }
        part.parse::<BigInt>().map_err(|_| err(offset + at, "invalid integer"))
    };
    let n = parse_int(num, 0, true)?;
    let d = match den {
        Some((d, at)) => {
            let d = parse_int(d, at, false)?;
            if d.is_zero() {
                return Err(err(offset + at, "zero denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(n, d))
}

/// Formats as `"p"` or `"p/q"`; the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" +7/1 ").unwrap(), int(7));
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        match parse_rational("1/0") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn format_round_trip() {
        for r in [int(0), int(-5), rat(7, 3), rat(-1, 729)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
        assert_eq!(rational_sqrt(&int(0)), Some(int(0)));
    }
}
