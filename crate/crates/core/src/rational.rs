//! Exact rational numbers.
//!
//! Every numeric quantity in the library is a [`Rational`]: prices, patch
//! probabilities, decomposition weights and LP values. Strings use the
//! `p/q` form (or a bare integer) in both directions, so printed values
//! parse back to the same number.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"-p/q"` or an integer. Surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Rational {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty string"));
    }
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| err("numerator is not an integer"))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats in lowest terms: `"2/5"`, `"-3"`, `"0"`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn dot(lhs: &[Rational], rhs: &[Rational]) -> Rational {
    lhs.iter()
        .zip(rhs)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}
