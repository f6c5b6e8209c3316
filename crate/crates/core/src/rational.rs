//! Exact rational numbers and their text form.
//!
//! Text form is `[-]digits` or `[-]digits/digits`. Values are always
//! normalized, so formatting yields lowest terms with a positive denominator.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::Parse { text: text.to_string() };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if !is_digits(digits) {
        return Err(err());
    }
    let numer = BigInt::from_str(num).map_err(|_| err())?;
    let denom = match den {
        Some(d) => {
            if !is_digits(d) {
                return Err(err());
            }
            BigInt::from_str(d).map_err(|_| err())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::ZeroDenominator { text: text.to_string() });
    }
    Ok(Rational::new(numer, denom))
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Shorthand for small literals, mostly in tests and fixtures.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses a list of rational strings, reporting the offending position.
pub fn parse_rationals<S: AsRef<str>>(items: &[S]) -> Result<Vec<Rational>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s.as_ref()).map_err(|e| e.at(format!("[{i}]"))))
        .collect()
}

pub fn format_rationals(items: &[Rational]) -> Vec<String> {
    items.iter().map(format_rational).collect()
}
