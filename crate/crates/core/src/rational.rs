//! Exact rational scalars and their textual forms.
//!
//! Every scalar in the crate is a [`Rational`], an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Text input
//! accepts integers (`"3"`), plain decimals without exponent (`"0.75"`)
//! and fractions (`"3/4"`); all are converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision exact fraction.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarParseError {
    #[error("empty scalar")]
    Empty,
    #[error("malformed scalar `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

fn parse_integer(text: &str, original: &str) -> Result<BigInt, ScalarParseError> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ScalarParseError::Malformed(original.to_string()));
    }
    text.trim_start_matches('+')
        .parse::<BigInt>()
        .map_err(|_| ScalarParseError::Malformed(original.to_string()))
}

/// Parses an integer, a plain decimal, or a `p/q` fraction exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim(), s)?;
        let den = parse_integer(den.trim(), s)?;
        if den.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['+', '-']);
        if whole.len() - whole_digits.len() > 1
            || (whole_digits.is_empty() && frac.is_empty())
            || !whole_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(ScalarParseError::Malformed(s.to_string()));
        }
        let mut digits = String::with_capacity(whole_digits.len() + frac.len() + 1);
        digits.push_str(whole_digits);
        digits.push_str(frac);
        let magnitude: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| ScalarParseError::Malformed(s.to_string()))?
        };
        let scale = num_traits::pow(BigInt::from(10u8), frac.len());
        let value = Rational::new(magnitude, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_integer(s, s)?))
}

/// Canonical text: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn format_vector(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}
