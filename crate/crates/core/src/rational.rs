//! Exact rational helpers shared by every module.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational: {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p"` or `"p/q"` with `q != 0`. Whitespace around the parts is not accepted.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(err());
    }
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` rendering; integers render as `"p"`.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Six-place decimal rendering, informative only.
pub fn decimal(value: &Rational) -> String {
    let scaled = (value * Rational::from_integer(BigInt::from(1_000_000))).round();
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let padded = format!("{:0>7}", digits);
    let (whole, frac) = padded.split_at(padded.len() - 6);
    format!("{}{}.{}", if neg { "-" } else { "" }, whole, frac)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `base^exp` for a nonnegative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_reduces() {
        assert_eq!(parse("2/3").unwrap(), ratio(2, 3));
        assert_eq!(parse("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse("-5").unwrap(), int(-5));
        assert_eq!(parse("0/7").unwrap(), zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "1.5", " 1", "1/", "/2", "a/b", "1/2/3", "+1"] {
            assert!(parse(bad).is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn format_round_trips() {
        for v in [ratio(3, 5), int(7), ratio(-1, 9), zero()] {
            assert_eq!(parse(&format(&v)).unwrap(), v);
        }
        assert_eq!(format(&ratio(14, 5)), "14/5");
        assert_eq!(format(&int(2)), "2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&ratio(14, 5)), "2.800000");
        assert_eq!(decimal(&ratio(8, 3)), "2.666667");
        assert_eq!(decimal(&ratio(-1, 3)), "-0.333333");
        assert_eq!(decimal(&zero()), "0.000000");
    }
}
