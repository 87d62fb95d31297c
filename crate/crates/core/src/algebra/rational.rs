//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator. This module adds the few helpers the rest of
//! the crate needs on top of it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::AlgebraError;

pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"n"` or `"n/d"` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let trimmed = text.trim();
    let bad = || AlgebraError::BadFraction(text.to_string());
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Parses an exact fraction, or failing that a decimal literal such as
/// `0.0078125` or `1e-4`, converted exactly from its binary value.
pub fn parse_rational_or_decimal(text: &str) -> Result<Rational, AlgebraError> {
    if let Ok(value) = parse_rational(text) {
        return Ok(value);
    }
    let parsed: f64 = text
        .trim()
        .parse()
        .map_err(|_| AlgebraError::BadFraction(text.to_string()))?;
    BigRational::from_float(parsed).ok_or_else(|| AlgebraError::BadFraction(text.to_string()))
}

/// Formats as `"n"` or `"n/d"`.
pub fn fraction_string(value: &Rational) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-5/2").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn canonical_zero_and_display() {
        let zero = rat(0, -7);
        assert_eq!(zero.numer(), &BigInt::from(0));
        assert_eq!(zero.denom(), &BigInt::from(1));
        assert_eq!(fraction_string(&rat(-12, 8)), "-3/2");
        assert_eq!(fraction_string(&int(64)), "64");
    }

    #[test]
    fn decimals_are_exact_binary_values() {
        assert_eq!(parse_rational_or_decimal("0.0078125").unwrap(), rat(1, 128));
        assert_eq!(parse_rational_or_decimal("1/64").unwrap(), rat(1, 64));
        assert!(parse_rational_or_decimal("nan-ish").is_err());
    }
}
