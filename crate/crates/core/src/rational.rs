//! Exact rational scalars.
//!
//! Arithmetic is backed by [`num::BigRational`], which keeps every value
//! reduced with a positive denominator. This module adds the strict text
//! form used by the JSON interchange files: `"p/q"` or `"p"`, an optional
//! leading `-`, no whitespace, and a positive denominator.

use num::bigint::BigInt;
use num::BigRational;
use num::{One, Zero};
use thiserror::Error;

/// Exact rational number: arbitrary-precision, always reduced, denominator > 0.
pub type Rational = BigRational;

/// Error for a rational literal that does not match `-?digits(/digits)?`
/// with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational literal {0:?}")]
pub struct BadRational(pub String);

/// Builds `n/d` from machine integers. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses the strict text form: optional leading `-`, digits, and an
/// optional `/digits` part whose value must be positive.
pub fn parse_rational(text: &str) -> Result<Rational, BadRational> {
    let bad = || BadRational(text.to_owned());
    let (numer_text, denom_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };

    let digits = numer_text.strip_prefix('-').unwrap_or(numer_text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = numer_text.parse().map_err(|_| bad())?;

    let denom = match denom_text {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let denom: BigInt = d.parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(bad());
            }
            denom
        }
    };

    Ok(Rational::new(numer, denom))
}

/// Canonical text form: `"p"` when the denominator is 1, otherwise `"p/q"`.
pub fn render_rational(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("0").unwrap(), rat_int(0));
    }

    #[test]
    fn reduces_on_parse() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(render_rational(&parse_rational("6/4").unwrap()), "3/2");
    }

    #[test]
    fn rejects_malformed_literals() {
        for text in ["", "-", "/2", "3/", "3/0", "1/-2", "+3", " 3", "3 ", "a", "1.5", "1 / 2"] {
            assert!(parse_rational(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn render_is_canonical() {
        assert_eq!(render_rational(&rat(4, 2)), "2");
        assert_eq!(render_rational(&rat(-1, 3)), "-1/3");
        assert_eq!(render_rational(&rat_int(0)), "0");
    }
}
