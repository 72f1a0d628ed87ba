//! Exact rational helpers shared across modules: `p/q` text encoding and
//! conversions between machine and big rationals.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};
use std::str::FromStr;

use thiserror::Error;

/// Small exact rational used for weights and spectral numbers.
pub type Q64 = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational {input:?}")]
pub struct ParseRationalError {
    pub input: String,
}

/// Formats as `p/q`, always with an explicit denominator (`2/1`).
pub fn format_q64(q: &Q64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn format_big(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p`, `-p`, `p/q` (whitespace around the parts is ignored).
pub fn parse_big(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError {
        input: text.to_string(),
    };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

pub fn parse_q64(text: &str) -> Result<Q64, ParseRationalError> {
    let err = || ParseRationalError {
        input: text.to_string(),
    };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: i64 = num.parse().map_err(|_| err())?;
    let den: i64 = den.parse().map_err(|_| err())?;
    if den == 0 {
        return Err(err());
    }
    Ok(Q64::new(num, den))
}

/// Exact integer k-th root of a rational, if one exists.
///
/// Even roots of negative numbers have no rational value and return `None`.
pub fn rational_root(q: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    if q.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.abs().nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == x.abs()).then_some(r)
    };
    let num = root(q.numer())?;
    let den = root(q.denom())?;
    let mut r = BigRational::new(num, den);
    if q.is_negative() {
        r = -r;
    }
    Some(r)
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(format_big(&parse_big("-6/4").unwrap()), "-3/2");
        assert_eq!(format_big(&parse_big(" 7 ").unwrap()), "7/1");
        assert!(parse_big("1/0").is_err());
        assert!(parse_big("x").is_err());
        assert_eq!(format_q64(&parse_q64("10/4").unwrap()), "5/2");
    }

    #[test]
    fn roots() {
        assert_eq!(rational_root(&parse_big("4/9").unwrap(), 2), Some(parse_big("2/3").unwrap()));
        assert_eq!(rational_root(&parse_big("-8").unwrap(), 3), Some(big(-2)));
        assert_eq!(rational_root(&parse_big("-4").unwrap(), 2), None);
        assert_eq!(rational_root(&parse_big("2").unwrap(), 2), None);
    }
}
