//! Exact rational scalars and their text representation.
//!
//! Every core algorithm in this crate compares partial sums and solves
//! linear systems where membership is a closed condition, so tolerances are
//! not an option. Scores and probabilities are arbitrary-precision rationals
//! and decimal inputs like `-5.2` are parsed exactly (to `-26/5`), never
//! through binary floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`. Panics if `d` is zero.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Absolute value helper, by value.
pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// Converts a finite float to the exact rational it represents.
pub fn from_f64(v: f64) -> Result<Rat> {
    Rat::from_float(v).ok_or_else(|| Error::Parse(format!("{v} is not a finite number")))
}

/// Parses a rational from text.
///
/// Accepted forms: an integer (`-3`), a fraction (`21/40`), or a decimal
/// (`-5.2`, `.05`). Decimals convert exactly: `-5.2` parses to `-26/5`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_bigint(num)?;
        let d = parse_bigint(den)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = split_sign(int_part);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?
        };
        if sign < 0 {
            n = -n;
        }
        let d = BigInt::from(10).pow(frac_part.len() as u32);
        return Ok(Rat::new(n, d));
    }
    Ok(Rat::from_integer(parse_bigint(s)?))
}

/// Formats a rational as `n` when integral and `n/d` otherwise.
pub fn format_rational(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn split_sign(s: &str) -> (i32, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (-1, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (1, rest)
    } else {
        (1, s)
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let s = s.trim();
    let (sign, digits) = split_sign(s);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer {s:?}")));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
    Ok(if sign < 0 { -n } else { n })
}
