//! Exact rational arithmetic helpers.
//!
//! Every probability, frequency, and loss in this crate is a [`Rational`]
//! so that equalities between model errors are decided exactly.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_count(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossy `f64` view, for display only.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Canonical `p/q` string (denominator always printed).
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a plain decimal like `0.042`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |reason: &str| Error::InvalidInput(format!("cannot parse rational {s:?}: {reason}"));
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad("bad integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let abs = int.abs() * &scale + frac;
        let signed = if neg { -abs } else { abs };
        return Ok(Rational::new(signed, scale));
    }
    let int: BigInt = s.parse().map_err(|_| bad("not an integer"))?;
    Ok(Rational::from_integer(int))
}
