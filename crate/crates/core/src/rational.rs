//! Exact rational scalars and their text representation.
//!
//! Every belief, cutoff, utility, probability, and odds ratio in this crate
//! is a [`Rat`]. Log-likelihoods are never stored; likelihood-ratio addition
//! is carried out as odds multiplication, which keeps all equilibrium
//! equations linear and exactly solvable.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// Shorthand for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed rational `{0}`")]
    Malformed(String),
}

/// Parses `p/q` fractions, integers, and decimal literals exactly.
///
/// Decimals (including exponent forms like `1.5e-3`) are converted to the
/// fraction they denote, not to the nearest float.
pub fn parse_rat(input: &str) -> Result<Rat, ParseRatError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRatError::Malformed(input.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRatError::Malformed(input.to_string()))?;
        if d.is_zero() {
            return Err(ParseRatError::ZeroDenominator(input.to_string()));
        }
        return Ok(Rat::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| ParseRatError::Malformed(input.to_string()))
}

fn parse_decimal(s: &str) -> Option<Rat> {
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let n: BigInt = digits.parse().ok()?;
    let shift = exp10 - frac_part.len() as i32;
    let base = BigInt::from(10);
    Some(if shift >= 0 {
        Rat::from_integer(n * base.pow(shift as u32))
    } else {
        Rat::new(n, base.pow((-shift) as u32))
    })
}

/// Renders a rational as `p/q`, or just `p` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy decimal rendering for display columns.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.numer()
        .to_f64()
        .zip(r.denom().to_f64())
        .map(|(n, d)| n / d)
        .unwrap_or(f64::NAN)
}

/// Absolute value, used when reporting residuals.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
