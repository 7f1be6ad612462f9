//! Exact numeric literals and the fixed output format shared by every
//! command.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed number `{text}`: {reason}")]
pub struct NumberError {
    pub text: String,
    pub reason: &'static str,
}

impl NumberError {
    fn new(text: &str, reason: &'static str) -> Self {
        Self {
            text: text.to_string(),
            reason,
        }
    }
}

/// How a literal was written. Decimal literals are exact too, but a table
/// written with truncated decimals may miss 1 by a hair; only those are
/// eligible for renormalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralKind {
    Fraction,
    Decimal,
}

/// Parses `p/q`, `p`, a decimal (`0.125`, `.5`), scientific notation
/// (`1e-9`, `2.5E3`) or a power of two (`2^-40`) into the exact rational it
/// denotes. A leading sign is accepted.
pub fn parse_literal(text: &str) -> Result<(BigRational, LiteralKind), NumberError> {
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    if body.is_empty() {
        return Err(NumberError::new(text, "empty"));
    }
    let (value, kind) = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num).ok_or_else(|| NumberError::new(text, "bad numerator"))?;
        let den = parse_digits(den).ok_or_else(|| NumberError::new(text, "bad denominator"))?;
        if den.is_zero() {
            return Err(NumberError::new(text, "zero denominator"));
        }
        (BigRational::new(num, den), LiteralKind::Fraction)
    } else if let Some((base, exp)) = body.split_once('^') {
        if base != "2" {
            return Err(NumberError::new(text, "only powers of 2 are supported"));
        }
        let exp: i64 = exp.parse().map_err(|_| NumberError::new(text, "bad exponent"))?;
        (pow2(exp), LiteralKind::Fraction)
    } else if body.bytes().all(|b| b.is_ascii_digit()) {
        (
            BigRational::from_integer(parse_digits(body).unwrap()),
            LiteralKind::Fraction,
        )
    } else {
        (parse_decimal(text, body)?, LiteralKind::Decimal)
    };
    Ok((if negative { -value } else { value }, kind))
}

/// [`parse_literal`] without the kind.
pub fn parse_rational(text: &str) -> Result<BigRational, NumberError> {
    parse_literal(text).map(|(v, _)| v)
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(text: &str, body: &str) -> Result<BigRational, NumberError> {
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = body[i + 1..]
                .parse()
                .map_err(|_| NumberError::new(text, "bad exponent"))?;
            (&body[..i], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(NumberError::new(text, "no digits"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(NumberError::new(text, "unexpected character"));
    }
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| NumberError::new(text, "no digits"))?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Exact `2^exp`.
pub fn pow2(exp: i64) -> BigRational {
    let p = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `p/q` with the fraction fully reduced; integers print as `p/1`.
pub fn format_fraction(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Renders a real in the tool's fixed output format: twelve digits after the
/// point for ordinary magnitudes, twelve significant digits in scientific
/// notation for very small or very large values. Negative zero prints as
/// zero.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.12}", 0.0);
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let a = x.abs();
    if (1e-4..1e6).contains(&a) {
        format!("{x:.12}")
    } else {
        format!("{x:.11e}")
    }
}

/// Base-2 logarithm of a positive rational, accurate even when the
/// numerator or denominator overflow `f64`.
pub fn log2_rational(x: &BigRational) -> f64 {
    debug_assert!(x.is_positive());
    let shift = x.numer().bits() as i64 - x.denom().bits() as i64;
    // x = 2^shift * r with r in (1/2, 2)
    let r = x / pow2(shift);
    shift as f64 + r.to_f64().unwrap().log2()
}

/// Nearest `f64` to a rational, with graceful underflow to zero.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let shift = x.numer().bits() as i64 - x.denom().bits() as i64;
    if (-1000..1000).contains(&shift) {
        return x.to_f64().unwrap();
    }
    let r = (x / pow2(shift)).to_f64().unwrap();
    ldexp(r, shift)
}

/// `m * 2^e` without intermediate overflow or underflow.
pub fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

/// Rational approximation of `2^t` with 53 significant bits; exact when `t`
/// is an integer.
pub fn dyadic_pow2(t: f64) -> BigRational {
    let whole = t.floor();
    let frac = t - whole;
    let mantissa = (2f64.powf(frac) * 2f64.powi(52)).round() as u64;
    let mut m = BigInt::from(mantissa);
    let mut e = whole as i64 - 52;
    while m.is_even() && !m.is_zero() {
        m >>= 1;
        e += 1;
    }
    BigRational::from_integer(m) * pow2(e)
}
