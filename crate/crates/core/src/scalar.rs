//! Real-number backend, the fixed-decimal token grammar and the rounding
//! contract that maps decrypted reals back to byte codes.
//!
//! Every serialized ciphertext is a sequence of tokens of the form
//!
//! ```text
//! token := ['-'] int '.' frac
//! int   := '0' | [1-9][0-9]*
//! frac  := [0-9]{fractional_digits}
//! ```
//!
//! Formatting rounds half away from zero on the exact binary value, never
//! emits an exponent and never emits `-0.000…`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::Float;

use crate::error::{Error, Result};

/// Numeric backend used by the cipher arithmetic.
///
/// Only `f64` is required; the linear algebra and formatting routines are
/// written against this trait so a wider float type can be dropped in.
pub trait Real: Float + Display + Debug + FromStr + Send + Sync + 'static {
    /// Number of decimal digits the backend can faithfully round-trip.
    const DECIMAL_DIGITS: usize;

    fn lit(v: f64) -> Self;
}

impl Real for f64 {
    const DECIMAL_DIGITS: usize = 17;

    #[inline]
    fn lit(v: f64) -> Self {
        v
    }
}

impl Real for f32 {
    const DECIMAL_DIGITS: usize = 9;

    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }
}

/// The scalar type used throughout the ciphers.
pub type Scalar = f64;

/// Largest magnitude accepted by [`format_scalar`].
pub const FORMAT_GUARD: f64 = 1e308;

/// Default tolerance for [`round_to_code`].
pub const DEFAULT_DECRYPT_TOL: f64 = 0.25;

/// Textual form of serialized scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormatSpec {
    fractional_digits: usize,
    separator: u8,
}

impl FormatSpec {
    pub fn new(fractional_digits: usize, separator: u8) -> Result<Self> {
        if fractional_digits == 0 || fractional_digits > Scalar::DECIMAL_DIGITS {
            return Err(Error::InvalidFormat(format!(
                "fractional digits must be in 1..={}, got {fractional_digits}",
                Scalar::DECIMAL_DIGITS
            )));
        }
        if separator.is_ascii_digit() || separator == b'-' || separator == b'.' {
            return Err(Error::InvalidFormat(format!(
                "separator {:?} collides with the token grammar",
                separator as char
            )));
        }
        Ok(FormatSpec {
            fractional_digits,
            separator,
        })
    }

    /// Space-separated tokens with the given number of fractional digits.
    pub fn with_digits(fractional_digits: usize) -> Result<Self> {
        Self::new(fractional_digits, b' ')
    }

    pub fn fractional_digits(&self) -> usize {
        self.fractional_digits
    }

    pub fn separator(&self) -> u8 {
        self.separator
    }

    /// Largest absolute error introduced by formatting then parsing a scalar.
    pub fn quantization(&self) -> f64 {
        0.5 * 10f64.powi(-(self.fractional_digits as i32))
    }
}

/// Formats `x` with exactly `spec.fractional_digits()` fractional digits.
pub fn format_scalar<F: Real>(x: F, spec: &FormatSpec) -> Result<String> {
    let mut out = String::new();
    write_scalar(&mut out, x, spec)?;
    Ok(out)
}

/// Appends the token for `x` to `out`.
pub fn write_scalar<F: Real>(out: &mut String, x: F, spec: &FormatSpec) -> Result<()> {
    let as_f64 = x.to_f64().unwrap_or(f64::NAN);
    if !x.is_finite() {
        return Err(Error::NonFinite(as_f64));
    }
    if x.abs() > F::lit(FORMAT_GUARD) {
        return Err(Error::FormatOverflow(as_f64));
    }
    let digits = spec.fractional_digits;
    let magnitude = x.abs();

    let body = if is_decimal_tie(magnitude, digits) {
        // The exact expansion has digits + 1 fractional digits ending in 5,
        // so printing one extra digit is exact and we round up by hand.
        let mut exact = format!("{:.*}", digits + 1, magnitude);
        exact.pop();
        increment_last_digit(exact)
    } else {
        // Not a tie: the correctly rounded result is unambiguous.
        format!("{:.*}", digits, magnitude)
    };

    let all_zero = body.bytes().all(|b| b == b'0' || b == b'.');
    if x.is_sign_negative() && !all_zero {
        out.push('-');
    }
    out.push_str(&body);
    Ok(())
}

/// True when `magnitude` lies exactly halfway between two `digits`-place
/// decimals, i.e. its terminating binary expansion has `digits + 1`
/// fractional decimal digits.
fn is_decimal_tie<F: Real>(magnitude: F, digits: usize) -> bool {
    let (mut mantissa, mut exponent, _) = magnitude.integer_decode();
    if mantissa == 0 {
        return false;
    }
    while mantissa & 1 == 0 {
        mantissa >>= 1;
        exponent += 1;
    }
    exponent < 0 && (-(exponent as i64)) as usize == digits + 1
}

fn increment_last_digit(s: String) -> String {
    let mut bytes = s.into_bytes();
    let mut carry = true;
    for b in bytes.iter_mut().rev() {
        if !carry {
            break;
        }
        match *b {
            b'.' => continue,
            b'9' => *b = b'0',
            d => {
                *b = d + 1;
                carry = false;
            }
        }
    }
    if carry {
        bytes.insert(0, b'1');
    }
    String::from_utf8(bytes).expect("ascii digits")
}

/// Parses a token produced by [`format_scalar`] into the nearest scalar.
pub fn parse_scalar<F: Real>(token: &str) -> Result<F> {
    let fail = |reason: &str| Error::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let unsigned = token.strip_prefix('-').unwrap_or(token);
    let (int, frac) = unsigned
        .split_once('.')
        .ok_or_else(|| fail("missing decimal point"))?;
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return Err(fail("integer part must be decimal digits"));
    }
    if int.len() > 1 && int.starts_with('0') {
        return Err(fail("superfluous leading zero"));
    }
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(fail("fractional part must be decimal digits"));
    }
    let value: F = token.parse().map_err(|_| fail("not a number"))?;
    if !value.is_finite() {
        return Err(fail("out of range"));
    }
    Ok(value)
}

/// Rounds a decrypted real to the byte code it encodes.
///
/// Fails when `x` sits further than `tol` from the nearest integer, which
/// signals a wrong key or corrupted ciphertext.
pub fn round_to_code(x: Scalar, tol: Scalar) -> Result<u8> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::Precondition(format!(
            "rounding tolerance must be in (0, 0.5), got {tol}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    let nearest = x.round();
    let drift = (x - nearest).abs();
    if drift > tol {
        return Err(Error::RoundingDrift {
            value: x,
            nearest,
            drift,
            tol,
        });
    }
    if !(0.0..=255.0).contains(&nearest) {
        return Err(Error::CodeRange(x));
    }
    Ok(nearest as u8)
}
