//! Numeric backends.
//!
//! [`Scalar`] abstracts over the two backends used in the crate: exact
//! rationals ([`Rational`], always in lowest terms) and `f64`. Generic code is
//! monomorphised per backend, so an expression can never mix the two.

use alloc::string::String;
use core::fmt::{Debug, Display};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Absolute tolerance used by the float backend for identities that hold
/// exactly over the rationals. Scaled by the magnitude of the data involved.
pub const FLOAT_IDENTITY_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` for the rational backend.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact conversion of the binary value of `v` (rational backend) or
    /// identity (float backend). `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;

    /// Nearest value of this backend.
    fn from_rational(v: &Rational) -> Self;

    /// Zero test: exact for rationals, `|x| <= 1e-12 * max(1, scale)` for
    /// floats.
    fn is_negligible(&self, scale: f64) -> bool;

    /// `x >= 0` exactly for rationals, `x >= -tol` for floats.
    fn is_nonneg_within(&self, tol: f64) -> bool;

    fn ratio(p: i64, q: i64) -> Self {
        Self::from_int(p) / Self::from_int(q)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_int(v as i64)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn from_rational(v: &Rational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_IDENTITY_TOL * scale.abs().max(1.0)
    }

    fn is_nonneg_within(&self, tol: f64) -> bool {
        *self >= -tol.abs()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Option<Self> {
        <Rational as FromPrimitive>::from_f64(v)
    }

    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn is_nonneg_within(&self, _tol: f64) -> bool {
        !self.is_negative()
    }
}

/// `p / q` as a rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Error from [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {text:?} as a rational: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `"p/q"`, an integer, or a decimal literal (`"-1.25"`, `"3e-2"`)
/// into an exact rational. Decimal literals are read digit-for-digit, so
/// `"0.1"` is exactly `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError { text: text.into(), reason };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err("bad numerator"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("invalid character"));
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let numer = BigInt::from_str_radix(&all, 10).map_err(|_| err("bad digits"))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Floor of a non-negative rational as `usize`.
pub fn floor_usize(x: &Rational) -> usize {
    x.floor().to_integer().to_usize().unwrap_or(0)
}

pub(crate) fn sum<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc + v)
}

pub(crate) fn mean<T: Scalar>(values: &[T]) -> T {
    sum(values.iter().cloned()) / T::from_usize(values.len().max(1))
}

pub(crate) fn pow3<T: Scalar>(x: &T) -> T {
    x.clone() * x.clone() * x.clone()
}
