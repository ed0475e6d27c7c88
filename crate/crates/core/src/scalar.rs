//! Floating-point scalar abstraction shared by every numerical routine.
//!
//! The numerics, densities and interval constructions are written once over
//! [`Scalar`] and instantiated for `f64` (the default everywhere) and `f32`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A real floating-point type: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Complementary error function.
    fn compl_erf(self) -> Self;

    /// Natural log of the absolute value of the gamma function.
    fn lgamma(self) -> Self;

    /// Converts an `f64` literal. Never fails for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion back to `f64`, for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn compl_erf(self) -> Self {
        libm::erfc(self)
    }

    #[inline]
    fn lgamma(self) -> Self {
        libm::lgamma(self)
    }
}

impl Scalar for f32 {
    #[inline]
    fn compl_erf(self) -> Self {
        libm::erfcf(self)
    }

    #[inline]
    fn lgamma(self) -> Self {
        libm::lgammaf(self)
    }
}

/// Serializes a scalar that may be infinite: finite values as numbers,
/// `±∞` as the strings `"inf"` / `"-inf"`, NaN as `"nan"`.
pub fn serialize_extended<T: Scalar, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let v = value.as_f64();
    if v.is_finite() {
        serializer.serialize_f64(v)
    } else if v.is_nan() {
        serializer.serialize_str("nan")
    } else if v > 0.0 {
        serializer.serialize_str("inf")
    } else {
        serializer.serialize_str("-inf")
    }
}

/// Parses a scalar, accepting `inf`, `+inf`, `-inf` and `infinity`.
pub fn parse_extended<T: Scalar>(s: &str) -> Option<T> {
    let t = s.trim().to_ascii_lowercase();
    let v = match t.as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => f64::INFINITY,
        "-inf" | "-infinity" => f64::NEG_INFINITY,
        _ => t.parse::<f64>().ok()?,
    };
    T::from_f64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_matches_for_both_widths() {
        assert!((0.0f64.compl_erf() - 1.0).abs() < 1e-15);
        assert!((1.0f64.compl_erf() - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!((1.0f32.compl_erf() - 0.157_299_2).abs() < 1e-6);
    }

    #[test]
    fn extended_parsing() {
        assert_eq!(parse_extended::<f64>("inf"), Some(f64::INFINITY));
        assert_eq!(parse_extended::<f64>("-Inf"), Some(f64::NEG_INFINITY));
        assert_eq!(parse_extended::<f64>("0.125"), Some(0.125));
        assert_eq!(parse_extended::<f64>("x"), None);
    }

    #[test]
    fn ln_gamma_half() {
        // Gamma(1/2) = sqrt(pi)
        let want = std::f64::consts::PI.sqrt().ln();
        assert!((0.5f64.lgamma() - want).abs() < 1e-14);
    }
}
