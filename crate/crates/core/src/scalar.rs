//! Scalar types for the estimation layer.
//!
//! Everything that can be computed exactly (counts, means, variances) is
//! carried as [`BigRational`]. Quantities that are *estimated* from those
//! exact values (the growth slope, intercept, the error term `f(n)` and the
//! statistics built on it) are generic over [`Scalar`], so the same pipeline
//! runs in `f64`, in fixed-precision binary floating point ([`HpFloat`]) or
//! fully exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default mantissa precision (bits) for [`HpFloat`].
pub const DEFAULT_PRECISION: u32 = 128;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Converts an exact rational, rounding to `precision` mantissa bits where
    /// the type is inexact. Exact and fixed-width types ignore `precision`.
    fn from_ratio(value: &BigRational, precision: u32) -> Self;

    fn to_f64(&self) -> f64;

    /// Human and machine readable form. Exact values print as `p/q`.
    fn to_decimal_string(&self) -> String;

    /// Relative rounding error of one operation; zero for exact types.
    fn unit_roundoff(precision: u32) -> f64;

    fn from_int(value: i64, precision: u32) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(value)), precision)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn from_ratio(value: &BigRational, _precision: u32) -> Self {
        ratio_to_f64(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_decimal_string(&self) -> String {
        format!("{self:e}")
    }

    fn unit_roundoff(_precision: u32) -> f64 {
        f64::EPSILON
    }
}

impl Scalar for BigRational {
    fn from_ratio(value: &BigRational, _precision: u32) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn to_decimal_string(&self) -> String {
        ratio_string(self)
    }

    fn unit_roundoff(_precision: u32) -> f64 {
        0.0
    }
}

/// `p/q` with the denominator always present.
pub fn ratio_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses the `p/q` (or bare integer) form produced by [`ratio_string`].
pub fn parse_ratio(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Correctly handles values whose numerator and denominator overflow `f64`
/// individually.
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    if let (Some(p), Some(q)) = (value.numer().to_f64(), value.denom().to_f64()) {
        if p.is_finite() && q.is_finite() && q != 0.0 {
            return p / q;
        }
    }
    let shift = value.numer().bits() as i64 - value.denom().bits() as i64;
    // Scale to roughly 2^60 so the integer quotient carries full precision.
    let scale = 60 - shift;
    let (numer, denom) = if scale >= 0 {
        (value.numer() << scale as usize, value.denom().clone())
    } else {
        (value.numer().clone(), value.denom() << (-scale) as usize)
    };
    let quotient = (numer / denom).to_f64().unwrap_or(0.0);
    quotient * 2f64.powi(-scale as i32)
}

type Binary = FBig<HalfEven, 2>;

/// Binary floating point with a runtime mantissa precision, rounded half to
/// even. Operations take the larger precision of their operands.
#[derive(Clone, Debug, PartialEq)]
pub struct HpFloat(Binary);

impl HpFloat {
    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    fn from_bigint(value: &BigInt, precision: u32) -> Self {
        let (sign, bytes) = value.to_bytes_le();
        let magnitude = IBig::from(dashu_int::UBig::from_le_bytes(&bytes));
        let signed = if sign == Sign::Minus {
            -magnitude
        } else {
            magnitude
        };
        HpFloat(
            Binary::from(signed)
                .with_precision(precision as usize)
                .value(),
        )
    }
}

impl PartialOrd for HpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

macro_rules! hp_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for HpFloat {
            type Output = HpFloat;
            fn $method(self, rhs: HpFloat) -> HpFloat {
                HpFloat(&self.0 $op &rhs.0)
            }
        }
    };
}

hp_binop!(Add, add, +);
hp_binop!(Sub, sub, -);
hp_binop!(Mul, mul, *);
hp_binop!(Div, div, /);

impl Neg for HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        HpFloat(-self.0)
    }
}

impl Zero for HpFloat {
    fn zero() -> Self {
        HpFloat(Binary::ZERO)
    }

    fn is_zero(&self) -> bool {
        self.0 == Binary::ZERO
    }
}

impl One for HpFloat {
    fn one() -> Self {
        HpFloat(Binary::ONE)
    }
}

impl Scalar for HpFloat {
    fn from_ratio(value: &BigRational, precision: u32) -> Self {
        let precision = precision.max(1);
        let numer = HpFloat::from_bigint(value.numer(), precision);
        if value.denom().is_one() {
            return numer;
        }
        let denom = HpFloat::from_bigint(value.denom(), precision);
        numer / denom
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn to_decimal_string(&self) -> String {
        // Enough decimal digits to round-trip the binary mantissa.
        let digits = (self.0.precision() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let decimal = self
            .0
            .clone()
            .with_base_and_precision::<10>(digits.max(1))
            .value();
        decimal.to_string()
    }

    fn unit_roundoff(precision: u32) -> f64 {
        2f64.powi(-(precision.max(1) as i32))
    }
}

/// Square root of a non-negative rational as `f64`, used only for display.
pub fn sqrt_ratio_f64(value: &BigRational) -> f64 {
    if value.is_negative() {
        return f64::NAN;
    }
    ratio_to_f64(value).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn ratio_string_keeps_denominator() {
        assert_eq!(ratio_string(&ratio(4, 2)), "2/1");
        assert_eq!(ratio_string(&ratio(-5, 3)), "-5/3");
        assert_eq!(parse_ratio("-5/3"), Some(ratio(-5, 3)));
        assert_eq!(parse_ratio("7"), Some(ratio(7, 1)));
        assert_eq!(parse_ratio("1/0"), None);
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * BigInt::from(3), big * BigInt::from(7));
        assert!((ratio_to_f64(&r) - 3.0 / 7.0).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(400));
        assert_eq!(ratio_to_f64(&tiny), 0.0);
    }

    #[test]
    fn hp_float_carries_requested_precision() {
        let third = HpFloat::from_ratio(&ratio(1, 3), 200);
        assert_eq!(third.precision(), 200);
        let sum = HpFloat::zero() + third.clone();
        assert_eq!(sum.precision(), 200);
        let err = (third * HpFloat::from_int(3, 200) - HpFloat::one()).abs();
        assert!(err < HpFloat::from_ratio(&ratio(1, 1 << 60), 200));
        assert!(HpFloat::from_ratio(&ratio(-1, 3), 64) < HpFloat::zero());
    }

    #[test]
    fn generic_arithmetic_agrees_across_scalars() {
        fn quadratic<T: Scalar>(x: &BigRational) -> f64 {
            let x = T::from_ratio(x, 128);
            (x.square() - T::from_int(2, 128) * x + T::one()).to_f64()
        }
        let x = ratio(7, 5);
        let exact = quadratic::<BigRational>(&x);
        assert!((quadratic::<f64>(&x) - exact).abs() < 1e-14);
        assert!((quadratic::<HpFloat>(&x) - exact).abs() < 1e-15);
    }
}
