use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Marker returned when a fixed-width computation would overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Exact integer arithmetic with overflow reporting.
///
/// `i64` reports overflow through [`Overflow`]; `BigInt` never does. Every
/// integer algorithm in this crate is generic over this trait so that the
/// fast path can be retried at arbitrary precision.
pub trait ExactInt: Clone + Eq + Ord + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self, Overflow>;
    fn sub(&self, other: &Self) -> Result<Self, Overflow>;
    fn mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    /// Truncating quotient.
    fn quot(&self, other: &Self) -> Result<Self, Overflow>;
    /// Euclidean remainder, always in `[0, |other|)`.
    fn rem_euclid(&self, other: &Self) -> Result<Self, Overflow>;
    fn abs(&self) -> Result<Self, Overflow>;
    fn to_i64(&self) -> Option<i64>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn divides(&self, other: &Self) -> Result<bool, Overflow> {
        if self.is_zero() {
            return Ok(other.is_zero());
        }
        Ok(other.rem_euclid(self)?.is_zero())
    }

    /// `|self| < |other|` without materializing both absolute values when
    /// one side is zero.
    fn abs_lt(&self, other: &Self) -> Result<bool, Overflow> {
        Ok(self.abs()? < other.abs()?)
    }
}

impl ExactInt for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_add(*other).ok_or(Overflow)
    }
    fn sub(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_sub(*other).ok_or(Overflow)
    }
    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_mul(*other).ok_or(Overflow)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn quot(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_div(*other).ok_or(Overflow)
    }
    fn rem_euclid(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_rem_euclid(*other).ok_or(Overflow)
    }
    fn abs(&self) -> Result<Self, Overflow> {
        self.checked_abs().ok_or(Overflow)
    }
    fn to_i64(&self) -> Option<i64> {
        Some(*self)
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self * other)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn quot(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self / other)
    }
    fn rem_euclid(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self.mod_floor(&Signed::abs(other)))
    }
    fn abs(&self) -> Result<Self, Overflow> {
        Ok(Signed::abs(self))
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

/// Runs `f` with `i64` arithmetic and falls back to `BigInt` on overflow.
pub fn with_exact<R>(
    fast: impl FnOnce() -> Result<R, Overflow>,
    exact: impl FnOnce() -> Result<R, Overflow>,
) -> crate::Result<R> {
    match fast() {
        Ok(r) => Ok(r),
        // BigInt arithmetic cannot overflow; an Overflow here comes from
        // narrowing a result back to i64.
        Err(Overflow) => {
            exact().map_err(|_| crate::Error::Unsupported("result entries do not fit in 64-bit integers".into()))
        }
    }
}
