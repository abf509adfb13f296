//! Exact scalar arithmetic for the LP layer.
//!
//! The simplex code is generic over [`LpScalar`] so one implementation runs
//! in two precisions: `Ratio<i128>` as the fast path, with every operation
//! checked so overflow surfaces as [`ArithOverflow`] instead of a wrong
//! answer, and `BigRational` as the unbounded fallback a caller can retry
//! with. Both are exact, so they take identical pivot decisions and return
//! identical results; only speed differs.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigRational, CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

/// Marker for a checked operation that left the fixed-width range.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) struct ArithOverflow;

pub(crate) type ArithResult<T> = Result<T, ArithOverflow>;

/// Exact ordered-field scalar with checked arithmetic.
pub(crate) trait LpScalar: Clone + Ord + std::fmt::Debug {
    fn from_i128(v: i128) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn add(&self, rhs: &Self) -> ArithResult<Self>;
    fn sub(&self, rhs: &Self) -> ArithResult<Self>;
    fn mul(&self, rhs: &Self) -> ArithResult<Self>;
    /// Division by a nonzero scalar.
    fn div(&self, rhs: &Self) -> ArithResult<Self>;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    /// Floor as an integer, if it fits `i128`.
    fn floor_i128(&self) -> Option<i128>;
    /// Ceiling as an integer, if it fits `i128`.
    fn ceil_i128(&self) -> Option<i128>;
    fn is_integer(&self) -> bool;
}

impl LpScalar for Ratio<i128> {
    fn from_i128(v: i128) -> Self {
        Ratio::from_integer(v)
    }

    fn zero() -> Self {
        <Ratio<i128> as Zero>::zero()
    }

    fn one() -> Self {
        <Ratio<i128> as One>::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn add(&self, rhs: &Self) -> ArithResult<Self> {
        self.checked_add(rhs).ok_or(ArithOverflow)
    }

    fn sub(&self, rhs: &Self) -> ArithResult<Self> {
        self.checked_sub(rhs).ok_or(ArithOverflow)
    }

    fn mul(&self, rhs: &Self) -> ArithResult<Self> {
        self.checked_mul(rhs).ok_or(ArithOverflow)
    }

    fn div(&self, rhs: &Self) -> ArithResult<Self> {
        self.checked_div(rhs).ok_or(ArithOverflow)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn floor_i128(&self) -> Option<i128> {
        Some(self.floor().to_integer())
    }

    fn ceil_i128(&self) -> Option<i128> {
        Some(self.ceil().to_integer())
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }
}

impl LpScalar for BigRational {
    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn add(&self, rhs: &Self) -> ArithResult<Self> {
        Ok(self + rhs)
    }

    fn sub(&self, rhs: &Self) -> ArithResult<Self> {
        Ok(self - rhs)
    }

    fn mul(&self, rhs: &Self) -> ArithResult<Self> {
        Ok(self * rhs)
    }

    fn div(&self, rhs: &Self) -> ArithResult<Self> {
        Ok(self / rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn floor_i128(&self) -> Option<i128> {
        i128::try_from(self.floor().to_integer()).ok()
    }

    fn ceil_i128(&self) -> Option<i128> {
        i128::try_from(self.ceil().to_integer()).ok()
    }

    fn is_integer(&self) -> bool {
        BigRational::is_integer(self)
    }
}
