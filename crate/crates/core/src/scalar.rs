//! Numeric back-ends for payoff entries and cumulative payoffs.

use core::cmp::Ordering;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arithmetic needed by the dynamics engine.
///
/// Exact back-ends ([`BigInt`], [`BigRational`]) ignore the tolerance passed
/// to [`Scalar::approx_cmp`]; `f64` treats values closer than the tolerance
/// as equal when forming best-response tie sets.
pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;

    fn one() -> Self;

    fn add_assign_ref(&mut self, rhs: &Self);

    fn sub_ref(&self, rhs: &Self) -> Self;

    fn mul_count(&self, count: u64) -> Self;

    fn approx_cmp(&self, other: &Self, tolerance: f64) -> Ordering;

    /// Exact rational value of `self`. For `f64` this is the exact binary
    /// fraction the double represents.
    fn to_rational(&self) -> BigRational;

    fn to_f64(&self) -> f64;

    /// Whether results are exact. Governs how callers compare gaps.
    const EXACT: bool;
}

impl Scalar for BigInt {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_count(&self, count: u64) -> Self {
        self * count
    }

    fn approx_cmp(&self, other: &Self, _tolerance: f64) -> Ordering {
        self.cmp(other)
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_count(&self, count: u64) -> Self {
        self * BigRational::from_integer(BigInt::from(count))
    }

    fn approx_cmp(&self, other: &Self, _tolerance: f64) -> Ordering {
        self.cmp(other)
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += *rhs;
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_count(&self, count: u64) -> Self {
        self * count as f64
    }

    fn approx_cmp(&self, other: &Self, tolerance: f64) -> Ordering {
        if libm::fabs(self - other) <= tolerance {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(Zero::zero)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
