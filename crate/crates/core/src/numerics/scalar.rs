//! Ring/field abstraction shared by the polynomial and linear-algebra kernels.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use super::{BigDecimal, Rational};

/// Coefficient type for [`UniPoly`](super::UniPoly), [`BiPoly`](super::BiPoly)
/// and [`Matrix`](super::Matrix).
///
/// Exact fields return `Some` from `checked_div` whenever the divisor is
/// nonzero. Polynomial rings return `Some` only for exact divisions, which is
/// what fraction-free elimination needs.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn checked_div(&self, rhs: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k))
    }

    /// Whether values of this type are computed without rounding.
    fn is_exact() -> bool {
        true
    }
}

/// Scalars with a total order, a square root where one exists, and a
/// conversion to [`BigDecimal`].
pub trait OrderedScalar: Scalar {
    fn signum(&self) -> Ordering;

    /// Square root inside the same scalar type, if representable.
    fn try_sqrt(&self) -> Option<Self>;

    fn to_decimal(&self, digits: u32) -> BigDecimal;

    fn cmp_value(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl OrderedScalar for Rational {
    fn signum(&self) -> Ordering {
        if Zero::is_zero(self) {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn try_sqrt(&self) -> Option<Self> {
        super::rational::exact_sqrt(self)
    }

    fn to_decimal(&self, digits: u32) -> BigDecimal {
        BigDecimal::from_rational(self, digits)
    }
}
