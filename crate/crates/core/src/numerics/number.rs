//! A scalar that is exact when it can be and decimal when it must be.

use std::cmp::Ordering;
use std::fmt;

use super::{BigDecimal, ExtendedScalar, OrderedScalar, Scalar};

/// Either an exact element of Q(√a) or a [`BigDecimal`] approximation.
///
/// Arithmetic stays exact while both operands are exact; mixing in an
/// approximation converts the exact side at the approximation's precision.
#[derive(Clone, PartialEq)]
pub enum Number {
    Exact(ExtendedScalar),
    Approx(BigDecimal),
}

impl Number {
    pub fn is_exact_value(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&ExtendedScalar> {
        match self {
            Number::Exact(v) => Some(v),
            Number::Approx(_) => None,
        }
    }

    pub fn to_decimal(&self, digits: u32) -> BigDecimal {
        match self {
            Number::Exact(v) => v.to_decimal(digits),
            Number::Approx(v) => v.with_digits(digits),
        }
    }

    fn lift(&self, digits: u32) -> BigDecimal {
        match self {
            Number::Exact(v) => v.to_decimal(digits),
            Number::Approx(v) => v.clone(),
        }
    }

    fn approx_digits(&self) -> Option<u32> {
        match self {
            Number::Approx(v) => Some(v.digits().unwrap_or(super::DEFAULT_DIGITS)),
            Number::Exact(_) => None,
        }
    }

    fn combine(
        &self,
        rhs: &Self,
        exact: impl Fn(&ExtendedScalar, &ExtendedScalar) -> ExtendedScalar,
        approx: impl Fn(&BigDecimal, &BigDecimal) -> BigDecimal,
    ) -> Self {
        match (self, rhs) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(exact(a, b)),
            _ => {
                let digits = self
                    .approx_digits()
                    .into_iter()
                    .chain(rhs.approx_digits())
                    .max()
                    .expect("one side is approximate");
                Number::Approx(approx(&self.lift(digits), &rhs.lift(digits)))
            }
        }
    }

    /// Decimal string with `sig` significant digits; exact values print in
    /// field notation.
    pub fn display(&self, sig: u32) -> String {
        match self {
            Number::Exact(v) => v.to_string(),
            Number::Approx(v) => v.to_string_trimmed(sig),
        }
    }
}

impl From<ExtendedScalar> for Number {
    fn from(v: ExtendedScalar) -> Self {
        Number::Exact(v)
    }
}

impl From<BigDecimal> for Number {
    fn from(v: BigDecimal) -> Self {
        Number::Approx(v)
    }
}

impl Scalar for Number {
    fn zero() -> Self {
        Number::Exact(ExtendedScalar::zero())
    }
    fn one() -> Self {
        Number::Exact(ExtendedScalar::one())
    }
    fn from_i64(v: i64) -> Self {
        Number::Exact(ExtendedScalar::from_int(v))
    }
    fn is_zero(&self) -> bool {
        match self {
            Number::Exact(v) => Scalar::is_zero(v),
            Number::Approx(v) => Scalar::is_zero(v),
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, Scalar::add, Scalar::add)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, Scalar::sub, Scalar::sub)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.combine(rhs, Scalar::mul, Scalar::mul)
    }
    fn neg(&self) -> Self {
        match self {
            Number::Exact(v) => Number::Exact(Scalar::neg(v)),
            Number::Approx(v) => Number::Approx(Scalar::neg(v)),
        }
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(self.combine(
            rhs,
            |a, b| a.checked_div(b).expect("nonzero"),
            |a, b| a.checked_div(b).expect("nonzero"),
        ))
    }
    fn is_exact() -> bool {
        false
    }
}

impl OrderedScalar for Number {
    fn signum(&self) -> Ordering {
        match self {
            Number::Exact(v) => v.signum(),
            Number::Approx(v) => v.signum(),
        }
    }

    fn try_sqrt(&self) -> Option<Self> {
        match self {
            Number::Exact(v) => v.try_sqrt().map(Number::Exact),
            Number::Approx(v) => v.sqrt().map(Number::Approx),
        }
    }

    fn to_decimal(&self, digits: u32) -> BigDecimal {
        Number::to_decimal(self, digits)
    }
}

impl fmt::Debug for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(v) => write!(f, "{v:?}"),
            Number::Approx(v) => write!(f, "~{v:?}"),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(v) => fmt::Display::fmt(v, f),
            Number::Approx(v) => fmt::Display::fmt(v, f),
        }
    }
}

/// Exact values serialize as the field triple, approximations as strings.
impl serde::Serialize for Number {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Number::Exact(v) => v.serialize(s),
            Number::Approx(v) => v.serialize(s),
        }
    }
}
