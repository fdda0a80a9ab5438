//! Arbitrary-precision floating-point numbers.
//!
//! A value is `significand * 2^exponent` with a per-value precision given in
//! bits but configured in decimal digits. Precision `0` marks an exact value
//! (integers and sums/products of exact values); every operation rounds its
//! result to the larger precision of its operands using round-half-even.
//! Division of two exact values falls back to [`DEFAULT_DIGITS`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::parse_rational;
use super::{NumericsError, OrderedScalar, Rational, Scalar};

/// Working precision used when none is requested explicitly.
pub const DEFAULT_DIGITS: u32 = 250;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 8
}

#[derive(Clone)]
pub struct BigDecimal {
    significand: BigInt,
    exponent: i64,
    prec_bits: u32,
}

impl BigDecimal {
    fn build(sign: Sign, mag: BigUint, exponent: i64, prec_bits: u32) -> Self {
        if mag.is_zero() {
            return BigDecimal {
                significand: BigInt::zero(),
                exponent: 0,
                prec_bits,
            };
        }
        let bits = mag.bits();
        if prec_bits == 0 || bits <= prec_bits as u64 {
            return BigDecimal {
                significand: BigInt::from_biguint(sign, mag),
                exponent,
                prec_bits,
            };
        }
        let mut shift = bits - prec_bits as u64;
        let mut q = &mag >> shift;
        let half = mag.bit(shift - 1);
        let sticky = mag.trailing_zeros().is_some_and(|tz| tz < shift - 1);
        if half && (sticky || q.bit(0)) {
            q += 1u32;
            if q.bits() > prec_bits as u64 {
                q >>= 1;
                shift += 1;
            }
        }
        BigDecimal {
            significand: BigInt::from_biguint(sign, q),
            exponent: exponent + shift as i64,
            prec_bits,
        }
    }

    fn from_parts(significand: BigInt, exponent: i64, prec_bits: u32) -> Self {
        let (sign, mag) = significand.into_parts();
        Self::build(sign, mag, exponent, prec_bits)
    }

    /// An exact integer.
    pub fn from_bigint(v: BigInt) -> Self {
        BigDecimal {
            significand: v,
            exponent: 0,
            prec_bits: 0,
        }
    }

    /// Correctly rounded conversion to `digits` decimal digits.
    pub fn from_rational(r: &Rational, digits: u32) -> Self {
        let num = Self::from_bigint(r.numer().clone());
        let den = Self::from_bigint(r.denom().clone());
        num.with_digits(digits)
            .checked_div(&den)
            .expect("denominator is nonzero")
    }

    /// Parses a decimal or `p/q` string exactly, then rounds to `digits`.
    pub fn parse(s: &str, digits: u32) -> Result<Self, NumericsError> {
        Ok(Self::from_rational(&parse_rational(s)?, digits))
    }

    pub fn from_f64(v: f64, digits: u32) -> Self {
        let r = Rational::from_float(v).unwrap_or_else(Zero::zero);
        Self::from_rational(&r, digits)
    }

    /// Precision in decimal digits, `None` for exact values.
    pub fn digits(&self) -> Option<u32> {
        if self.prec_bits == 0 {
            None
        } else {
            Some(((self.prec_bits.saturating_sub(8)) as f64 * LOG10_2).floor() as u32)
        }
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec_bits
    }

    /// Re-rounds to `digits` decimal digits (raising the precision tag when
    /// `digits` exceeds the current precision).
    pub fn with_digits(&self, digits: u32) -> Self {
        Self::from_parts(self.significand.clone(), self.exponent, bits_for_digits(digits))
    }

    pub fn is_exact(&self) -> bool {
        self.prec_bits == 0
    }

    pub fn is_negative(&self) -> bool {
        self.significand.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigDecimal {
            significand: self.significand.abs(),
            exponent: self.exponent,
            prec_bits: self.prec_bits,
        }
    }

    /// Multiplication by `2^k`, always exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        BigDecimal {
            significand: self.significand.clone(),
            exponent: self.exponent + k,
            prec_bits: self.prec_bits,
        }
    }

    /// Binary exponent of the leading bit, i.e. `floor(log2 |x|)`; `None` for zero.
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.significand.is_zero() {
            None
        } else {
            Some(self.exponent + self.significand.bits() as i64 - 1)
        }
    }

    fn joint_prec(&self, other: &Self) -> u32 {
        self.prec_bits.max(other.prec_bits)
    }

    fn add_signed(&self, other: &Self, negate_other: bool) -> Self {
        let prec = self.joint_prec(other);
        let other_sig = if negate_other {
            -&other.significand
        } else {
            other.significand.clone()
        };
        if other_sig.is_zero() {
            return Self::from_parts(self.significand.clone(), self.exponent, prec);
        }
        if self.significand.is_zero() {
            return Self::from_parts(other_sig, other.exponent, prec);
        }
        if prec > 0 {
            // Drop an operand lying entirely below the rounding position.
            let top_a = self.exponent + self.significand.bits() as i64;
            let top_b = other.exponent + other_sig.bits() as i64;
            let guard = prec as i64 + 4;
            if top_a - top_b > guard && top_b < self.exponent {
                return Self::from_parts(self.significand.clone(), self.exponent, prec);
            }
            if top_b - top_a > guard && top_a < other.exponent {
                return Self::from_parts(other_sig, other.exponent, prec);
            }
        }
        let exp = self.exponent.min(other.exponent);
        let a = &self.significand << (self.exponent - exp) as usize;
        let b = other_sig << (other.exponent - exp) as usize;
        Self::from_parts(a + b, exp, prec)
    }

    /// Square root rounded to this value's precision (or the default for
    /// exact inputs). `None` for negative values.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.significand.is_zero() {
            return Some(self.clone());
        }
        let prec = if self.prec_bits == 0 {
            bits_for_digits(DEFAULT_DIGITS)
        } else {
            self.prec_bits
        };
        let mag = self.significand.magnitude();
        let want = 2 * (prec as i64 + 4);
        let mut shift = (want - mag.bits() as i64).max(0);
        if (self.exponent - shift).is_odd() {
            shift += 1;
        }
        let root = (mag << shift as usize).sqrt();
        Some(Self::build(
            Sign::Plus,
            root,
            (self.exponent - shift) / 2,
            prec,
        ))
    }

    /// Real cube root, rounded like [`sqrt`](Self::sqrt).
    pub fn cbrt(&self) -> Self {
        if self.significand.is_zero() {
            return self.clone();
        }
        let prec = if self.prec_bits == 0 {
            bits_for_digits(DEFAULT_DIGITS)
        } else {
            self.prec_bits
        };
        let mag = self.significand.magnitude();
        let want = 3 * (prec as i64 + 4);
        let mut shift = (want - mag.bits() as i64).max(0);
        while (self.exponent - shift).rem_euclid(3) != 0 {
            shift += 1;
        }
        let root = (mag << shift as usize).cbrt();
        Self::build(
            self.significand.sign(),
            root,
            (self.exponent - shift) / 3,
            prec,
        )
    }

    /// The exact dyadic rational this value represents.
    pub fn to_rational(&self) -> Rational {
        let s = Rational::from_integer(self.significand.clone());
        if self.exponent >= 0 {
            s * Rational::from_integer(BigInt::one() << self.exponent as usize)
        } else {
            s / Rational::from_integer(BigInt::one() << (-self.exponent) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.significand.is_zero() {
            return 0.0;
        }
        let bits = self.significand.bits() as i64;
        let drop = (bits - 62).max(0);
        let top = (&self.significand >> drop as usize).to_i64().unwrap_or(0) as f64;
        let e = self.exponent + drop;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Rounds `|self| * 10^k` to the nearest integer.
    fn scaled_integer(&self, k: i64) -> BigUint {
        let mut num = self.significand.magnitude().clone();
        let mut den = BigUint::one();
        if k >= 0 {
            num *= num_traits::pow(BigUint::from(10u32), k as usize);
        } else {
            den *= num_traits::pow(BigUint::from(10u32), (-k) as usize);
        }
        if self.exponent >= 0 {
            num <<= self.exponent as usize;
        } else {
            den <<= (-self.exponent) as usize;
        }
        let (q, r) = num.div_rem(&den);
        if r * 2u32 >= den {
            q + 1u32
        } else {
            q
        }
    }

    /// Decimal representation with `sig` significant digits. Fixed notation
    /// for moderate magnitudes, scientific otherwise. Trailing zeros are kept
    /// so that the digit count is visible.
    pub fn to_string_digits(&self, sig: u32) -> String {
        let sig = sig.max(1) as i64;
        let Some(e2) = self.magnitude_exponent() else {
            return "0".to_string();
        };
        let mut e10 = (e2 as f64 * LOG10_2).floor() as i64;
        let mut n;
        loop {
            n = self.scaled_integer(sig - 1 - e10);
            let len = n.to_string().len() as i64;
            if len > sig {
                e10 += 1;
            } else if len < sig {
                e10 -= 1;
            } else {
                break;
            }
        }
        let digits = n.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if (-7..=20).contains(&e10) {
            if e10 >= 0 {
                let split = (e10 + 1) as usize;
                if split >= digits.len() {
                    let zeros = "0".repeat(split - digits.len());
                    format!("{sign}{digits}{zeros}")
                } else {
                    format!("{sign}{}.{}", &digits[..split], &digits[split..])
                }
            } else {
                let zeros = "0".repeat((-e10 - 1) as usize);
                format!("{sign}0.{zeros}{digits}")
            }
        } else {
            let rest = &digits[1..];
            if rest.is_empty() {
                format!("{sign}{}e{e10}", &digits[..1])
            } else {
                format!("{sign}{}.{}e{e10}", &digits[..1], rest)
            }
        }
    }

    /// Like [`to_string_digits`](Self::to_string_digits) with trailing
    /// fractional zeros removed.
    pub fn to_string_trimmed(&self, sig: u32) -> String {
        let s = self.to_string_digits(sig);
        let (body, exp) = match s.find('e') {
            Some(i) => (&s[..i], &s[i..]),
            None => (s.as_str(), ""),
        };
        if body.contains('.') {
            let t = body.trim_end_matches('0').trim_end_matches('.');
            format!("{t}{exp}")
        } else {
            s.clone()
        }
    }

    fn default_display_digits(&self) -> u32 {
        self.digits().unwrap_or(40).clamp(1, 60)
    }
}

impl PartialEq for BigDecimal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigDecimal {}

impl PartialOrd for BigDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.significand.sign();
        let sb = other.significand.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let exp = self.exponent.min(other.exponent);
        let a = &self.significand << (self.exponent - exp) as usize;
        let b = &other.significand << (other.exponent - exp) as usize;
        a.cmp(&b)
    }
}

impl fmt::Debug for BigDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_trimmed(self.default_display_digits()))
    }
}

impl fmt::Display for BigDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32).unwrap_or(self.default_display_digits());
        write!(f, "{}", self.to_string_trimmed(digits))
    }
}

impl Scalar for BigDecimal {
    fn zero() -> Self {
        Self::from_bigint(BigInt::zero())
    }
    fn one() -> Self {
        Self::from_bigint(BigInt::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        self.significand.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_signed(rhs, false)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add_signed(rhs, true)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::from_parts(
            &self.significand * &rhs.significand,
            self.exponent + rhs.exponent,
            self.joint_prec(rhs),
        )
    }
    fn neg(&self) -> Self {
        BigDecimal {
            significand: -&self.significand,
            exponent: self.exponent,
            prec_bits: self.prec_bits,
        }
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.significand.is_zero() {
            return None;
        }
        let mut prec = self.joint_prec(rhs);
        if prec == 0 {
            prec = bits_for_digits(DEFAULT_DIGITS);
        }
        if self.significand.is_zero() {
            return Some(Self::build(Sign::NoSign, BigUint::zero(), 0, prec));
        }
        let a = self.significand.magnitude();
        let b = rhs.significand.magnitude();
        let shift = (prec as i64 + 4 + b.bits() as i64 - a.bits() as i64).max(0);
        let num = a << shift as usize;
        let (q, r) = num.div_rem(b);
        // Fold the remainder into a sticky bit so rounding sees it.
        let q = (q << 1usize) | BigUint::from(u8::from(!r.is_zero()));
        let sign = if self.significand.sign() == rhs.significand.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Some(Self::build(
            sign,
            q,
            self.exponent - rhs.exponent - shift - 1,
            prec,
        ))
    }
    fn is_exact() -> bool {
        false
    }
}

impl OrderedScalar for BigDecimal {
    fn signum(&self) -> Ordering {
        self.significand.sign().cmp(&Sign::NoSign)
    }

    fn try_sqrt(&self) -> Option<Self> {
        self.sqrt()
    }

    fn to_decimal(&self, digits: u32) -> BigDecimal {
        self.with_digits(digits)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&BigDecimal> for &BigDecimal {
            type Output = BigDecimal;
            fn $method(self, rhs: &BigDecimal) -> BigDecimal {
                let f: fn(&BigDecimal, &BigDecimal) -> BigDecimal = $body;
                f(self, rhs)
            }
        }
        impl $tr<BigDecimal> for BigDecimal {
            type Output = BigDecimal;
            fn $method(self, rhs: BigDecimal) -> BigDecimal {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&BigDecimal> for BigDecimal {
            type Output = BigDecimal;
            fn $method(self, rhs: &BigDecimal) -> BigDecimal {
                $tr::$method(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Scalar::add(a, b));
forward_binop!(Sub, sub, |a, b| Scalar::sub(a, b));
forward_binop!(Mul, mul, |a, b| Scalar::mul(a, b));
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for BigDecimal {
    type Output = BigDecimal;
    fn neg(self) -> BigDecimal {
        Scalar::neg(&self)
    }
}

impl Neg for &BigDecimal {
    type Output = BigDecimal;
    fn neg(self) -> BigDecimal {
        Scalar::neg(self)
    }
}

impl serde::Serialize for BigDecimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string_trimmed(self.default_display_digits()))
    }
}
