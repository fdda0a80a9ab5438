//! Exact arithmetic in the quadratic field Q(√r).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Signed;
use serde::ser::SerializeStruct;

use super::rational::{exact_sqrt, format_rational, parse_rational};
use super::{BigDecimal, NumericsError, OrderedScalar, Rational, Scalar};

/// `p + q·√r` with rational `p`, `q` and a fixed rational radicand `r > 0`
/// that is never a perfect square.
///
/// Values with `q == 0` are plain rationals and combine with any radicand.
/// Combining two values with `q != 0` and different radicands is a logic
/// error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtendedScalar {
    p: Rational,
    q: Rational,
    radicand: Rational,
}

impl ExtendedScalar {
    pub fn rational(p: Rational) -> Self {
        ExtendedScalar {
            p,
            q: Rational::zero(),
            radicand: Rational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(Rational::from_integer(v.into()))
    }

    /// `p + q√r`, collapsing to a rational when `r` is a perfect square.
    pub fn new(p: Rational, q: Rational, radicand: Rational) -> Self {
        assert!(radicand.is_positive(), "radicand must be positive");
        if q.is_zero() {
            return Self::rational(p);
        }
        match exact_sqrt(&radicand) {
            Some(root) => Self::rational(p + q * root),
            None => ExtendedScalar { p, q, radicand },
        }
    }

    /// `√r` for `r >= 0`.
    pub fn sqrt_of(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::zero());
        }
        Some(Self::new(Rational::zero(), Rational::one(), r.clone()))
    }

    /// `√r` expressed in Q(√radicand): succeeds when `r` or `r/radicand` is
    /// the square of a rational.
    pub fn sqrt_in(r: &Rational, radicand: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if let Some(root) = exact_sqrt(r) {
            return Some(Self::rational(root));
        }
        let ratio = r / radicand;
        exact_sqrt(&ratio).map(|s| Self::new(Rational::zero(), s, radicand.clone()))
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// The radicand, or `None` for plain rationals.
    pub fn radicand(&self) -> Option<&Rational> {
        if self.q.is_zero() {
            None
        } else {
            Some(&self.radicand)
        }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.q.is_zero() {
            Some(&self.p)
        } else {
            None
        }
    }

    /// `p - q√r`.
    pub fn conjugate(&self) -> Self {
        ExtendedScalar {
            p: self.p.clone(),
            q: -&self.q,
            radicand: self.radicand.clone(),
        }
    }

    /// `(p + q√r)(p - q√r) = p² - r q²`.
    pub fn norm(&self) -> Rational {
        &self.p * &self.p - &self.radicand * &self.q * &self.q
    }

    fn shared_radicand(&self, other: &Self) -> Rational {
        match (self.q.is_zero(), other.q.is_zero()) {
            (true, true) => Rational::one(),
            (true, false) => other.radicand.clone(),
            (false, true) => self.radicand.clone(),
            (false, false) => {
                assert!(
                    self.radicand == other.radicand,
                    "cannot combine √{} with √{}",
                    self.radicand,
                    other.radicand
                );
                self.radicand.clone()
            }
        }
    }

    fn make(p: Rational, q: Rational, radicand: Rational) -> Self {
        if q.is_zero() {
            Self::rational(p)
        } else {
            ExtendedScalar { p, q, radicand }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = Scalar::mul(&acc, self);
        }
        acc
    }

    pub fn recip(&self) -> Option<Self> {
        Self::one().checked_div(self)
    }

    /// Parses the display form: `"p"`, `"q·√r"`, `"√r"`, `"p + q·√r"`,
    /// `"p - q·√r"`. `*` is accepted in place of `·`.
    pub fn parse(s: &str) -> Result<Self, NumericsError> {
        let bad = || NumericsError::Parse(s.to_string());
        let t = s.trim();
        let Some((head, r)) = t.split_once('√') else {
            return parse_rational(t).map(Self::rational);
        };
        let radicand = parse_rational(r)?;
        if !radicand.is_positive() {
            return Err(bad());
        }
        let head = head.trim_end();
        let head = head
            .strip_suffix('·')
            .or_else(|| head.strip_suffix('*'))
            .unwrap_or(head)
            .trim_end();
        let split = head
            .rfind(" + ")
            .map(|i| (i, Rational::one()))
            .or_else(|| head.rfind(" - ").map(|i| (i, -Rational::one())));
        let (p, sign, q_str) = match split {
            Some((i, sign)) => (parse_rational(&head[..i])?, sign, head[i + 3..].trim()),
            None => (Rational::zero(), Rational::one(), head),
        };
        let q = match q_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            q => parse_rational(q)?,
        };
        Ok(Self::new(p, sign * q, radicand))
    }
}

impl From<Rational> for ExtendedScalar {
    fn from(p: Rational) -> Self {
        Self::rational(p)
    }
}

impl Scalar for ExtendedScalar {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn one() -> Self {
        Self::rational(Rational::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::from_int(v)
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        let r = self.shared_radicand(rhs);
        Self::make(&self.p + &rhs.p, &self.q + &rhs.q, r)
    }
    fn sub(&self, rhs: &Self) -> Self {
        let r = self.shared_radicand(rhs);
        Self::make(&self.p - &rhs.p, &self.q - &rhs.q, r)
    }
    fn mul(&self, rhs: &Self) -> Self {
        let r = self.shared_radicand(rhs);
        let p = &self.p * &rhs.p + &r * &self.q * &rhs.q;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        Self::make(p, q, r)
    }
    fn neg(&self) -> Self {
        ExtendedScalar {
            p: -&self.p,
            q: -&self.q,
            radicand: self.radicand.clone(),
        }
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if rhs.q.is_zero() {
            return Some(Self::make(
                &self.p / &rhs.p,
                &self.q / &rhs.p,
                self.radicand.clone(),
            ));
        }
        let n = rhs.norm();
        let num = Scalar::mul(self, &rhs.conjugate());
        Some(Self::make(&num.p / &n, &num.q / &n, num.radicand))
    }
}

impl OrderedScalar for ExtendedScalar {
    fn signum(&self) -> Ordering {
        let sp = Signed::signum(&self.p).cmp(&Rational::zero());
        let sq = Signed::signum(&self.q).cmp(&Rational::zero());
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        // Opposite signs: the larger of p² and r·q² wins.
        let p2 = &self.p * &self.p;
        let q2 = &self.radicand * &self.q * &self.q;
        match p2.cmp(&q2) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    fn try_sqrt(&self) -> Option<Self> {
        let r = self.as_rational()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        Self::sqrt_in(r, &self.radicand).or_else(|| Self::sqrt_of(r))
    }

    fn to_decimal(&self, digits: u32) -> BigDecimal {
        let p = BigDecimal::from_rational(&self.p, digits + 5);
        if self.q.is_zero() {
            return p.with_digits(digits);
        }
        let q = BigDecimal::from_rational(&self.q, digits + 5);
        let root = BigDecimal::from_rational(&self.radicand, digits + 5)
            .sqrt()
            .expect("radicand is positive");
        (&p + &(&q * &root)).with_digits(digits)
    }
}

impl fmt::Debug for ExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if self.p.is_zero() {
            write!(f, "{}·√{}", self.q, self.radicand)
        } else if self.q.is_negative() {
            write!(f, "{} - {}·√{}", self.p, -&self.q, self.radicand)
        } else {
            write!(f, "{} + {}·√{}", self.p, self.q, self.radicand)
        }
    }
}

impl serde::Serialize for ExtendedScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtendedScalar", 3)?;
        st.serialize_field("p", &format_rational(&self.p))?;
        st.serialize_field("q", &format_rational(&self.q))?;
        st.serialize_field("a", &format_rational(&self.radicand))?;
        st.end()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&ExtendedScalar> for &ExtendedScalar {
            type Output = ExtendedScalar;
            fn $method(self, rhs: &ExtendedScalar) -> ExtendedScalar {
                let f: fn(&ExtendedScalar, &ExtendedScalar) -> ExtendedScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExtendedScalar> for ExtendedScalar {
            type Output = ExtendedScalar;
            fn $method(self, rhs: ExtendedScalar) -> ExtendedScalar {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&ExtendedScalar> for ExtendedScalar {
            type Output = ExtendedScalar;
            fn $method(self, rhs: &ExtendedScalar) -> ExtendedScalar {
                $tr::$method(&self, rhs)
            }
        }
        impl $tr<ExtendedScalar> for &ExtendedScalar {
            type Output = ExtendedScalar;
            fn $method(self, rhs: ExtendedScalar) -> ExtendedScalar {
                $tr::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Scalar::add(a, b));
forward_binop!(Sub, sub, |a, b| Scalar::sub(a, b));
forward_binop!(Mul, mul, |a, b| Scalar::mul(a, b));
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for ExtendedScalar {
    type Output = ExtendedScalar;
    fn neg(self) -> ExtendedScalar {
        Scalar::neg(&self)
    }
}

impl Neg for &ExtendedScalar {
    type Output = ExtendedScalar;
    fn neg(self) -> ExtendedScalar {
        Scalar::neg(self)
    }
}
