//! The decaying factor `e^{-φ(x)}` and the equation left for χ after
//! factoring it out of `-ψ'' + (V - E)ψ = 0`.
//!
//! With `ψ = χ e^{-φ}` one gets `χ'' = λ₀ χ' + s₀ χ` where `λ₀ = 2φ'` and
//! `s₀ = φ'' - φ'² + V - E`. The exponent is chosen as the polynomial part of
//! `∫√V`, which makes `s₀` drop to degree four.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::numerics::{
    parse_rational, BiPoly, BigDecimal, ExtendedScalar, NumericsError, OrderedScalar, Rational,
    Scalar, UniPoly, Var,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("leading coefficient a must be positive, got {0}")]
    NonPositiveLeading(String),
    #[error("coefficient {name} = {value} does not live in Q(√{a})")]
    ForeignRadicand {
        name: &'static str,
        value: String,
        a: String,
    },
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("leading coefficient has no square root in the coefficient field")]
    NoSquareRoot,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `V(x) = a x¹⁰ + b x⁸ + c x⁶ + d x⁴ + e x²` with `a > 0`.
///
/// `a` is rational; the other coefficients may involve `√a`, which is what
/// the closed-form families produce.
#[derive(Clone, PartialEq, Debug)]
pub struct Potential {
    a: Rational,
    b: ExtendedScalar,
    c: ExtendedScalar,
    d: ExtendedScalar,
    e: ExtendedScalar,
}

impl Potential {
    pub fn new(
        a: Rational,
        b: ExtendedScalar,
        c: ExtendedScalar,
        d: ExtendedScalar,
        e: ExtendedScalar,
    ) -> Result<Self, AsymptoticsError> {
        if !a.is_positive() {
            return Err(AsymptoticsError::NonPositiveLeading(a.to_string()));
        }
        let root = ExtendedScalar::sqrt_of(&a).expect("a > 0");
        for (name, v) in [("b", &b), ("c", &c), ("d", &d), ("e", &e)] {
            if let (Some(r), Some(ra)) = (v.radicand(), root.radicand()) {
                if r == ra {
                    continue;
                }
            }
            if v.radicand().is_some() {
                return Err(AsymptoticsError::ForeignRadicand {
                    name,
                    value: v.to_string(),
                    a: a.to_string(),
                });
            }
        }
        Ok(Potential { a, b, c, d, e })
    }

    pub fn from_rationals(
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
        e: Rational,
    ) -> Result<Self, AsymptoticsError> {
        Self::new(a, b.into(), c.into(), d.into(), e.into())
    }

    /// Parses five exact decimal or `p/q` strings.
    pub fn parse(coeffs: [&str; 5]) -> Result<Self, AsymptoticsError> {
        let [a, b, c, d, e] = coeffs.map(parse_rational);
        Self::from_rationals(a?, b?, c?, d?, e?)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &ExtendedScalar {
        &self.b
    }
    pub fn c(&self) -> &ExtendedScalar {
        &self.c
    }
    pub fn d(&self) -> &ExtendedScalar {
        &self.d
    }
    pub fn e(&self) -> &ExtendedScalar {
        &self.e
    }

    pub fn a_ext(&self) -> ExtendedScalar {
        ExtendedScalar::rational(self.a.clone())
    }

    /// `√a`, rational when `a` is a perfect square.
    pub fn sqrt_a(&self) -> ExtendedScalar {
        ExtendedScalar::sqrt_of(&self.a).expect("a > 0")
    }

    pub fn with_d(&self, d: ExtendedScalar) -> Self {
        Potential { d, ..self.clone() }
    }

    pub fn with_e(&self, e: ExtendedScalar) -> Self {
        Potential { e, ..self.clone() }
    }

    /// `V` as a polynomial in x.
    pub fn polynomial(&self) -> UniPoly<ExtendedScalar> {
        let z = ExtendedScalar::zero();
        UniPoly::new(
            Var::X,
            vec![
                z.clone(),
                z.clone(),
                self.e.clone(),
                z.clone(),
                self.d.clone(),
                z.clone(),
                self.c.clone(),
                z.clone(),
                self.b.clone(),
                z,
                self.a_ext(),
            ],
        )
    }

    pub fn eval(&self, x: &BigDecimal, digits: u32) -> BigDecimal {
        let p = self.polynomial().map(|c| c.to_decimal(digits));
        p.eval(&x.with_digits(digits))
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})x^10 + ({})x^8 + ({})x^6 + ({})x^4 + ({})x^2",
            self.a, self.b, self.c, self.d, self.e
        )
    }
}

impl Serialize for Potential {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Potential", 5)?;
        st.serialize_field("a", &ExtendedScalar::rational(self.a.clone()))?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("e", &self.e)?;
        st.end()
    }
}

/// `φ(x) = c6 x⁶ + c4 x⁴ + c2 x²`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct AsymptoticExponent {
    pub c6: ExtendedScalar,
    pub c4: ExtendedScalar,
    pub c2: ExtendedScalar,
}

impl AsymptoticExponent {
    pub fn polynomial(&self) -> UniPoly<ExtendedScalar> {
        let z = ExtendedScalar::zero();
        UniPoly::new(
            Var::X,
            vec![
                z.clone(),
                z.clone(),
                self.c2.clone(),
                z.clone(),
                self.c4.clone(),
                z,
                self.c6.clone(),
            ],
        )
    }

    /// `e^{-φ(x)}`.
    pub fn weight(&self, x: &BigDecimal, digits: u32) -> BigDecimal {
        let phi = self.polynomial().map(|c| c.to_decimal(digits + 10));
        exp(&phi.eval(&x.with_digits(digits + 10)).neg(), digits + 10).with_digits(digits)
    }
}

/// `χ'' = λ₀ χ' + s₀ χ`; `s₀` keeps E symbolic.
#[derive(Clone, PartialEq, Debug)]
pub struct ReducedOde {
    pub lambda0: UniPoly<ExtendedScalar>,
    pub s0: BiPoly<ExtendedScalar>,
}

impl ReducedOde {
    /// `s₀` at a fixed energy.
    pub fn s0_at(&self, energy: &ExtendedScalar) -> UniPoly<ExtendedScalar> {
        self.s0.eval_e(energy)
    }
}

/// The unique `Q` of degree `m` with positive leading coefficient and
/// `deg(P - Q²) < m`, for `P` of degree `2m`.
pub fn sqrt_polynomial_part<T: OrderedScalar>(
    p: &UniPoly<T>,
) -> Result<UniPoly<T>, AsymptoticsError> {
    let n = p.degree().ok_or(NumericsError::ZeroPolynomial)?;
    if n % 2 == 1 {
        return Err(AsymptoticsError::OddDegree(n));
    }
    let lead = p.leading().expect("nonzero");
    if lead.signum() != std::cmp::Ordering::Greater {
        return Err(AsymptoticsError::NonPositiveLeading(format!("{lead:?}")));
    }
    let m = n / 2;
    let mut q = vec![T::zero(); m + 1];
    q[m] = lead.try_sqrt().ok_or(AsymptoticsError::NoSquareRoot)?;
    let two_lead = q[m].mul_i64(2);
    for k in (0..m).rev() {
        // x^{m+k}: 2 q_m q_k + sum over i + j = m + k with k < i, j < m.
        let mut acc = p.coeff(m + k);
        for i in k + 1..m {
            let j = m + k - i;
            if j > k && j < m {
                acc = acc.sub(&q[i].mul(&q[j]));
            }
        }
        q[k] = acc.checked_div(&two_lead).ok_or(NumericsError::DivisionByZero)?;
    }
    Ok(UniPoly::new(p.var(), q))
}

/// `φ` with `φ' = ` polynomial part of `√V`.
pub fn build_exponent(v: &Potential) -> AsymptoticExponent {
    let ra = v.sqrt_a();
    let a = v.a_ext();
    let a32 = a.mul(&ra);
    let disc = v.b.mul(&v.b).sub(&a.mul(&v.c).mul_i64(4));
    AsymptoticExponent {
        c6: ra.checked_div(&ExtendedScalar::from_int(6)).expect("nonzero"),
        c4: v.b.checked_div(&ra.mul_i64(8)).expect("a > 0"),
        c2: disc.neg().checked_div(&a32.mul_i64(16)).expect("a > 0"),
    }
}

/// `λ₀ = 2√a x⁵ + (b/√a) x³ - (b² - 4ac)/(4a^{3/2}) x` and
/// `s₀ = (4ac - b²)/(8a^{3/2}) - E + s₂ x² + s₄ x⁴`.
pub fn reduce(v: &Potential) -> ReducedOde {
    let ra = v.sqrt_a();
    let a = v.a_ext();
    let (b, c, d, e) = (&v.b, &v.c, &v.d, &v.e);
    let a2 = a.mul(&a);
    let a3 = a2.mul(&a);
    let a32 = a.mul(&ra);
    let a52 = a2.mul(&ra);
    let b2 = b.mul(b);
    let disc = b2.sub(&a.mul(c).mul_i64(4));
    let div = |x: ExtendedScalar, y: ExtendedScalar| x.checked_div(&y).expect("a > 0");

    let z = ExtendedScalar::zero();
    let lambda0 = UniPoly::new(
        Var::X,
        vec![
            z.clone(),
            div(disc.neg(), a32.mul_i64(4)),
            z.clone(),
            div(b.clone(), ra.clone()),
            z.clone(),
            ra.mul_i64(2),
        ],
    );

    let s00 = div(disc.neg(), a32.mul_i64(8));
    // 64a³e + 96a^{5/2}b - b⁴ + 8ab²c - 16a²c²
    let s2_num = a3
        .mul(e)
        .mul_i64(64)
        .add(&a52.mul(b).mul_i64(96))
        .sub(&b2.mul(&b2))
        .add(&a.mul(&b2).mul(c).mul_i64(8))
        .sub(&a2.mul(c).mul(c).mul_i64(16));
    let s2 = div(s2_num, a3.mul_i64(64));
    // 8a²d + 40a^{5/2} + b³ - 4abc
    let s4_num = a2
        .mul(d)
        .mul_i64(8)
        .add(&a52.mul_i64(40))
        .add(&b2.mul(b))
        .sub(&a.mul(b).mul(c).mul_i64(4));
    let s4 = div(s4_num, a2.mul_i64(8));
    let s0 = BiPoly::new(vec![
        vec![s00, ExtendedScalar::from_int(-1)],
        vec![],
        vec![s2],
        vec![],
        vec![s4],
    ]);
    ReducedOde { lambda0, s0 }
}

/// `e^x` by argument halving and a Taylor series, at `digits` precision.
pub fn exp(x: &BigDecimal, digits: u32) -> BigDecimal {
    let x = x.with_digits(digits + 10);
    if x.is_zero() {
        return BigDecimal::one();
    }
    // Halve until |x| < 2^-8, then square back.
    let mut k = 0i64;
    let mag = x.magnitude_exponent().unwrap_or(0);
    if mag > -8 {
        k = mag + 8;
    }
    let y = x.mul_pow2(-k);
    let tol_exp = -((digits as f64 + 12.0) * std::f64::consts::LOG2_10) as i64;
    let mut term = BigDecimal::one().with_digits(digits + 10);
    let mut sum = term.clone();
    let mut n = 1i64;
    loop {
        term = term.mul(&y).checked_div(&BigDecimal::from_i64(n)).expect("n > 0");
        sum = sum.add(&term);
        if term.is_zero() || term.magnitude_exponent().expect("nonzero") < tol_exp {
            break;
        }
        n += 1;
    }
    for _ in 0..k {
        sum = sum.mul(&sum);
    }
    sum.with_digits(digits)
}
