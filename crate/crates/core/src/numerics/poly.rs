//! Dense univariate polynomials.

use std::fmt;

use super::{NumericsError, OrderedScalar, Scalar};

/// Which indeterminate a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Var {
    /// Position.
    X,
    /// Energy.
    E,
    /// The x² coupling `e` of the potential, symbolic only while it is being
    /// eliminated.
    Coupling,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::E => "E",
            Var::Coupling => "e",
        })
    }
}

/// `coeffs[k]` multiplies `var^k`. The highest stored coefficient is nonzero;
/// the zero polynomial has no coefficients.
///
/// Constants carry a variable tag but are compatible with every tag.
#[derive(Clone, PartialEq)]
pub struct UniPoly<T> {
    var: Var,
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(var: Var, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn zero_in(var: Var) -> Self {
        UniPoly {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(var: Var, c: T) -> Self {
        Self::new(var, vec![c])
    }

    /// `c · var^k`.
    pub fn monomial(var: Var, c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(var, coeffs)
    }

    /// The identity polynomial `var`.
    pub fn identity(var: Var) -> Self {
        Self::monomial(var, T::one(), 1)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `var^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    fn joint_var(&self, other: &Self) -> Result<Var, NumericsError> {
        if self.var == other.var || other.is_constant() {
            Ok(self.var)
        } else if self.is_constant() {
            Ok(other.var)
        } else {
            Err(NumericsError::VariableMismatch(self.var, other.var))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumericsError> {
        let var = self.joint_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(Self::new(var, coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumericsError> {
        self.try_add(&other.neg_poly())
    }

    /// Convolution product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, NumericsError> {
        let var = self.joint_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero_in(var));
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Ok(Self::new(var, out))
    }

    fn neg_poly(&self) -> Self {
        UniPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.var, self.coeffs.iter().map(f).collect())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_i64(k as i64))
            .collect();
        Self::new(self.var, coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul(at).add(c))
    }

    /// `p(var + shift)`.
    pub fn taylor_shift(&self, shift: &T) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].mul(shift);
                c[j] = c[j].add(&t);
            }
        }
        Self::new(self.var, c)
    }

    /// `p(factor · var)`.
    pub fn scale_var(&self, factor: &T) -> Self {
        let mut pw = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(&pw));
            pw = pw.mul(factor);
        }
        Self::new(self.var, out)
    }

    /// `var^deg · p(1/var)`, `deg` being this polynomial's degree.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(self.var, c)
    }

    /// Keeps the coefficients of `var^0 .. var^(len-1)`.
    pub fn truncate(&self, len: usize) -> Self {
        Self::new(self.var, self.coeffs.iter().take(len).cloned().collect())
    }

    /// Euclidean division; the divisor's leading coefficient must be
    /// invertible (always true over a field).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), NumericsError> {
        let var = self.joint_var(divisor)?;
        let lead = divisor.leading().ok_or(NumericsError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero_in(var), Self::new(var, rem)));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let f = top.checked_div(lead).ok_or(NumericsError::InexactDivision)?;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub(&f.mul(dc));
            }
            quot[k] = f;
        }
        rem.truncate(dd);
        Ok((Self::new(var, quot), Self::new(var, rem)))
    }

    /// Quotient when the division is exact, `None` otherwise.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                Self::new(
                    self.var,
                    self.coeffs
                        .iter()
                        .map(|c| c.checked_div(&l).expect("leading coefficient is nonzero"))
                        .collect(),
                )
            }
        }
    }

    /// Monic greatest common divisor (exact fields only).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("field coefficients");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) < 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Yun's algorithm: `p = c · ∏ f_i^i` with squarefree, pairwise coprime
    /// monic `f_i`. Returns `(i, f_i)` for nonconstant factors.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) < 1 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut d = c.try_sub(&b.derivative()).expect("same variable");
        let mut i = 1;
        while b.degree().unwrap_or(0) >= 1 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) >= 1 {
                out.push((i, a.clone()));
            }
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = c.try_sub(&b.derivative()).expect("same variable");
            i += 1;
        }
        out
    }
}

impl<T: OrderedScalar> UniPoly<T> {
    /// Sign of `p(at)`.
    pub fn sign_at(&self, at: &T) -> std::cmp::Ordering {
        self.eval(at).signum()
    }
}

/// Checked product; fails when both operands are nonconstant polynomials in
/// different variables.
pub fn poly_mul<T: Scalar>(p: &UniPoly<T>, q: &UniPoly<T>) -> Result<UniPoly<T>, NumericsError> {
    p.try_mul(q)
}

/// Formal derivative with respect to the polynomial's variable.
pub fn poly_diff<T: Scalar>(p: &UniPoly<T>) -> UniPoly<T> {
    p.derivative()
}

/// Polynomials form a ring; `checked_div` is exact division. Mixing variables
/// through this interface panics, use the `try_*` methods to get an error.
impl<T: Scalar> Scalar for UniPoly<T> {
    fn zero() -> Self {
        Self::zero_in(Var::X)
    }
    fn one() -> Self {
        Self::constant(Var::X, T::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(Var::X, T::from_i64(v))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("polynomial variables differ")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("polynomial variables differ")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("polynomial variables differ")
    }
    fn neg(&self) -> Self {
        self.neg_poly()
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        self.exact_div(rhs)
    }
    fn is_exact() -> bool {
        T::is_exact()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})·{}", self.var)?,
                _ => write!(f, "({c})·{}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}]{:?}", self.var, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};
    use crate::numerics::Rational;
    use proptest::prelude::*;

    fn px(c: &[Rational]) -> UniPoly<Rational> {
        UniPoly::new(Var::X, c.to_vec())
    }

    fn ints(c: &[i64]) -> UniPoly<Rational> {
        px(&c.iter().map(|&v| int(v)).collect::<Vec<_>>())
    }

    #[test]
    fn difference_of_squares() {
        let p = ints(&[1, 1]);
        let q = ints(&[-1, 1]);
        assert_eq!(poly_mul(&p, &q).unwrap(), ints(&[-1, 0, 1]));
        assert_eq!(poly_mul(&p, &ints(&[1])).unwrap(), p);
    }

    #[test]
    fn square_of_decatic_root_part() {
        // (x^5 - x^3/2 + 3x/8)^2 = x^10 - x^8 + x^6 - 3/8 x^4 + ...
        let q = px(&[int(0), rat(3, 8), int(0), rat(-1, 2), int(0), int(1)]);
        let sq = poly_mul(&q, &q).unwrap();
        assert_eq!(sq.coeff(10), int(1));
        assert_eq!(sq.coeff(8), int(-1));
        assert_eq!(sq.coeff(6), int(1));
        assert_eq!(sq.coeff(4), rat(-3, 8));
        assert_eq!(sq.coeff(2), rat(9, 64));
    }

    #[test]
    fn derivative_rules() {
        assert_eq!(poly_diff(&ints(&[0, 0, 0, 1])), ints(&[0, 0, 3]));
        assert!(poly_diff(&ints(&[7])).is_zero());
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let x = UniPoly::<Rational>::identity(Var::X);
        let e = UniPoly::<Rational>::identity(Var::E);
        assert!(matches!(
            poly_mul(&x, &e),
            Err(NumericsError::VariableMismatch(Var::X, Var::E))
        ));
        // constants mix freely
        let c = UniPoly::constant(Var::E, int(3));
        assert_eq!(poly_mul(&x, &c).unwrap(), ints(&[0, 3]));
    }

    #[test]
    fn division_and_gcd() {
        let p = poly_mul(&ints(&[-1, 1]), &ints(&[-2, 1])).unwrap();
        let q = poly_mul(&ints(&[-1, 1]), &ints(&[5, 1])).unwrap();
        assert_eq!(p.gcd(&q), ints(&[-1, 1]));
        let (quo, rem) = p.div_rem(&ints(&[-1, 1])).unwrap();
        assert_eq!(quo, ints(&[-2, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)
        let l = ints(&[-1, 1]);
        let p = poly_mul(&poly_mul(&poly_mul(&l, &l).unwrap(), &l).unwrap(), &ints(&[2, 1])).unwrap();
        let dec = p.squarefree_decomposition();
        assert_eq!(dec, vec![(1, ints(&[2, 1])), (3, ints(&[-1, 1]))]);
        assert_eq!(p.squarefree_part(), poly_mul(&l, &ints(&[2, 1])).unwrap());
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = ints(&[3, -2, 0, 5]);
        let s = p.taylor_shift(&int(2));
        for t in -3..4 {
            assert_eq!(s.eval(&int(t)), p.eval(&int(t + 2)));
        }
    }

    fn arb_poly() -> impl Strategy<Value = UniPoly<Rational>> {
        prop::collection::vec((-9i64..10, 1i64..5), 0..7)
            .prop_map(|v| px(&v.into_iter().map(|(n, d)| rat(n, d)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn leibniz_rule(p in arb_poly(), q in arb_poly()) {
            let lhs = poly_diff(&poly_mul(&p, &q).unwrap());
            let rhs = poly_mul(&poly_diff(&p), &q).unwrap()
                .try_add(&poly_mul(&p, &poly_diff(&q)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_is_additive(p in arb_poly(), q in arb_poly()) {
            let pq = poly_mul(&p, &q).unwrap();
            match (p.degree(), q.degree()) {
                (Some(a), Some(b)) => prop_assert_eq!(pq.degree(), Some(a + b)),
                _ => prop_assert!(pq.is_zero()),
            }
        }
    }
}
