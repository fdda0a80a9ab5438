//! Complete real-root isolation and refinement.
//!
//! Exact polynomials are isolated with Sturm sequences, decimal ones with
//! Descartes' rule of signs on the exact dyadic values of their coefficients
//! (Vincent-Collins-Akritas bisection). Polynomials over Q(√a) go through
//! their norm, which has rational coefficients. Refinement is bisection with
//! exact sign evaluation on an integer multiple of the polynomial.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BigDecimal, ExtendedScalar, NumericsError, OrderedScalar, Rational, Scalar, UniPoly, Var};

/// One real root. `lower < value < upper` brackets the root unless it is
/// exact, in which case all three coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub value: BigDecimal,
    pub multiplicity: usize,
    /// Closed form when the root lies in Q(√a), i.e. comes from a linear
    /// factor.
    pub exact: Option<ExtendedScalar>,
    pub lower: Rational,
    pub upper: Rational,
}

/// Coefficient types whose polynomials admit complete real-root isolation.
pub trait RootIsolation: OrderedScalar {
    fn isolate(
        p: &UniPoly<Self>,
        lo: &Rational,
        hi: &Rational,
        digits: u32,
    ) -> Result<Vec<RealRoot>, NumericsError>;
}

/// All real roots of `p` in `[lo, hi]`, ascending, each refined to `digits`
/// significant digits.
pub fn real_roots<T: RootIsolation>(
    p: &UniPoly<T>,
    lo: &Rational,
    hi: &Rational,
    digits: u32,
) -> Result<Vec<RealRoot>, NumericsError> {
    if p.is_zero() {
        return Err(NumericsError::ZeroPolynomial);
    }
    if lo > hi {
        return Err(NumericsError::EmptyInterval(lo.to_string(), hi.to_string()));
    }
    let mut roots = T::isolate(p, lo, hi, digits)?;
    roots.sort_by(|a, b| a.lower.cmp(&b.lower));
    Ok(roots)
}

/// Cauchy bound: every real root has absolute value below the result.
pub fn root_bound<T: OrderedScalar>(p: &UniPoly<T>) -> Rational {
    let Some(lead) = p.leading() else {
        return Rational::from_integer(BigInt::one());
    };
    let lead = lead.to_decimal(30).abs();
    let mut m = BigDecimal::from_i64(0);
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = c.to_decimal(30).abs().checked_div(&lead).expect("leading is nonzero");
        if r > m {
            m = r;
        }
    }
    m.to_rational() * Rational::new(11.into(), 10.into()) + Rational::from_integer(2.into())
}

/// An integer polynomial with the same sign pattern as the source.
#[derive(Clone, Debug)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn from_rationals(c: &[Rational]) -> Self {
        let l = c
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut v: Vec<BigInt> = c.iter().map(|r| r.numer() * (&l / r.denom())).collect();
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in v.iter_mut() {
                *x = &*x / &g;
            }
        }
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        IntPoly(v)
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Sign of `p(x)`.
    fn sign_at(&self, x: &Rational) -> Ordering {
        let d = self.degree();
        let (n, q) = (x.numer(), x.denom());
        let mut qp = Vec::with_capacity(d + 1);
        qp.push(BigInt::one());
        for i in 1..=d {
            let next = &qp[i - 1] * q;
            qp.push(next);
        }
        let mut h = match self.0.last() {
            Some(c) => c.clone(),
            None => return Ordering::Equal,
        };
        for i in (0..d).rev() {
            h = h * n + &self.0[i] * &qp[d - i];
        }
        h.sign().cmp(&num_bigint::Sign::NoSign)
    }

    fn sign_variations(c: &[BigInt]) -> usize {
        let mut count = 0;
        let mut last = None;
        for x in c {
            if x.is_zero() {
                continue;
            }
            let s = x.is_positive();
            if last.is_some_and(|l| l != s) {
                count += 1;
            }
            last = Some(s);
        }
        count
    }
}

fn taylor_shift_one(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

fn mid(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(2.into())
}

fn abs_max(a: &Rational, b: &Rational) -> Rational {
    let (a, b) = (a.abs(), b.abs());
    if a > b {
        a
    } else {
        b
    }
}

fn pow10(k: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(10), k as usize))
}

/// Shrinks `(l, r)`, which must hold exactly one sign change of `f`, until
/// it is narrower than `digits` significant digits of the root.
fn refine(f: &IntPoly, mut l: Rational, mut r: Rational, digits: u32) -> (Rational, Rational) {
    let mut sl = f.sign_at(&l);
    let sr = f.sign_at(&r);
    if sl == Ordering::Equal || sr == Ordering::Equal || sl == sr {
        // Endpoint sits on a neighbouring root; step inward until the bracket
        // is clean.
        let mut k = 1u32;
        loop {
            let w = (&r - &l) / Rational::from_integer(BigInt::one() << k);
            let (nl, nr) = (&l + &w, &r - &w);
            let (a, b) = (f.sign_at(&nl), f.sign_at(&nr));
            if a != Ordering::Equal && b != Ordering::Equal && a != b {
                l = nl;
                r = nr;
                sl = a;
                break;
            }
            k += 1;
            if k > 64 + 4 * digits {
                return (l, r);
            }
        }
    }
    let rel = pow10(digits + 2);
    let floor = pow10(2 * digits + 4);
    let cap = 64 + 8 * digits as usize;
    for _ in 0..cap {
        let width = &r - &l;
        let scale = abs_max(&l, &r);
        let straddles_zero = l.is_negative() && r.is_positive();
        if (!straddles_zero && &width * &rel <= scale) || &width * &floor <= Rational::from_integer(BigInt::one()) {
            break;
        }
        let m = mid(&l, &r);
        match f.sign_at(&m) {
            Ordering::Equal => return (m.clone(), m),
            s if s == sl => l = m,
            _ => r = m,
        }
    }
    (l, r)
}

fn finish(l: Rational, r: Rational, multiplicity: usize, digits: u32) -> RealRoot {
    let value = BigDecimal::from_rational(&mid(&l, &r), digits + 10);
    let exact = (l == r).then(|| ExtendedScalar::rational(l.clone()));
    RealRoot {
        value,
        multiplicity,
        exact,
        lower: l,
        upper: r,
    }
}

fn sturm_sequence(f: &UniPoly<Rational>) -> Vec<IntPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("field division");
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-Rational::from_integer(BigInt::one())));
    }
    seq.iter().map(|p| IntPoly::from_rationals(p.coeffs())).collect()
}

fn sturm_variations(seq: &[IntPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for p in seq {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Isolating intervals (or exact points) for the roots of a squarefree
/// rational polynomial in `[lo, hi]`.
fn sturm_isolate(f: &UniPoly<Rational>, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let seq = sturm_sequence(f);
    let ip = &seq[0];
    let count = |a: &Rational, b: &Rational| sturm_variations(&seq, a) - sturm_variations(&seq, b);
    let mut out = Vec::new();
    let mut lo = lo.clone();
    if ip.sign_at(&lo) == Ordering::Equal {
        out.push((lo.clone(), lo.clone()));
        if lo == *hi {
            return out;
        }
        // Step off the root without jumping over another one.
        let mut w = hi - &lo;
        loop {
            w /= Rational::from_integer(2.into());
            let next = &lo + &w;
            if count(&lo, &next) == 0 {
                lo = next;
                break;
            }
        }
    }
    // Each stacked interval is half-open (l, r].
    let mut stack = vec![(lo, hi.clone())];
    while let Some((l, r)) = stack.pop() {
        match count(&l, &r) {
            0 => {}
            1 => {
                if ip.sign_at(&r) == Ordering::Equal {
                    out.push((r.clone(), r));
                } else {
                    out.push((l, r));
                }
            }
            _ => {
                let m = mid(&l, &r);
                stack.push((m.clone(), r));
                stack.push((l, m));
            }
        }
    }
    out
}

fn rational_roots(
    p: &UniPoly<Rational>,
    lo: &Rational,
    hi: &Rational,
    digits: u32,
) -> Vec<RealRoot> {
    let mut out = Vec::new();
    for (mult, f) in p.squarefree_decomposition() {
        let ip = IntPoly::from_rationals(f.coeffs());
        let linear = f.degree() == Some(1);
        for (l, r) in sturm_isolate(&f, lo, hi) {
            let mut root = if l == r {
                finish(l.clone(), r, mult, digits)
            } else {
                let (l, r) = refine(&ip, l, r, digits);
                finish(l, r, mult, digits)
            };
            if linear {
                let x = -f.coeff(0) / f.coeff(1);
                root.exact = Some(ExtendedScalar::rational(x));
            }
            out.push(root);
        }
    }
    out
}

impl RootIsolation for Rational {
    fn isolate(
        p: &UniPoly<Rational>,
        lo: &Rational,
        hi: &Rational,
        digits: u32,
    ) -> Result<Vec<RealRoot>, NumericsError> {
        Ok(rational_roots(p, lo, hi, digits))
    }
}

impl RootIsolation for ExtendedScalar {
    fn isolate(
        p: &UniPoly<ExtendedScalar>,
        lo: &Rational,
        hi: &Rational,
        digits: u32,
    ) -> Result<Vec<RealRoot>, NumericsError> {
        if p.coeffs().iter().all(ExtendedScalar::is_rational) {
            let q = UniPoly::new(
                p.var(),
                p.coeffs().iter().map(|c| c.p().clone()).collect(),
            );
            return Ok(rational_roots(&q, lo, hi, digits));
        }
        let mut out = Vec::new();
        for (mult, f) in p.squarefree_decomposition() {
            let conj = f.map(ExtendedScalar::conjugate);
            let norm = f.try_mul(&conj).expect("same variable");
            let norm = UniPoly::new(
                Var::E,
                norm.coeffs()
                    .iter()
                    .map(|c| c.as_rational().expect("norm is rational").clone())
                    .collect(),
            )
            .squarefree_part();
            let ip = IntPoly::from_rationals(norm.coeffs());
            for (l, r) in sturm_isolate(&norm, lo, hi) {
                if l == r {
                    let x = ExtendedScalar::rational(l.clone());
                    if f.eval(&x).is_zero() {
                        out.push(finish(l, r, mult, digits));
                    }
                    continue;
                }
                let fl = f.eval(&ExtendedScalar::rational(l.clone())).signum();
                let fr = f.eval(&ExtendedScalar::rational(r.clone())).signum();
                if fl == fr {
                    continue;
                }
                let (l, r) = refine(&ip, l, r, digits);
                let mut root = finish(l, r, mult, digits);
                if f.degree() == Some(1) {
                    let x = f.coeff(0).neg().checked_div(&f.coeff(1)).expect("nonzero");
                    root.value = x.to_decimal(digits + 10);
                    root.exact = Some(x);
                }
                out.push(root);
            }
        }
        Ok(out)
    }
}

impl RootIsolation for BigDecimal {
    fn isolate(
        p: &UniPoly<BigDecimal>,
        lo: &Rational,
        hi: &Rational,
        digits: u32,
    ) -> Result<Vec<RealRoot>, NumericsError> {
        let available = p
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .filter_map(BigDecimal::digits)
            .min();
        if let Some(available) = available {
            if digits > available {
                return Err(NumericsError::PrecisionExhausted {
                    requested: digits,
                    available,
                });
            }
        }
        let prec_bits = available.map_or(0, super::bits_for_digits) as usize;
        let rat: Vec<Rational> = p.coeffs().iter().map(BigDecimal::to_rational).collect();
        let f = IntPoly::from_rationals(&rat);
        Ok(descartes_roots(&f, lo, hi, digits, prec_bits))
    }
}

/// Vincent-Collins-Akritas bisection over `[lo, hi]`.
fn descartes_roots(
    f: &IntPoly,
    lo: &Rational,
    hi: &Rational,
    digits: u32,
    prec_bits: usize,
) -> Vec<RealRoot> {
    let mut out = Vec::new();
    let d = f.degree();
    if d == 0 {
        return out;
    }
    for x in [lo, hi] {
        if f.sign_at(x) == Ordering::Equal && (x == lo || lo != hi) {
            out.push(finish(x.clone(), x.clone(), 1, digits));
        }
    }
    if lo == hi {
        return out;
    }
    // g(t) = f(lo + (hi - lo) t), cleared to integers.
    let fr = UniPoly::new(
        Var::E,
        f.0.iter().map(|c| Rational::from_integer(c.clone())).collect(),
    );
    let width = hi - lo;
    let g = fr.taylor_shift(lo).scale_var(&width);
    let g = IntPoly::from_rationals(g.coeffs());
    let max_depth = prec_bits.max(64) + 2 * d + 64;

    // (coefficients on [0,1], numerator k, level j): t in (k/2^j, (k+1)/2^j).
    let mut stack: Vec<(Vec<BigInt>, BigInt, usize)> = vec![(g.0.clone(), BigInt::zero(), 0)];
    let to_x = |k: &BigInt, j: usize| -> Rational {
        lo + &width * Rational::new(k.clone(), BigInt::one() << j)
    };
    while let Some((c, k, j)) = stack.pop() {
        let mut test = c.clone();
        test.reverse();
        taylor_shift_one(&mut test);
        let v = IntPoly::sign_variations(&test);
        if v == 0 {
            continue;
        }
        let (l, r) = (to_x(&k, j), to_x(&(&k + 1), j));
        if v == 1 {
            let (l, r) = refine(f, l, r, digits);
            out.push(finish(l, r, 1, digits));
            continue;
        }
        if j >= max_depth {
            // Unresolvable cluster at this precision.
            out.push(finish(l, r, v, digits));
            continue;
        }
        // Left half: 2^d c(t/2); right half: that shifted by one.
        let n = c.len();
        let mut left: Vec<BigInt> = c
            .iter()
            .enumerate()
            .map(|(i, x)| x << (n - 1 - i))
            .collect();
        let lg = left.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !lg.is_zero() && !lg.is_one() {
            for x in left.iter_mut() {
                *x = &*x / &lg;
            }
        }
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        let kk = &k << 1;
        if right[0].is_zero() {
            let m = to_x(&(&kk + 1), j + 1);
            out.push(finish(m.clone(), m, 1, digits));
        }
        stack.push((right, &kk + 1, j + 1));
        stack.push((left, kk, j + 1));
    }
    out
}

/// Convenience used by tests and the CLI: every real root of an exact
/// polynomial.
pub fn all_real_roots(p: &UniPoly<Rational>, digits: u32) -> Result<Vec<RealRoot>, NumericsError> {
    let b = root_bound(p);
    real_roots(p, &-b.clone(), &b, digits)
}
