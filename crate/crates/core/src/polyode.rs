//! Polynomial solutions of
//!
//! ```text
//! (Σ a6[j] x^{6-j}) y'' + (Σ a5[j] x^{5-j}) y' - (Σ tau4[j] x^{4-j}) y = 0.
//! ```
//!
//! Substituting `y = Σ c_k x^k` turns the equation into a banded linear
//! system for the `c_k`. The top `n + 1` rows form the square band matrix;
//! four more rows collect the powers `x^{n+1} .. x^{n+4}`, the last of which
//! is the degree condition `tau4[0] = n(n-1) a6[0] + n a5[0]`.

use serde::{Deserialize, Serialize};

use crate::numerics::{
    exact_nullspace, parse_rational, ExtendedScalar, Matrix, NumericsError, Scalar, UniPoly, Var,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyOdeError {
    #[error("need a6[0]² + a5[0]² ≠ 0 and some a6[j] ≠ 0")]
    Degenerate,
    #[error("expected {expected} coefficients for {name}, got {got}")]
    WrongLength {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("degree {0} fails the condition tau4[0] = n(n-1) a6[0] + n a5[0]")]
    NotAdmissible(usize),
    #[error("closed form only exists for degrees 0, 1, 2 (got {0})")]
    NoClosedForm(usize),
    #[error("closed form has a vanishing denominator")]
    VanishingDenominator,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, PartialEq, Debug)]
pub struct OdeCoefficients {
    pub a6: [ExtendedScalar; 7],
    pub a5: [ExtendedScalar; 6],
    pub tau4: [ExtendedScalar; 5],
}

/// String form used for JSON files: every entry an exact decimal or `p/q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OdeCoefficientsJson {
    pub a6: Vec<String>,
    pub a5: Vec<String>,
    pub tau4: Vec<String>,
}

fn to_array<const N: usize>(
    name: &'static str,
    v: Vec<ExtendedScalar>,
) -> Result<[ExtendedScalar; N], PolyOdeError> {
    let got = v.len();
    v.try_into().map_err(|_| PolyOdeError::WrongLength {
        name,
        expected: N,
        got,
    })
}

impl OdeCoefficients {
    pub fn new(
        a6: [ExtendedScalar; 7],
        a5: [ExtendedScalar; 6],
        tau4: [ExtendedScalar; 5],
    ) -> Result<Self, PolyOdeError> {
        let lead = a6[0].mul(&a6[0]).add(&a5[0].mul(&a5[0]));
        if lead.is_zero() || a6.iter().all(Scalar::is_zero) {
            return Err(PolyOdeError::Degenerate);
        }
        Ok(OdeCoefficients { a6, a5, tau4 })
    }

    pub fn from_vecs(
        a6: Vec<ExtendedScalar>,
        a5: Vec<ExtendedScalar>,
        tau4: Vec<ExtendedScalar>,
    ) -> Result<Self, PolyOdeError> {
        Self::new(to_array("a6", a6)?, to_array("a5", a5)?, to_array("tau4", tau4)?)
    }

    pub fn from_json(raw: &OdeCoefficientsJson) -> Result<Self, PolyOdeError> {
        let parse = |v: &[String]| -> Result<Vec<ExtendedScalar>, PolyOdeError> {
            v.iter()
                .map(|s| Ok(ExtendedScalar::rational(parse_rational(s)?)))
                .collect()
        };
        Self::from_vecs(parse(&raw.a6)?, parse(&raw.a5)?, parse(&raw.tau4)?)
    }

    pub fn to_json(&self) -> OdeCoefficientsJson {
        let s = |v: &[ExtendedScalar]| v.iter().map(|c| c.to_string()).collect();
        OdeCoefficientsJson {
            a6: s(&self.a6),
            a5: s(&self.a5),
            tau4: s(&self.tau4),
        }
    }

    /// The three coefficient polynomials `(A6, A5, T)` in x.
    pub fn polynomials(&self) -> [UniPoly<ExtendedScalar>; 3] {
        let rev = |v: &[ExtendedScalar]| UniPoly::new(Var::X, v.iter().rev().cloned().collect());
        [rev(&self.a6), rev(&self.a5), rev(&self.tau4)]
    }

    /// Coefficient of `c_k` in the equation for `x^{k+4-m}`.
    pub fn band(&self, m: usize, k: usize) -> ExtendedScalar {
        let k2 = (k * k.saturating_sub(1)) as i64;
        let k1 = k as i64;
        match m {
            0..=4 => self.a6[m]
                .mul_i64(k2)
                .add(&self.a5[m].mul_i64(k1))
                .sub(&self.tau4[m]),
            5 => self.a6[5].mul_i64(k2).add(&self.a5[5].mul_i64(k1)),
            6 => self.a6[6].mul_i64(k2),
            _ => ExtendedScalar::zero(),
        }
    }

    /// `A6 y'' + A5 y' - T y`.
    pub fn residual(&self, y: &UniPoly<ExtendedScalar>) -> UniPoly<ExtendedScalar> {
        let [a6, a5, t] = self.polynomials();
        let d1 = y.derivative();
        let d2 = d1.derivative();
        a6.try_mul(&d2)
            .and_then(|p| p.try_add(&a5.try_mul(&d1)?))
            .and_then(|p| p.try_sub(&t.try_mul(y)?))
            .expect("all polynomials are in x")
    }
}

/// The seven diagonals of the band matrix at index `n`. Diagonals below the
/// main one only exist from the index where they enter the matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct BandCoefficients {
    pub alpha: ExtendedScalar,
    pub beta: ExtendedScalar,
    pub gamma: ExtendedScalar,
    pub delta: Option<ExtendedScalar>,
    pub eta: Option<ExtendedScalar>,
    pub mu: Option<ExtendedScalar>,
    pub zeta: Option<ExtendedScalar>,
}

pub fn band_coefficients(ode: &OdeCoefficients, n: usize) -> BandCoefficients {
    BandCoefficients {
        alpha: ode.band(4, n),
        beta: ode.band(5, n + 1),
        gamma: ode.band(6, n + 2),
        delta: (n >= 1).then(|| ode.band(3, n - 1)),
        eta: (n >= 2).then(|| ode.band(2, n - 2)),
        mu: (n >= 3).then(|| ode.band(1, n - 3)),
        zeta: (n >= 4).then(|| ode.band(0, n - 4)),
    }
}

/// Degrees `0 ≤ n ≤ nmax` with `tau4[0] = n(n-1) a6[0] + n a5[0]`.
pub fn necessary_degrees(ode: &OdeCoefficients, nmax: usize) -> Vec<usize> {
    (0..=nmax).filter(|&n| ode.band(0, n).is_zero()).collect()
}

/// The `(n+5) × (n+1)` system; row `p` is the coefficient of `x^p`.
pub fn build_system(ode: &OdeCoefficients, n: usize) -> Matrix<ExtendedScalar> {
    let mut m = Matrix::zeros(n + 5, n + 1);
    for p in 0..n + 5 {
        for k in 0..=n {
            if k + 4 >= p && k + 4 - p <= 6 {
                m.set(p, k, ode.band(k + 4 - p, k));
            }
        }
    }
    m
}

/// Minors on rows `{0..n-1} ∪ {j}` for `j = n .. n+3`. Together with the
/// degree condition, their vanishing decides solvability whenever the top
/// `n` rows have full rank.
pub fn determinant_conditions(ode: &OdeCoefficients, n: usize) -> [ExtendedScalar; 4] {
    let m = build_system(ode, n);
    let cols: Vec<usize> = (0..=n).collect();
    std::array::from_fn(|i| {
        let mut rows: Vec<usize> = (0..n).collect();
        rows.push(n + i);
        m.select(&rows, &cols).determinant()
    })
}

#[derive(Clone, PartialEq, Debug)]
pub struct PolynomialSolution {
    pub degree: usize,
    pub coeffs: Vec<ExtendedScalar>,
}

impl PolynomialSolution {
    pub fn polynomial(&self) -> UniPoly<ExtendedScalar> {
        UniPoly::new(Var::X, self.coeffs.clone())
    }

    /// Scales so that `c0 = 1`, or the first nonzero coefficient when
    /// `c0 = 0`.
    fn normalized(coeffs: Vec<ExtendedScalar>) -> Self {
        let pivot = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("nonzero vector");
        let coeffs: Vec<_> = coeffs
            .iter()
            .map(|c| c.checked_div(&pivot).expect("pivot is nonzero"))
            .collect();
        PolynomialSolution {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }
}

/// All degree-`n` polynomial solutions (a basis when the space has
/// dimension above one). An empty list means there is none of this degree.
pub fn polynomial_solutions(
    ode: &OdeCoefficients,
    n: usize,
) -> Result<Vec<PolynomialSolution>, PolyOdeError> {
    if !ode.band(0, n).is_zero() {
        return Err(PolyOdeError::NotAdmissible(n));
    }
    let basis = exact_nullspace(&build_system(ode, n));
    let Some(anchor) = basis.iter().find(|v| !v[n].is_zero()).cloned() else {
        return Ok(Vec::new());
    };
    let out: Vec<PolynomialSolution> = basis
        .into_iter()
        .map(|v| {
            if v[n].is_zero() {
                v.iter().zip(&anchor).map(|(x, y)| x.add(y)).collect()
            } else {
                v
            }
        })
        .map(PolynomialSolution::normalized)
        .collect();
    for s in &out {
        debug_assert!(ode.residual(&s.polynomial()).is_zero());
        if !ode.residual(&s.polynomial()).is_zero() {
            unreachable!("nullspace vector fails the residual check");
        }
    }
    Ok(out)
}

/// Explicit solutions for degrees 0, 1 and 2 with `c0 = 1`. The caller is
/// responsible for the solvability conditions.
pub fn low_degree_closed_forms(
    ode: &OdeCoefficients,
    n: usize,
) -> Result<PolynomialSolution, PolyOdeError> {
    let one = ExtendedScalar::one();
    let a = |i: usize| ode.a6[i].clone();
    let b = |i: usize| ode.a5[i].clone();
    let t = |i: usize| ode.tau4[i].clone();
    let coeffs = match n {
        0 => vec![one],
        1 => {
            let c1 = t(4)
                .checked_div(&b(5))
                .ok_or(PolyOdeError::VanishingDenominator)?;
            vec![one, c1]
        }
        2 => {
            let den = b(5)
                .mul(&b(5).add(&a(5)))
                .add(&a(6).mul(&t(4).sub(&b(4))));
            if den.is_zero() {
                return Err(PolyOdeError::VanishingDenominator);
            }
            let c1 = a(6)
                .mul(&t(3))
                .neg()
                .add(&b(5).add(&a(5)).mul(&t(4)))
                .checked_div(&den)
                .expect("nonzero");
            let c2 = b(5)
                .mul(&t(3))
                .sub(&b(4).mul(&t(4)))
                .add(&t(4).mul(&t(4)))
                .checked_div(&den.mul_i64(2))
                .expect("nonzero");
            vec![one, c1, c2]
        }
        _ => return Err(PolyOdeError::NoClosedForm(n)),
    };
    Ok(PolynomialSolution {
        degree: coeffs.len() - 1,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: i64) -> ExtendedScalar {
        ExtendedScalar::from_int(v)
    }

    fn ode(a6: [i64; 7], a5: [i64; 6], tau4: [i64; 5]) -> OdeCoefficients {
        OdeCoefficients::new(a6.map(ex), a5.map(ex), tau4.map(ex)).unwrap()
    }

    #[test]
    fn degenerate_hypotheses_are_rejected() {
        let z = ExtendedScalar::zero();
        let r = OdeCoefficients::new(
            std::array::from_fn(|i| if i == 3 { ex(1) } else { z.clone() }),
            std::array::from_fn(|_| z.clone()),
            std::array::from_fn(|_| z.clone()),
        );
        assert_eq!(r, Err(PolyOdeError::Degenerate));
    }

    #[test]
    fn necessary_degree_examples() {
        let o = ode([1, 0, 0, 0, 0, 0, 0], [0; 6], [0; 5]);
        assert_eq!(necessary_degrees(&o, 10), vec![0, 1]);
        let o = ode([0, 0, 0, 0, 0, 0, 1], [3, 0, 0, 0, 0, 1], [3, 0, 0, 0, 0]);
        assert_eq!(necessary_degrees(&o, 10), vec![1]);
        // tau40 = 2 a60 + 2 a50
        let o = ode([2, 0, 0, 0, 0, 0, 1], [1, 0, 0, 0, 0, 1], [6, 0, 0, 0, 0]);
        assert!(necessary_degrees(&o, 10).contains(&2));
    }

    #[test]
    fn zero_degree_system_is_the_tau_column() {
        let o = ode([1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4, 5, 6], [9, 8, 7, 6, 5]);
        let m = build_system(&o, 0);
        assert_eq!((m.rows(), m.cols()), (5, 1));
        let col: Vec<_> = (0..5).map(|p| m.get(p, 0).clone()).collect();
        assert_eq!(col, vec![ex(-5), ex(-6), ex(-7), ex(-8), ex(-9)]);
    }

    #[test]
    fn all_tau_zero_gives_constant() {
        let o = ode([1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4, 5, 6], [0; 5]);
        let s = polynomial_solutions(&o, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].coeffs, vec![ex(1)]);
        assert_eq!(low_degree_closed_forms(&o, 0).unwrap().coeffs, vec![ex(1)]);
    }

    #[test]
    fn system_rows_match_band_coefficients() {
        let o = ode([1, -2, 3, 5, 7, 11, 13], [2, 3, -1, 4, 6, 9], [1, 2, 3, 4, 5]);
        let n = 6;
        let m = build_system(&o, n);
        for p in 0..=n {
            let b = band_coefficients(&o, p);
            assert_eq!(m.get(p, p), &b.alpha);
            if p < n {
                assert_eq!(m.get(p, p + 1), &b.beta);
            }
            if p + 1 < n {
                assert_eq!(m.get(p, p + 2), &b.gamma);
            }
            if let Some(d) = b.delta {
                assert_eq!(m.get(p, p - 1), &d);
            }
            if let Some(z) = b.zeta {
                assert_eq!(m.get(p, p - 4), &z);
            }
        }
        assert_eq!(band_coefficients(&o, 3).zeta, None);
        // Last row carries only the degree condition.
        assert_eq!(m.get(n + 4, n), &o.band(0, n));
        assert!((0..n).all(|k| m.get(n + 4, k).is_zero()));
    }

    #[test]
    fn first_degree_matches_determinants() {
        // y = 1 + 2x, T = 2x⁴ + 2, A5 = T y / 2.
        let o = ode([0, 0, 0, 0, 0, 0, 1], [2, 1, 0, 0, 2, 1], [2, 0, 0, 0, 2]);
        assert!(necessary_degrees(&o, 3).contains(&1));
        let s = polynomial_solutions(&o, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].coeffs, vec![ex(1), ex(2)]);
        assert!(determinant_conditions(&o, 1).iter().all(Scalar::is_zero));
        assert_eq!(low_degree_closed_forms(&o, 1).unwrap(), s[0]);
    }

    #[test]
    fn second_degree_with_vanishing_numerators() {
        // τ44 = τ43 = 0 gives y₂ = 1.
        let o = ode([1, 0, 3, 0, 1, 1, 3], [2, 0, 0, 0, 1, 1], [6, 0, 0, 0, 0]);
        let y = low_degree_closed_forms(&o, 2).unwrap();
        assert_eq!(y.polynomial(), UniPoly::constant(Var::X, ex(1)));
    }

    #[test]
    fn no_closed_form_beyond_two() {
        let o = ode([1, 0, 0, 0, 0, 0, 0], [0; 6], [0; 5]);
        assert_eq!(low_degree_closed_forms(&o, 3), Err(PolyOdeError::NoClosedForm(3)));
    }

    #[test]
    fn inadmissible_degree_is_an_error() {
        let o = ode([1, 0, 0, 0, 0, 0, 0], [0; 6], [5, 0, 0, 0, 0]);
        assert_eq!(polynomial_solutions(&o, 2), Err(PolyOdeError::NotAdmissible(2)));
    }

    #[test]
    fn json_round_trip() {
        let o = ode([1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4, 5, 6], [9, 8, 7, 6, 5]);
        let j = o.to_json();
        assert_eq!(OdeCoefficients::from_json(&j).unwrap(), o);
        let mut bad = j.clone();
        bad.a5.pop();
        assert!(matches!(
            OdeCoefficients::from_json(&bad),
            Err(PolyOdeError::WrongLength { name: "a5", .. })
        ));
    }
}
