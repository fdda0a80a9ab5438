//! Quasi-exactly solvable states of `V(x) = a x¹⁰ + b x⁸ + c x⁶ + d x⁴ + e x²`.
//!
//! With `ψ = χ e^{-φ}` and `χ` a polynomial of degree `N`, the coefficients
//! of `χ` are generated by a four-term recurrence in the energy polynomials
//! `P_j(E)`. Termination requires
//!
//! * the degree condition `8(5 + 2N) a^{5/2} + 8a²d - 4abc + b³ = 0`,
//! * the terminal equation `P_{N+2}(E) = 0`,
//! * one constraint linking `P_N` and `P_{N-2}`, which carries `e`.
//!
//! States are indexed in two ways. [`solve_state`] and [`admissible_state`]
//! use the polynomial degree `N`. The recurrence-level functions use the
//! index `m` with `N = 2m` (even) or `N = 2m + 1` (odd).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{build_exponent, AsymptoticExponent, AsymptoticsError, Potential};
use crate::numerics::{
    real_roots, root_bound, BiPoly, BigDecimal, ExtendedScalar, Matrix, Number, NumericsError,
    OrderedScalar, Rational, Scalar, UniPoly, Var,
};

type Ext = ExtendedScalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecaticError {
    #[error("degree {degree} does not have {parity} parity")]
    ParityMismatch { parity: Parity, degree: usize },
    #[error("no real (E, e) pair solves the termination conditions")]
    NoRealSolution,
    #[error("termination conditions do not determine (E, e)")]
    Degenerate,
    #[error("table {table} has no row {row}")]
    UnknownRow { table: u8, row: usize },
    #[error("table parameters must be positive, got {0}")]
    NonPositive(String),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: usize) -> Self {
        if degree.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Polynomial degree for recurrence index `m`.
    pub fn degree(self, m: usize) -> usize {
        2 * m + self.offset()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

fn ext(v: i64) -> Ext {
    Ext::from_int(v)
}

fn div(x: &Ext, y: &Ext) -> Ext {
    x.checked_div(y).expect("divisor is a positive power of a")
}

fn factorial(n: usize) -> Ext {
    let f: BigInt = (1..=n).map(BigInt::from).product();
    Ext::rational(Rational::from_integer(f))
}

/// Powers of `a` and the combinations of `(a, b, c)` the recurrence uses.
struct Coeffs {
    a: Ext,
    b: Ext,
    c: Ext,
    a2: Ext,
    a3: Ext,
    a5: Ext,
    a52: Ext,
    /// `8a^{3/2}`
    r: Ext,
    /// `b² - 4ac`
    delta: Ext,
    /// `-b⁴ + 8ab²c - 16a²c²`
    quartic: Ext,
}

impl Coeffs {
    fn new(a: &Rational, b: &Ext, c: &Ext) -> Result<Self, DecaticError> {
        // Validates a > 0 and the radicands of b and c.
        let v = Potential::new(a.clone(), b.clone(), c.clone(), Ext::zero(), Ext::zero())?;
        let ra = v.sqrt_a();
        let a = v.a_ext();
        let a2 = a.mul(&a);
        let a3 = a2.mul(&a);
        let b2 = b.mul(b);
        Ok(Coeffs {
            a5: a3.mul(&a2),
            a52: a2.mul(&ra),
            r: a.mul(&ra).mul_i64(8),
            delta: b2.sub(&a.mul(c).mul_i64(4)),
            quartic: b2
                .mul(&b2)
                .neg()
                .add(&a.mul(&b2).mul(c).mul_i64(8))
                .sub(&a2.mul(c).mul(c).mul_i64(16)),
            a,
            b: b.clone(),
            c: c.clone(),
            a2,
            a3,
        })
    }

    /// `32 s a^{5/2} b - b⁴ + 8ab²c - 16a²c²`, the e-free part of the
    /// middle recurrence coefficient.
    fn k0(&self, s: i64) -> Ext {
        self.a52.mul(&self.b).mul_i64(32 * s).add(&self.quartic)
    }

    /// The same plus `64a³e`, with `e` kept symbolic in the x slot.
    fn k_sym(&self, s: i64) -> BiPoly<Ext> {
        BiPoly::new(vec![vec![self.k0(s)], vec![self.a3.mul_i64(64)]])
    }

    /// `d` fixed by the degree condition.
    fn degree_d(&self, n: usize) -> Ext {
        let num = self
            .a52
            .mul_i64(8 * (5 + 2 * n as i64))
            .add(&self.b.mul(&self.b).mul(&self.b))
            .sub(&self.a.mul(&self.b).mul(&self.c).mul_i64(4));
        div(&num.neg(), &self.a2.mul_i64(8))
    }

    /// `P_j` for `j ≡ N (mod 2)` and `j ≤ N + 2`, as polynomials in
    /// `(e, E)`: x slot is `e`, E slot is `E`. Entry `i` holds `P_{s+2i}`.
    fn sequence(&self, n: usize) -> Vec<BiPoly<Ext>> {
        let s = n % 2;
        let mut p: Vec<BiPoly<Ext>> = vec![BiPoly::constant(Ext::one())];
        let mut j = s;
        while j < n + 2 {
            let ji = j as i64;
            let i = (j - s) / 2;
            let lin = BiPoly::new(vec![vec![self.delta.mul_i64(2 * ji + 1), self.r.clone()]]);
            let mut next = lin.mul(&p[i]);
            if i >= 1 {
                let mid = self.k_sym(2 * ji - 1).scale(&ext(ji * (ji - 1)));
                next = next.add(&mid.mul(&p[i - 1]));
            }
            if i >= 2 {
                let f = 1024 * (n as i64 + 4 - ji) * ji * (ji - 1) * (ji - 2) * (ji - 3);
                next = next.add(&p[i - 2].scale(&self.a5.mul_i64(f)));
            }
            p.push(next);
            j += 2;
        }
        p
    }

    /// `(32(2N+3)a^{5/2}b - b⁴ + 8ab²c - 16a²c² + 64a³e) P_N
    ///  + 2048 a⁵ N(N-1) P_{N-2}`.
    fn constraint(&self, seq: &[BiPoly<Ext>], n: usize) -> BiPoly<Ext> {
        let i = n / 2;
        let ni = n as i64;
        let mut out = self.k_sym(2 * ni + 3).mul(&seq[i]);
        if i >= 1 {
            out = out.add(&seq[i - 1].scale(&self.a5.mul_i64(2048 * ni * (ni - 1))));
        }
        out
    }

    /// `(-1)^k P_j / (j! r^k)` with `k = ⌊j/2⌋`.
    fn chi_scale(&self, j: usize) -> Ext {
        let k = (j / 2) as u32;
        let s = div(&Ext::one(), &factorial(j).mul(&self.r.pow(k)));
        if k % 2 == 1 {
            s.neg()
        } else {
            s
        }
    }
}

/// `8(5 + 2N) a^{5/2} + 8a²d - 4abc + b³` with `N = 2m` or `2m + 1`.
pub fn degree_condition_residual(v: &Potential, parity: Parity, m: usize) -> Ext {
    let n = parity.degree(m) as i64;
    let a = v.a_ext();
    let a52 = a.mul(&a).mul(&v.sqrt_a());
    let (b, c, d) = (v.b(), v.c(), v.d());
    a52.mul_i64(8 * (5 + 2 * n))
        .add(&a.mul(&a).mul(d).mul_i64(8))
        .sub(&a.mul(b).mul(c).mul_i64(4))
        .add(&b.mul(b).mul(b))
}

/// The parity and polynomial degree singled out by the degree condition,
/// if it admits a nonnegative integer solution.
pub fn admissible_state(v: &Potential) -> Option<(Parity, usize)> {
    let a = v.a_ext();
    let a52 = a.mul(&a).mul(&v.sqrt_a());
    let (b, c, d) = (v.b(), v.c(), v.d());
    let rest = a
        .mul(&a)
        .mul(d)
        .mul_i64(8)
        .sub(&a.mul(b).mul(c).mul_i64(4))
        .add(&b.mul(b).mul(b));
    // 16 a^{5/2} N = -40 a^{5/2} - rest
    let n = div(&a52.mul_i64(40).add(&rest).neg(), &a52.mul_i64(16));
    let n = n.as_rational()?;
    if !n.is_integer() || n.is_negative() {
        return None;
    }
    let n = n.to_integer().to_usize()?;
    Some((Parity::of(n), n))
}

/// Energy polynomials `P_s, P_{s+2}, …, P_{N+2}` for a fixed `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyPolySequence {
    pub parity: Parity,
    pub m: usize,
    /// Entry `i` is `P_{2i}` (even) or `P_{2i+1}` (odd).
    pub polys: Vec<UniPoly<Ext>>,
}

impl EnergyPolySequence {
    /// `P_j`, or `None` outside the computed range or for the wrong parity.
    pub fn get(&self, j: usize) -> Option<&UniPoly<Ext>> {
        let s = self.parity.offset();
        if j < s || (j - s) % 2 == 1 {
            return None;
        }
        self.polys.get((j - s) / 2)
    }

    /// `P_{N+2}`, whose roots are the candidate energies.
    pub fn terminal(&self) -> &UniPoly<Ext> {
        self.polys.last().expect("sequence is never empty")
    }
}

pub fn energy_polynomials(
    a: &Rational,
    b: &Ext,
    c: &Ext,
    e: &Ext,
    parity: Parity,
    m: usize,
) -> Result<EnergyPolySequence, DecaticError> {
    let k = Coeffs::new(a, b, c)?;
    let seq = k.sequence(parity.degree(m));
    Ok(EnergyPolySequence {
        parity,
        m,
        polys: seq.iter().map(|p| p.eval_x(e)).collect(),
    })
}

/// The constraint at level `m` evaluated at `(e, E)`.
pub fn constraint_residual(
    a: &Rational,
    b: &Ext,
    c: &Ext,
    e: &Number,
    parity: Parity,
    m: usize,
    energy: &Number,
) -> Result<Number, DecaticError> {
    let k = Coeffs::new(a, b, c)?;
    let n = parity.degree(m);
    let cons = k.constraint(&k.sequence(n), n);
    Ok(eval_bi(&cons, e, energy))
}

fn eval_bi(p: &BiPoly<Ext>, e: &Number, energy: &Number) -> Number {
    p.map(|c| Number::Exact(c.clone())).eval_x(e).eval(energy)
}

/// `(E, d, e)` in closed form for the lowest even or odd state.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub energy: Ext,
    pub d: Ext,
    pub e: Ext,
}

fn closed_form(a: &Rational, b: &Ext, c: &Ext, n: usize) -> Result<ClosedForm, DecaticError> {
    let k = Coeffs::new(a, b, c)?;
    let ni = n as i64;
    let a32 = div(&k.r, &ext(8));
    Ok(ClosedForm {
        energy: div(&k.delta.neg().mul_i64(2 * ni + 1), &a32.mul_i64(8)),
        d: k.degree_d(n),
        e: div(&k.k0(2 * ni + 3).neg(), &k.a3.mul_i64(64)),
    })
}

/// Ground state: `χ = 1`.
pub fn closed_form_ground(a: &Rational, b: &Ext, c: &Ext) -> Result<ClosedForm, DecaticError> {
    closed_form(a, b, c, 0)
}

/// First excited state: `χ = x`.
pub fn closed_form_first(a: &Rational, b: &Ext, c: &Ext) -> Result<ClosedForm, DecaticError> {
    closed_form(a, b, c, 1)
}

/// One exact or high-precision QES eigenpair.
#[derive(Clone, Debug, PartialEq)]
pub struct QesSolution {
    pub parity: Parity,
    pub degree: usize,
    pub a: Rational,
    pub b: Ext,
    pub c: Ext,
    pub d: Ext,
    pub e: Number,
    pub energy: Number,
    pub chi: UniPoly<Number>,
    pub exponent: AsymptoticExponent,
    /// Significant digits used when printing approximate values.
    pub digits: u32,
}

impl QesSolution {
    pub fn is_exact(&self) -> bool {
        self.e.is_exact_value() && self.energy.is_exact_value()
    }

    /// The potential, when `e` is exact.
    pub fn potential(&self) -> Option<Potential> {
        let e = self.e.as_exact()?.clone();
        Potential::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone(), e).ok()
    }
}

impl Serialize for QesSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let show = |n: &Number| n.display(self.digits);
        let mut st = s.serialize_struct("QesSolution", 8)?;
        st.serialize_field("state", &self.degree)?;
        st.serialize_field("parity", &self.parity)?;
        st.serialize_field("exact", &self.is_exact())?;
        st.serialize_field("E", &show(&self.energy))?;
        st.serialize_field(
            "potential",
            &[
                Ext::rational(self.a.clone()).to_string(),
                self.b.to_string(),
                self.c.to_string(),
                self.d.to_string(),
                show(&self.e),
            ],
        )?;
        st.serialize_field("d", &self.d.to_string())?;
        st.serialize_field("e", &show(&self.e))?;
        st.serialize_field(
            "chi_coefficients",
            &(0..=self.degree).map(|k| show(&self.chi.coeff(k))).collect::<Vec<_>>(),
        )?;
        st.serialize_field(
            "exponent",
            &ExponentStrings {
                c6: self.exponent.c6.to_string(),
                c4: self.exponent.c4.to_string(),
                c2: self.exponent.c2.to_string(),
            },
        )?;
        st.end()
    }
}

#[derive(Serialize)]
struct ExponentStrings {
    c6: String,
    c4: String,
    c2: String,
}

/// Sylvester resultant in the x slot (`e`), leaving a polynomial in E.
fn resultant_e(f: &BiPoly<Ext>, g: &BiPoly<Ext>) -> UniPoly<Ext> {
    let (m, n) = (f.deg_x().unwrap_or(0), g.deg_x().unwrap_or(0));
    let size = m + n;
    if size == 0 {
        return UniPoly::constant(Var::E, Ext::one());
    }
    let zero = UniPoly::zero_in(Var::E);
    let mut mat = Matrix::from_rows(vec![vec![zero; size]; size]);
    for r in 0..n {
        for i in 0..=m {
            mat.set(r, r + (m - i), f.x_row(i));
        }
    }
    for r in 0..m {
        for i in 0..=n {
            mat.set(n + r, r + (n - i), g.x_row(i));
        }
    }
    mat.determinant().with_var(Var::E)
}

/// Roots `e` of `p` that also annihilate `q`, both polynomials in `e`.
fn common_roots_exact(p: &UniPoly<Ext>, q: &UniPoly<Ext>, digits: u32) -> Result<Vec<Number>, DecaticError> {
    let g = p.gcd(q);
    if g.is_zero() {
        return Err(DecaticError::Degenerate);
    }
    if g.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let b = root_bound(&g);
    Ok(real_roots(&g, &-b.clone(), &b, digits)?
        .into_iter()
        .map(|r| match r.exact {
            Some(x) => Number::Exact(x),
            None => Number::Approx(r.value),
        })
        .collect())
}

fn common_roots_approx(
    p: &UniPoly<BigDecimal>,
    q: &UniPoly<BigDecimal>,
    digits: u32,
    tol_digits: u32,
) -> Result<Vec<Number>, DecaticError> {
    let deg = |u: &UniPoly<BigDecimal>| u.degree().filter(|_| !u.is_zero());
    let (main, other) = match (deg(p), deg(q)) {
        (Some(dp), Some(dq)) if dq > 0 && (dp == 0 || dq < dp) => (q, p),
        (Some(dp), _) if dp > 0 => (p, q),
        (None, Some(dq)) if dq > 0 => (q, p),
        _ => return Ok(Vec::new()),
    };
    let b = root_bound(main);
    let tol = BigDecimal::from_rational(
        &Rational::new(BigInt::from(1), BigInt::from(10).pow(tol_digits)),
        digits,
    );
    let mut out = Vec::new();
    for r in real_roots(main, &-b.clone(), &b, digits)? {
        let x = r.value.with_digits(digits);
        let scale = other
            .coeffs()
            .iter()
            .rev()
            .fold(BigDecimal::zero(), |acc, c| acc.mul(&x.abs()).add(&c.abs()));
        let val = other.eval(&x).abs();
        if other.is_zero() || val <= tol.mul(&scale.add(&BigDecimal::one())) {
            out.push(Number::Approx(x));
        }
    }
    Ok(out)
}

/// All real QES eigenpairs with a degree-`degree` polynomial factor. `d` is
/// fixed by the degree condition; `(e, E)` solve the terminal equation and
/// the constraint jointly. Results are sorted by energy.
pub fn solve_state(
    a: &Rational,
    b: &Ext,
    c: &Ext,
    parity: Parity,
    degree: usize,
    digits: u32,
) -> Result<Vec<QesSolution>, DecaticError> {
    if Parity::of(degree) != parity {
        return Err(DecaticError::ParityMismatch { parity, degree });
    }
    let k = Coeffs::new(a, b, c)?;
    let seq = k.sequence(degree);
    let terminal = seq.last().expect("nonempty").clone();
    let cons = k.constraint(&seq, degree);
    let res = resultant_e(&terminal, &cons);
    if res.is_zero() {
        return Err(DecaticError::Degenerate);
    }
    let work = digits + 20;
    let bound = root_bound(&res);
    let mut pairs: Vec<(Number, Number)> = Vec::new();
    for root in real_roots(&res, &-bound.clone(), &bound, work)? {
        match &root.exact {
            Some(en) => {
                let p = terminal.eval_e(en);
                let q = cons.eval_e(en);
                for e in common_roots_exact(&p, &q, work)? {
                    pairs.push((Number::Exact(en.clone()), e));
                }
            }
            None => {
                let en = root.value.with_digits(work);
                let to_dec = |u: &BiPoly<Ext>| u.map(|c| c.to_decimal(work)).eval_e(&en);
                for e in common_roots_approx(&to_dec(&terminal), &to_dec(&cons), work, digits)? {
                    pairs.push((Number::Approx(en.clone()), e));
                }
            }
        }
    }
    if pairs.is_empty() {
        return Err(DecaticError::NoRealSolution);
    }
    pairs.sort_by(|x, y| x.0.cmp_value(&y.0).then(x.1.cmp_value(&y.1)));
    let exponent = build_exponent(&Potential::new(
        a.clone(),
        b.clone(),
        c.clone(),
        Ext::zero(),
        Ext::zero(),
    )?);
    let s = degree % 2;
    Ok(pairs
        .into_iter()
        .map(|(energy, e)| {
            let mut coeffs = vec![Number::Exact(Ext::zero()); degree + 1];
            for (i, pj) in seq.iter().enumerate() {
                let j = s + 2 * i;
                if j > degree {
                    break;
                }
                let scale = Number::Exact(k.chi_scale(j));
                coeffs[j] = eval_bi(pj, &e, &energy).mul(&scale);
            }
            QesSolution {
                parity,
                degree,
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                d: k.degree_d(degree),
                e,
                energy,
                chi: UniPoly::new(Var::X, coeffs),
                exponent: exponent.clone(),
                digits,
            }
        })
        .collect())
}

/// `ψ = χ e^{-φ}`, un-normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Wavefunction {
    pub chi: UniPoly<Number>,
    pub exponent: AsymptoticExponent,
}

impl Wavefunction {
    pub fn eval(&self, x: &BigDecimal, digits: u32) -> BigDecimal {
        let w = digits + 10;
        let xw = x.with_digits(w);
        let chi = self.chi.map(|c| c.to_decimal(w)).eval(&xw);
        chi.mul(&self.exponent.weight(&xw, w)).with_digits(digits)
    }
}

pub fn wavefunction(sol: &QesSolution) -> Wavefunction {
    Wavefunction {
        chi: sol.chi.clone(),
        exponent: sol.exponent.clone(),
    }
}

/// What is left of `-ψ'' + (V - E)ψ` after dividing by `e^{-φ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub residual: UniPoly<Number>,
    /// True only when every coefficient is an exact zero.
    pub exact_zero: bool,
    pub max_abs: BigDecimal,
}

fn residual(
    exponent: &AsymptoticExponent,
    v: &UniPoly<Number>,
    energy: &Number,
    chi: &UniPoly<Number>,
) -> ResidualReport {
    let lift = |p: &UniPoly<Ext>| p.map(|c| Number::Exact(c.clone()));
    let phi1 = lift(&exponent.polynomial().derivative());
    let phi2 = phi1.derivative();
    let chi = chi.clone().with_var(Var::X);
    let c1 = chi.derivative();
    let c2 = c1.derivative();
    let pot = phi2
        .sub(&phi1.mul(&phi1))
        .add(v)
        .sub(&UniPoly::constant(Var::X, energy.clone()));
    let r = c2
        .neg()
        .add(&phi1.mul(&c1).mul_i64(2))
        .add(&pot.mul(&chi));
    let max_abs = r
        .coeffs()
        .iter()
        .map(|c| c.to_decimal(40).abs())
        .max()
        .unwrap_or_else(BigDecimal::zero);
    let exact_zero = r.coeffs().iter().all(|c| c.is_exact_value() && c.is_zero());
    ResidualReport {
        residual: r,
        exact_zero,
        max_abs,
    }
}

/// Residual of `ψ = χ e^{-φ}` in the Schrödinger equation for `v` at
/// energy `E`.
pub fn verify(v: &Potential, energy: &Number, chi: &UniPoly<Number>) -> ResidualReport {
    let vp = v.polynomial().map(|c| Number::Exact(c.clone()));
    residual(&build_exponent(v), &vp, energy, chi)
}

/// [`verify`] for a solution whose `e` may be approximate.
pub fn verify_solution(sol: &QesSolution) -> ResidualReport {
    let z = Number::Exact(Ext::zero());
    let x = |c: &Ext| Number::Exact(c.clone());
    let vp = UniPoly::new(
        Var::X,
        vec![
            z.clone(),
            z.clone(),
            sol.e.clone(),
            z.clone(),
            x(&sol.d),
            z.clone(),
            x(&sol.c),
            z.clone(),
            x(&sol.b),
            z,
            Number::Exact(Ext::rational(sol.a.clone())),
        ],
    );
    residual(&sol.exponent, &vp, &sol.energy, &sol.chi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A row of the ground-state (table 1) or first-excited-state (table 2)
/// families, instantiated at `μ, k > 0`. `sign` picks `±` in rows 1 and 2.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRowSpec {
    pub table: u8,
    pub row: usize,
    pub mu: Rational,
    pub k: Rational,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub spec: TableRowSpec,
    pub potential: Potential,
    pub energy: Ext,
    /// Degree of χ: 0 for table 1, 1 for table 2.
    pub degree: usize,
}

pub const TABLE_ROWS: usize = 8;

pub fn table_row(spec: &TableRowSpec) -> Result<TableRow, DecaticError> {
    if !spec.mu.is_positive() || !spec.k.is_positive() {
        return Err(DecaticError::NonPositive(format!("mu = {}, k = {}", spec.mu, spec.k)));
    }
    let unknown = DecaticError::UnknownRow {
        table: spec.table,
        row: spec.row,
    };
    let mu = Ext::rational(spec.mu.clone());
    let k = Ext::rational(spec.k.clone());
    let km = k.mul(&mu);
    let s = Ext::sqrt_of(&spec.mu).expect("μ > 0");
    let t = Ext::sqrt_of(km.as_rational().expect("rational")).expect("kμ > 0");
    let sg = spec.sign.value();
    let q = |n: i64, d: i64| Ext::rational(Rational::new(n.into(), d.into()));
    let k2 = k.mul(&k);
    let k3 = k2.mul(&k);
    let four_k_1 = k.mul_i64(4).sub(&ext(1));
    let one_4k_sq = four_k_1.mul(&four_k_1);
    let k2m4 = k2.sub(&ext(4));

    // (E, a, b, c, d, e)
    let row: [Ext; 6] = match (spec.table, spec.row) {
        (1, 1) => [
            s.mul(&q(3, 8)),
            mu.clone(),
            mu.mul_i64(sg),
            mu.clone(),
            mu.mul_i64(3 * sg).sub(&s.mul_i64(40)).mul(&q(1, 8)),
            mu.mul_i64(3).sub(&s.mul_i64(32 * sg)).mul(&q(3, 64)),
        ],
        (1, 2) => [
            s.mul(&q(-5, 8)),
            mu.clone(),
            mu.mul_i64(sg),
            mu.neg(),
            mu.mul_i64(5 * sg).add(&s.mul_i64(40)).mul(&q(-1, 8)),
            mu.mul_i64(25).sub(&s.mul_i64(96 * sg)).mul(&q(1, 64)),
        ],
        (1, 3) => [
            div(&four_k_1.mul(&t), &k2.mul_i64(8)),
            km.clone(),
            mu.clone(),
            mu.clone(),
            div(&k2.mul(&t).mul_i64(40).sub(&four_k_1.mul(&mu)).neg(), &k2.mul_i64(8)),
            div(&one_4k_sq.mul(&mu).sub(&k2.mul(&t).mul_i64(96)), &k3.mul_i64(64)),
        ],
        (1, 4) => [
            k2m4.mul(&s).mul(&q(-1, 8)),
            mu.clone(),
            km.clone(),
            mu.clone(),
            k.mul(&k2m4).mul(&mu).mul(&q(-1, 8)).sub(&s.mul_i64(5)),
            k2m4.mul(&k2m4).mul(&mu).mul(&q(1, 64)).sub(&k.mul(&s).mul(&q(3, 2))),
        ],
        (1, 5) => [
            four_k_1.mul(&s).mul(&q(1, 8)),
            mu.clone(),
            mu.clone(),
            km.clone(),
            four_k_1.mul(&mu).mul(&q(1, 8)).sub(&s.mul_i64(5)),
            one_4k_sq.mul(&mu).mul(&q(1, 64)).sub(&s.mul(&q(3, 2))),
        ],
        (1, 6) => [
            t.add(&k.mul_i64(5)),
            km.clone(),
            mu.clone(),
            div(&mu, &k.mul_i64(4)).add(&k.mul_i64(2).mul(&mu.add(&t.mul_i64(5)))),
            mu.clone(),
            k2.mul_i64(25)
                .sub(&div(&t, &k).mul(&q(3, 2)))
                .add(&k.mul(&mu.add(&t.mul_i64(10)))),
        ],
        (1, 7) => [
            div(&s.add(&ext(5)), &k),
            mu.clone(),
            km.clone(),
            div(&s.mul(&ext(40).add(&s.mul(&k3.add(&ext(8))))), &k.mul_i64(4)),
            mu.clone(),
            div(
                &mu.mul_i64(2).add(&ext(20).sub(&k3.mul_i64(3)).mul(&s)).add(&ext(50)),
                &k2.mul_i64(2),
            ),
        ],
        (1, 8) => [
            ext(5).add(&k.mul(&s)),
            mu.clone(),
            mu.clone(),
            s.mul(&ext(40).add(&s.mul(&k.mul_i64(8).add(&ext(1))))).mul(&q(1, 4)),
            km.clone(),
            k2.mul(&mu)
                .add(&k.mul_i64(10).sub(&q(3, 2)).mul(&s))
                .add(&ext(25)),
        ],
        (2, 1) => [
            s.mul(&q(9, 8)),
            mu.clone(),
            mu.mul_i64(sg),
            mu.clone(),
            mu.mul_i64(3 * sg).sub(&s.mul_i64(56)).mul(&q(1, 8)),
            mu.mul_i64(9).sub(&s.mul_i64(160 * sg)).mul(&q(1, 64)),
        ],
        (2, 2) => [
            s.mul(&q(-15, 8)),
            mu.clone(),
            mu.mul_i64(sg),
            mu.neg(),
            mu.mul_i64(-5 * sg).sub(&s.mul_i64(56)).mul(&q(1, 8)),
            mu.mul_i64(5).sub(&s.mul_i64(32 * sg)).mul(&q(5, 64)),
        ],
        (2, 3) => [
            div(&four_k_1.mul(&t).mul_i64(3), &k2.mul_i64(8)),
            km.clone(),
            mu.clone(),
            mu.clone(),
            div(&k2.mul(&t).mul_i64(56).sub(&four_k_1.mul(&mu)).neg(), &k2.mul_i64(8)),
            div(&one_4k_sq.mul(&mu).sub(&k2.mul(&t).mul_i64(160)), &k3.mul_i64(64)),
        ],
        (2, 4) => [
            k2m4.mul(&s).mul(&q(-3, 8)),
            mu.clone(),
            km.clone(),
            mu.clone(),
            k.mul(&k2m4).mul(&mu).mul(&q(-1, 8)).sub(&s.mul_i64(7)),
            k2m4.mul(&k2m4).mul(&mu).mul(&q(1, 64)).sub(&k.mul(&s).mul(&q(5, 2))),
        ],
        (2, 5) => [
            four_k_1.mul(&s).mul(&q(3, 8)),
            mu.clone(),
            mu.clone(),
            km.clone(),
            mu.mul(&q(-1, 8)).add(&k.mul(&mu).mul(&q(1, 2))).sub(&s.mul_i64(7)),
            mu.mul(&q(1, 64))
                .sub(&k.mul(&mu).mul(&q(1, 8)))
                .add(&k2.mul(&mu).mul(&q(1, 4)))
                .sub(&s.mul(&q(5, 2))),
        ],
        (2, 6) => {
            // (kμ)^{5/2} = (kμ)² t
            let km2 = km.mul(&km);
            let mu2 = mu.mul(&mu);
            let c_num = km2.mul(&t).mul_i64(56).add(&mu2.mul(&mu).mul(&k2.mul_i64(8).add(&ext(1))));
            [
                t.mul_i64(3).add(&k.mul_i64(21)),
                km.clone(),
                mu.clone(),
                div(&c_num, &k.mul(&mu2).mul_i64(4)),
                mu.clone(),
                div(
                    &t.mul_i64(-5)
                        .add(&k3.mul_i64(98))
                        .add(&k2.mul(&t).mul_i64(28))
                        .add(&k2.mul(&mu).mul_i64(2)),
                    &k.mul_i64(2),
                ),
            ]
        }
        (2, 7) => [
            div(&s.add(&ext(7)).mul_i64(3), &k),
            mu.clone(),
            km.clone(),
            div(&s.mul(&ext(56).add(&s.mul(&k3.add(&ext(8))))), &k.mul_i64(4)),
            mu.clone(),
            div(
                &ext(98).add(&ext(28).sub(&k3.mul_i64(5)).mul(&s)).add(&mu.mul_i64(2)),
                &k2.mul_i64(2),
            ),
        ],
        (2, 8) => [
            ext(7).add(&k.mul(&s)).mul_i64(3),
            mu.clone(),
            mu.clone(),
            s.mul_i64(56).add(&mu.mul(&k.mul_i64(8).add(&ext(1)))).mul(&q(1, 4)),
            km.clone(),
            k2.mul(&mu)
                .add(&k.mul(&s).mul_i64(14))
                .sub(&s.mul(&q(5, 2)))
                .add(&ext(49)),
        ],
        _ => return Err(unknown),
    };
    let [energy, a, b, c, d, e] = row;
    let a = a.as_rational().expect("a is rational").clone();
    Ok(TableRow {
        spec: spec.clone(),
        potential: Potential::new(a, b, c, d, e)?,
        energy,
        degree: spec.table as usize - 1,
    })
}

impl TableRow {
    /// `χ = 1` or `χ = x`.
    pub fn chi(&self) -> UniPoly<Number> {
        UniPoly::monomial(Var::X, Number::Exact(Ext::one()), self.degree)
    }
}

/// Orders solutions by energy, for callers merging several solves.
pub fn by_energy(x: &QesSolution, y: &QesSolution) -> Ordering {
    x.energy.cmp_value(&y.energy)
}
