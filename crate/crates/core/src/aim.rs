//! Asymptotic iteration method for `χ'' = λ₀ χ' + s₀ χ`.
//!
//! The sequences
//!
//! ```text
//! λₙ = λₙ₋₁' + sₙ₋₁ + λ₀ λₙ₋₁,    sₙ = sₙ₋₁' + s₀ λₙ₋₁
//! ```
//!
//! are carried as polynomials in `(x, E)`. Energies are the roots of
//! `δₙ(x₀; E) = sₙ λₙ₋₁ - sₙ₋₁ λₙ` as `n` grows.

use num_bigint::BigInt;
use serde::Serialize;

use crate::asymptotics::{reduce, Potential};
use crate::numerics::{
    real_roots, BiPoly, BigDecimal, ExtendedScalar, NumericsError, OrderedScalar, Rational,
    Scalar, UniPoly, Var,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no root of the termination condition lies in the energy window")]
    EmptyWindow,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    FullBivariate,
    /// Powers of `(x - x0)` beyond what the remaining iterations can reach
    /// are dropped.
    TaylorTruncated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AimConfig {
    pub x0: Rational,
    pub max_iters: usize,
    /// Working precision of every coefficient, in decimal digits.
    pub precision: u32,
    pub energy_window: (BigDecimal, BigDecimal),
    pub convergence_tol: BigDecimal,
    pub representation: Representation,
}

impl Default for AimConfig {
    fn default() -> Self {
        AimConfig {
            x0: Rational::from_integer(BigInt::from(0)),
            max_iters: 120,
            precision: 60,
            energy_window: (BigDecimal::from_i64(-50), BigDecimal::from_i64(200)),
            convergence_tol: BigDecimal::parse("1e-10", 60).expect("literal"),
            representation: Representation::TaylorTruncated,
        }
    }
}

impl AimConfig {
    pub fn validate(&self) -> Result<(), AimError> {
        if self.max_iters < 1 {
            return Err(AimError::Config("max_iters must be at least 1".into()));
        }
        if self.precision < 30 {
            return Err(AimError::Config("precision must be at least 30 digits".into()));
        }
        if self.energy_window.0 >= self.energy_window.1 {
            return Err(AimError::Config("energy window is empty".into()));
        }
        Ok(())
    }
}

/// `(λₙ, sₙ)` and their predecessors. The x variable is `x - origin`.
#[derive(Clone, Debug, PartialEq)]
pub struct AimState {
    pub n: usize,
    pub lambda: BiPoly<BigDecimal>,
    pub s: BiPoly<BigDecimal>,
    prev: Option<(BiPoly<BigDecimal>, BiPoly<BigDecimal>)>,
    lambda0: BiPoly<BigDecimal>,
    s0: BiPoly<BigDecimal>,
    origin: BigDecimal,
    /// Number of x powers kept after `n` steps is `horizon - n + 1`.
    horizon: Option<usize>,
}

fn to_bi(p: &BiPoly<ExtendedScalar>, digits: u32) -> BiPoly<BigDecimal> {
    p.map(|c| c.to_decimal(digits))
}

/// Full bivariate start at `n = 0`.
pub fn aim_init(v: &Potential, digits: u32) -> AimState {
    let r = reduce(v);
    let lambda0 = to_bi(&BiPoly::from_x(&r.lambda0), digits);
    let s0 = to_bi(&r.s0, digits);
    AimState {
        n: 0,
        lambda: lambda0.clone(),
        s: s0.clone(),
        prev: None,
        lambda0,
        s0,
        origin: BigDecimal::zero(),
        horizon: None,
    }
}

/// Start expanded around `x0`, keeping only the powers of `x - x0` that can
/// still reach the constant term within `max_iters` steps.
pub fn aim_init_truncated(v: &Potential, digits: u32, x0: &BigDecimal, max_iters: usize) -> AimState {
    let mut st = aim_init(v, digits);
    st.lambda0 = st.lambda0.shift_x(x0);
    st.s0 = st.s0.shift_x(x0);
    st.lambda = st.lambda0.truncate_x(max_iters + 1);
    st.s = st.s0.truncate_x(max_iters + 1);
    st.origin = x0.clone();
    st.horizon = Some(max_iters);
    st
}

pub fn aim_step(st: &AimState) -> AimState {
    let n = st.n + 1;
    let mut lambda = st
        .lambda
        .derivative_x()
        .add(&st.s)
        .add(&st.lambda0.mul(&st.lambda));
    let mut s = st.s.derivative_x().add(&st.s0.mul(&st.lambda));
    if let Some(h) = st.horizon {
        let keep = h.saturating_sub(n) + 1;
        lambda = lambda.truncate_x(keep);
        s = s.truncate_x(keep);
    }
    AimState {
        n,
        lambda,
        s,
        prev: Some((st.lambda.clone(), st.s.clone())),
        lambda0: st.lambda0.clone(),
        s0: st.s0.clone(),
        origin: st.origin.clone(),
        horizon: st.horizon,
    }
}

/// `δₙ(x0; E) = sₙ λₙ₋₁ - sₙ₋₁ λₙ` as a polynomial in E. `None` before the
/// first step.
pub fn aim_delta(st: &AimState, x0: &BigDecimal) -> Option<UniPoly<BigDecimal>> {
    let (pl, ps) = st.prev.as_ref()?;
    let t = x0.sub(&st.origin);
    let at = |p: &BiPoly<BigDecimal>| p.eval_x(&t);
    let d = at(&st.s)
        .mul(&at(pl))
        .sub(&at(ps).mul(&at(&st.lambda)));
    Some(d.with_var(Var::E))
}

/// Root estimates for one eigenvalue across iterations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub estimates: Vec<(usize, BigDecimal)>,
    pub converged: bool,
    /// Leading digits on which the last three estimates agree.
    pub digits_agreed: u32,
}

impl ConvergenceTrace {
    fn last(&self) -> &BigDecimal {
        &self.estimates.last().expect("nonempty").1
    }

    /// Largest change over the last three estimates.
    fn last_step(&self) -> Option<BigDecimal> {
        let k = self.estimates.len();
        (k >= 3).then(|| {
            let e = |i: usize| &self.estimates[k - i].1;
            e(1).sub(e(2)).abs().max(e(2).sub(e(3)).abs())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AimEigenvalue {
    pub value: BigDecimal,
    pub trace: ConvergenceTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AimResult {
    pub eigenvalues: Vec<AimEigenvalue>,
    pub iterations_used: usize,
    pub all_converged: bool,
}

fn digits_agreed(value: &BigDecimal, step: &BigDecimal) -> u32 {
    if step.is_zero() {
        return value.digits().unwrap_or(0);
    }
    let rel = step.checked_div(&value.abs().max(BigDecimal::one())).expect("positive");
    let e = rel.to_f64().log10();
    if e.is_finite() && e < 0.0 {
        (-e).floor() as u32
    } else {
        0
    }
}

/// Pairs each new root with the nearest live trace, closest pairs first;
/// ties go to the smaller energy. Unpaired traces end, unpaired roots open
/// new traces.
fn match_roots(traces: &mut Vec<ConvergenceTrace>, roots: Vec<BigDecimal>, n: usize, tol: &BigDecimal) {
    let mut pairs: Vec<(BigDecimal, usize, usize)> = Vec::new();
    for (ti, t) in traces.iter().enumerate() {
        for (ri, r) in roots.iter().enumerate() {
            pairs.push((r.sub(t.last()).abs(), ri, ti));
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(roots[a.1].cmp(&roots[b.1])));
    let mut root_used = vec![false; roots.len()];
    let mut trace_used = vec![false; traces.len()];
    let mut next: Vec<ConvergenceTrace> = Vec::new();
    for (_, ri, ti) in pairs {
        if root_used[ri] || trace_used[ti] {
            continue;
        }
        root_used[ri] = true;
        trace_used[ti] = true;
        let mut t = traces[ti].clone();
        t.estimates.push((n, roots[ri].clone()));
        next.push(t);
    }
    for (ri, r) in roots.into_iter().enumerate() {
        if !root_used[ri] {
            next.push(ConvergenceTrace {
                estimates: vec![(n, r)],
                converged: false,
                digits_agreed: 0,
            });
        }
    }
    for t in next.iter_mut() {
        if let Some(step) = t.last_step() {
            t.digits_agreed = digits_agreed(t.last(), &step);
            t.converged = &step < tol;
        }
    }
    next.sort_by(|a, b| a.last().cmp(b.last()));
    *traces = next;
}

/// The lowest `count` converged eigenvalues in the window, ascending.
/// Iteration stops once `count` traces have converged or `max_iters` is
/// reached; in the latter case the result is padded with the longest-lived
/// unconverged traces, flagged as such.
pub fn aim_eigenvalues(v: &Potential, cfg: &AimConfig, count: usize) -> Result<AimResult, AimError> {
    cfg.validate()?;
    if count == 0 {
        return Err(AimError::Config("count must be at least 1".into()));
    }
    let digits = cfg.precision;
    let x0 = BigDecimal::from_rational(&cfg.x0, digits);
    let mut st = match cfg.representation {
        Representation::FullBivariate => aim_init(v, digits),
        Representation::TaylorTruncated => aim_init_truncated(v, digits, &x0, cfg.max_iters),
    };
    let lo = cfg.energy_window.0.to_rational();
    let hi = cfg.energy_window.1.to_rational();
    let root_digits = (digits / 2).max(20);
    let mut traces: Vec<ConvergenceTrace> = Vec::new();
    let mut used = 0;
    for _ in 0..cfg.max_iters {
        st = aim_step(&st);
        used = st.n;
        let delta = aim_delta(&st, &x0).expect("after a step");
        if delta.is_zero() {
            continue;
        }
        let roots: Vec<BigDecimal> = real_roots(&delta, &lo, &hi, root_digits)?
            .into_iter()
            .map(|r| r.value)
            .collect();
        match_roots(&mut traces, roots, st.n, &cfg.convergence_tol);
        if traces.iter().filter(|t| t.converged).count() >= count {
            break;
        }
    }
    // Converged traces first, then the longest-lived unconverged ones.
    let mut picked: Vec<ConvergenceTrace> = traces.iter().filter(|t| t.converged).cloned().collect();
    let mut rest: Vec<ConvergenceTrace> = traces
        .into_iter()
        .filter(|t| !t.converged && t.estimates.len() >= 3)
        .collect();
    rest.sort_by_key(|t| std::cmp::Reverse(t.estimates.len()));
    picked.extend(rest);
    picked.truncate(count);
    picked.sort_by(|a, b| a.last().cmp(b.last()));
    if picked.is_empty() {
        return Err(AimError::EmptyWindow);
    }
    let eigenvalues: Vec<AimEigenvalue> = picked
        .into_iter()
        .map(|t| AimEigenvalue {
            value: t.last().clone(),
            trace: t,
        })
        .collect();
    let all_converged = eigenvalues.len() == count && eigenvalues.iter().all(|e| e.trace.converged);
    Ok(AimResult {
        eigenvalues,
        iterations_used: used,
        all_converged,
    })
}

/// Outcome of running the iteration at a fixed energy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QesCertificate {
    pub terminated: bool,
    /// First `n` with `δₙ ≡ 0`.
    pub witness: Option<usize>,
}

fn fixed_energy_deltas<T: Scalar>(
    lambda0: &UniPoly<T>,
    s0: &UniPoly<T>,
    depth: usize,
    mut vanishes: impl FnMut(&UniPoly<T>) -> bool,
) -> QesCertificate {
    let (mut l, mut s) = (lambda0.clone(), s0.clone());
    for n in 1..=depth {
        let ln = l.derivative().add(&s).add(&lambda0.mul(&l));
        let sn = s.derivative().add(&s0.mul(&l));
        let delta = sn.mul(&l).sub(&s.mul(&ln));
        if vanishes(&delta) {
            return QesCertificate {
                terminated: true,
                witness: Some(n),
            };
        }
        l = ln;
        s = sn;
    }
    QesCertificate {
        terminated: false,
        witness: None,
    }
}

/// Exact check that `δₙ(x; E)` vanishes identically for some `n ≤ depth`.
pub fn qes_certificate(v: &Potential, energy: &ExtendedScalar, depth: usize) -> QesCertificate {
    let r = reduce(v);
    fixed_energy_deltas(&r.lambda0, &r.s0_at(energy), depth, |d| d.is_zero())
}

/// [`qes_certificate`] for an approximate energy: `δₙ` counts as zero when
/// every coefficient is below `threshold` relative to the largest
/// coefficient of the two products it is formed from.
pub fn qes_certificate_numeric(
    v: &Potential,
    energy: &BigDecimal,
    depth: usize,
    digits: u32,
    threshold: &BigDecimal,
) -> QesCertificate {
    let r = reduce(v);
    let lambda0 = r.lambda0.map(|c| c.to_decimal(digits));
    let s0 = to_bi(&r.s0, digits).eval_e(&energy.with_digits(digits));
    let scale = |p: &UniPoly<BigDecimal>| {
        p.coeffs()
            .iter()
            .map(BigDecimal::abs)
            .max()
            .unwrap_or_else(BigDecimal::zero)
    };
    let (mut l, mut s) = (lambda0.clone(), s0.clone());
    for n in 1..=depth {
        let ln = l.derivative().add(&s).add(&lambda0.mul(&l));
        let sn = s.derivative().add(&s0.mul(&l));
        let a = sn.mul(&l);
        let b = s.mul(&ln);
        let bound = scale(&a).max(scale(&b)).max(BigDecimal::one()).mul(threshold);
        if scale(&a.sub(&b)) <= bound {
            return QesCertificate {
                terminated: true,
                witness: Some(n),
            };
        }
        l = ln;
        s = sn;
    }
    QesCertificate {
        terminated: false,
        witness: None,
    }
}

/// Count of correct significant digits of `x` against `reference`.
pub fn matching_digits(x: &BigDecimal, reference: &BigDecimal) -> u32 {
    let diff = x.sub(reference).abs();
    if diff.is_zero() {
        return reference.digits().unwrap_or(u32::MAX);
    }
    let rel = diff.checked_div(&reference.abs()).expect("nonzero reference");
    let e = rel.to_f64().log10();
    if e.is_finite() && e < 0.0 {
        (-e).floor() as u32
    } else {
        0
    }
}
