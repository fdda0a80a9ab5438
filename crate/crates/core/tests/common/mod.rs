#![allow(dead_code)]

use qes_core::numerics::rational::{int, rat};
use qes_core::numerics::{
    exact_nullspace, BigDecimal, ExtendedScalar as Ext, Matrix, Number, Rational,
    Scalar,
};
use qes_core::polyode::OdeCoefficients;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Ext {
    Ext::rational(int(rng.gen_range(lo..=hi)))
}

pub fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> Ext {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return Ext::rational(int(v));
        }
    }
}

pub fn small_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn positive_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(1..=num), rng.gen_range(1..=den))
}

/// Coefficient of `x^p` in `Σ c[j] x^{deg-j}` (the descending layout of the
/// ODE coefficient arrays).
fn desc(c: &[Ext], deg: usize, p: usize) -> Ext {
    if p > deg {
        Ext::zero()
    } else {
        c[deg - p].clone()
    }
}

/// A random nondegenerate ODE with `y` (degree `n`, `c_n ≠ 0`) as a solution.
/// `a6` is drawn at random; `(a5, tau4)` come from the nullspace of the
/// linear conditions that `y` imposes on them.
pub fn planted_instance(rng: &mut ChaCha8Rng, n: usize) -> (OdeCoefficients, Vec<Ext>) {
    loop {
        let mut y: Vec<Ext> = (0..n).map(|_| small_int(rng, -4, 4)).collect();
        y.push(nonzero_int(rng, 4));
        let mut a6: Vec<Ext> = (0..7).map(|_| small_int(rng, -3, 3)).collect();
        a6[0] = nonzero_int(rng, 3);
        let y1: Vec<Ext> = (1..=n).map(|k| y[k].mul_i64(k as i64)).collect();
        let y2: Vec<Ext> = (2..=n).map(|k| y[k].mul_i64((k * (k - 1)) as i64)).collect();
        // unknowns: a5[0..6], tau4[0..5], t (weight of the a6 y'' term)
        let rows: Vec<Vec<Ext>> = (0..=n + 4)
            .map(|p| {
                let mut row = Vec::with_capacity(12);
                for j in 0..6 {
                    // a5[j] x^{5-j} * y1[k] x^k contributes at p = 5 - j + k
                    let k = (p + j) as i64 - 5;
                    row.push(if k >= 0 && (k as usize) < y1.len() { y1[k as usize].clone() } else { Ext::zero() });
                }
                for j in 0..5 {
                    let k = (p + j) as i64 - 4;
                    row.push(if k >= 0 && (k as usize) <= n { y[k as usize].neg() } else { Ext::zero() });
                }
                let mut t = Ext::zero();
                for (k, c) in y2.iter().enumerate() {
                    if p >= k {
                        t = t.add(&desc(&a6, 6, p - k).mul(c));
                    }
                }
                row.push(t);
                row
            })
            .collect();
        let basis = exact_nullspace(&Matrix::from_rows(rows));
        let mut v = vec![Ext::zero(); 12];
        for b in &basis {
            let w = small_int(rng, -3, 3);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = vi.add(&bi.mul(&w));
            }
        }
        if v[11].is_zero() {
            continue;
        }
        let t = v[11].clone();
        let v: Vec<Ext> = v.iter().map(|x| x.checked_div(&t).unwrap()).collect();
        let ode = OdeCoefficients::from_vecs(a6, v[0..6].to_vec(), v[6..11].to_vec());
        if let Ok(ode) = ode {
            assert!(ode.residual(&qes_core::numerics::UniPoly::new(qes_core::numerics::Var::X, y.clone())).is_zero());
            return (ode, y);
        }
    }
}

/// Whether `y` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Ext>], y: &[Ext]) -> bool {
    let len = basis.iter().map(Vec::len).chain([y.len()]).max().unwrap_or(0);
    let pad = |v: &[Ext], i: usize| v.get(i).cloned().unwrap_or_else(Ext::zero);
    let rows: Vec<Vec<Ext>> = (0..len)
        .map(|i| basis.iter().map(|b| pad(b, i)).chain([pad(y, i)]).collect())
        .collect();
    exact_nullspace(&Matrix::from_rows(rows)).iter().any(|v| !v.last().unwrap().is_zero())
}

/// Powers of `√a` as elements of Q(√a).
pub struct Roots {
    pub a: Number,
    pub h: Number,
}

impl Roots {
    pub fn new(a: &Rational) -> Self {
        Roots {
            a: Number::Exact(Ext::rational(a.clone())),
            h: Number::Exact(Ext::sqrt_of(a).unwrap()),
        }
    }

    /// `a^{k/2}`.
    pub fn half(&self, k: u32) -> Number {
        (0..k).fold(Number::one(), |acc, _| acc.mul(&self.h))
    }
}

fn n(v: i64) -> Number {
    Number::from_i64(v)
}

/// The three solvability conditions for a degree-`deg` factor, written out
/// term by term for `deg ≤ 4`: `[terminal, constraint, degree]`.
pub fn explicit_conditions(
    deg: usize,
    a: &Rational,
    b: &Number,
    c: &Number,
    d: &Number,
    e: &Number,
    energy: &Number,
) -> [Number; 3] {
    let r = Roots::new(a);
    let av = &r.a;
    let a2 = av.mul(av);
    let delta = b.mul(b).sub(&av.mul(c).mul_i64(4));
    let base = b
        .mul(b)
        .mul(b)
        .mul(b)
        .neg()
        .add(&av.mul(b).mul(b).mul(c).mul_i64(8))
        .sub(&a2.mul(c).mul(c).mul_i64(16))
        .add(&a2.mul(av).mul(e).mul_i64(64));
    let k = |off: i64| r.half(5).mul(b).mul_i64(off).add(&base);
    let re = r.half(3).mul(energy).mul_i64(8);
    let deg_cond = |off: i64| {
        r.half(5)
            .mul_i64(off)
            .add(&b.mul(b).mul(b))
            .sub(&av.mul(b).mul(c).mul_i64(4))
            .add(&a2.mul(d).mul_i64(8))
    };
    let a5 = a2.mul(&a2).mul(av);
    let p0 = Number::one();
    let p1 = Number::one();
    let p2 = re.add(&delta);
    let p3 = re.add(&delta.mul_i64(3));
    match deg {
        0 => [p2, k(96), deg_cond(40)],
        1 => [p3, k(160), deg_cond(56)],
        2 => {
            let p4 = re.add(&delta.mul_i64(5)).mul(&p2).add(&k(96).mul(&p0).mul_i64(2));
            [p4, k(224).mul(&p2).add(&a5.mul(&p0).mul_i64(4096)), deg_cond(72)]
        }
        3 => {
            let p5 = re.add(&delta.mul_i64(7)).mul(&p3).add(&k(160).mul(&p1).mul_i64(6));
            [p5, k(288).mul(&p3).add(&a5.mul_i64(12288)), deg_cond(88)]
        }
        4 => {
            let p4 = re.add(&delta.mul_i64(5)).mul(&p2).add(&k(96).mul(&p0).mul_i64(2));
            let p6 = re
                .add(&delta.mul_i64(9))
                .mul(&p4)
                .add(&k(224).mul(&p2).mul_i64(12))
                .sub(&r.half(5).mul(&deg_cond(40)).mul(&p0).mul_i64(1536));
            [p6, k(352).mul(&p4).add(&a5.mul(&p2).mul_i64(24576)), deg_cond(104)]
        }
        _ => panic!("written out only up to degree 4"),
    }
}

/// χ coefficients for `deg ≤ 4` with `c0 = 1` (even) or `c1 = 1` (odd).
pub fn explicit_chi(deg: usize, a: &Rational, b: &Number, c: &Number, e: &Number, energy: &Number) -> Vec<Number> {
    let r = Roots::new(a);
    let av = &r.a;
    let delta = b.mul(b).sub(&av.mul(c).mul_i64(4));
    let re = r.half(3).mul(energy).mul_i64(8);
    let base = b
        .mul(b)
        .mul(b)
        .mul(b)
        .neg()
        .add(&av.mul(b).mul(b).mul(c).mul_i64(8))
        .sub(&av.mul(av).mul(c).mul(c).mul_i64(16))
        .add(&av.mul(av).mul(av).mul(e).mul_i64(64));
    let k96 = r.half(5).mul(b).mul_i64(96).add(&base);
    let p2 = re.add(&delta);
    let p3 = re.add(&delta.mul_i64(3));
    let z = Number::zero;
    let over = |p: &Number, den: Number| p.checked_div(&den).unwrap();
    match deg {
        0 => vec![n(1)],
        1 => vec![z(), n(1)],
        2 => vec![n(1), z(), over(&p2, r.half(3).mul_i64(16)).neg()],
        3 => vec![z(), n(1), z(), over(&p3, r.half(3).mul_i64(48)).neg()],
        4 => {
            let p4 = re.add(&delta.mul_i64(5)).mul(&p2).add(&k96.mul_i64(2));
            vec![
                n(1),
                z(),
                over(&p2, r.half(3).mul_i64(16)).neg(),
                z(),
                over(&p4, r.half(6).mul_i64(1536)),
            ]
        }
        _ => panic!("written out only up to degree 4"),
    }
}

/// `|x| ≤ tol · max(1, |scale|)`, exact zero required for exact values.
pub fn negligible(x: &Number, scale: &Number, tol: &BigDecimal) -> bool {
    match x {
        Number::Exact(v) => v.is_zero(),
        Number::Approx(v) => {
            let s = scale.to_decimal(60).abs().max(BigDecimal::one());
            v.abs() <= tol.mul(&s)
        }
    }
}

pub fn tol(exp: i32) -> BigDecimal {
    BigDecimal::parse(&format!("1e{exp}"), 80).unwrap()
}
