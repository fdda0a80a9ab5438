mod common;

use common::{explicit_chi, explicit_conditions, negligible, positive_rat, small_rat, tol};
use proptest::prelude::*;
use qes_core::aim::qes_certificate;
use qes_core::asymptotics::{build_exponent, Potential};
use qes_core::decatic::{
    admissible_state, closed_form_first, closed_form_ground, solve_state, table_row, verify,
    verify_solution, Parity, QesSolution, Sign, TableRowSpec,
};
use qes_core::numerics::rational::{int, rat};
use qes_core::numerics::{ExtendedScalar as Ext, Number, Rational, Scalar, UniPoly, Var};
use qes_core::polyode::{polynomial_solutions, OdeCoefficients};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DIGITS: u32 = 50;

fn exact(v: &Ext) -> Number {
    Number::Exact(v.clone())
}

fn solutions(a: &Rational, b: &Rational, c: &Rational, n: usize) -> Vec<QesSolution> {
    solve_state(a, &Ext::rational(b.clone()), &Ext::rational(c.clone()), Parity::of(n), n, DIGITS)
        .unwrap_or_default()
}

fn check_explicit(sol: &QesSolution) {
    let (b, c, d) = (exact(&sol.b), exact(&sol.c), exact(&sol.d));
    let conds = explicit_conditions(sol.degree, &sol.a, &b, &c, &d, &sol.e, &sol.energy);
    for (i, r) in conds.iter().enumerate() {
        assert!(
            negligible(r, &Number::from_i64(1), &tol(-35)),
            "degree {} condition {}: {}",
            sol.degree,
            i + 1,
            r.display(12)
        );
    }
    let want = explicit_chi(sol.degree, &sol.a, &b, &c, &sol.e, &sol.energy);
    for (k, w) in want.iter().enumerate() {
        let got = sol.chi.coeff(k);
        if w.is_exact_value() && w.is_zero() {
            assert!(got.is_exact_value() && got.is_zero(), "c{k} must vanish exactly");
        } else {
            assert!(negligible(&got.sub(w), w, &tol(-35)), "c{k}: {} vs {}", got.display(20), w.display(20));
        }
    }
}

#[test]
fn explicit_conditions_hold_at_every_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 5];
    for draw in 0..6 {
        let a = if draw % 2 == 0 { int(1) } else { positive_rat(&mut rng, 5, 3) };
        let b = small_rat(&mut rng, 4, 2);
        let c = small_rat(&mut rng, 4, 2);
        for (n, count) in seen.iter_mut().enumerate() {
            for sol in solutions(&a, &b, &c, n) {
                check_explicit(&sol);
                assert!(verify_solution(&sol).max_abs < tol(-30));
                *count += 1;
            }
        }
    }
    assert!(seen.iter().all(|&k| k > 0), "{seen:?}");
}

#[test]
fn variant_terminal_forms_fail() {
    let (a, b, c) = (int(1), int(1), int(1));
    let sol = solutions(&a, &b, &c, 3).remove(0);
    let (bb, cc, d) = (exact(&sol.b), exact(&sol.c), exact(&sol.d));
    let good = &explicit_conditions(3, &a, &bb, &cc, &d, &sol.e, &sol.energy)[0];
    assert!(negligible(good, &Number::one(), &tol(-35)));
    // 5(b² - 4ac) in place of 7(b² - 4ac) in front of P3
    let delta = Number::from_i64(-3);
    let p3 = common::Roots::new(&a).half(3).mul(&sol.energy).mul_i64(8).add(&delta.mul_i64(3));
    let variant = good.sub(&delta.mul_i64(2).mul(&p3));
    assert!(!negligible(&variant, &Number::one(), &tol(-5)));

    let sol = solutions(&a, &b, &c, 4).remove(0);
    let (bb, cc, d) = (exact(&sol.b), exact(&sol.c), exact(&sol.d));
    let good = &explicit_conditions(4, &a, &bb, &cc, &d, &sol.e, &sol.energy)[0];
    assert!(negligible(good, &Number::one(), &tol(-35)));
    // +1536 a^{5/2}(40a^{5/2} + ...) P0 flips the sign of the 98304 a⁵ P0 term
    let variant = good.sub(&Number::from_i64(2 * 98304));
    assert!(!negligible(&variant, &Number::one(), &tol(-5)));
}

fn row(table: u8, row: usize, mu: Rational, k: Rational) -> qes_core::decatic::TableRow {
    table_row(&TableRowSpec { table, row, mu, k, sign: Sign::Plus }).unwrap()
}

fn with_coeff(v: &Potential, which: char, value: Ext) -> Potential {
    let (mut b, mut c, mut e) = (v.b().clone(), v.c().clone(), v.e().clone());
    match which {
        'b' => b = value,
        'c' => c = value,
        'e' => e = value,
        _ => unreachable!(),
    }
    Potential::new(v.a().clone(), b, c, v.d().clone(), e).unwrap()
}

#[test]
fn variant_table_entries_fail_verification() {
    let q = |n: i64, d: i64| Ext::rational(rat(n, d));
    // table 1 row 6 at k = 4, μ = 1: √μ = 1, √(kμ) = 2
    let r = row(1, 6, int(1), int(4));
    assert!(verify(&r.potential, &exact(&r.energy), &r.chi()).exact_zero);
    let variant_c = q(1, 16).add(&q(8, 1).mul(&q(1 + 5, 1)));
    let v = with_coeff(&r.potential, 'c', variant_c);
    assert!(!verify(&v, &exact(&r.energy), &r.chi()).exact_zero);

    // table 2 row 4 at k = 2, μ = 1
    let r = row(2, 4, int(1), int(2));
    assert!(verify(&r.potential, &exact(&r.energy), &r.chi()).exact_zero);
    let variant_e = q(49, 64).sub(&q(5, 1));
    let v = with_coeff(&r.potential, 'e', variant_e);
    assert!(!verify(&v, &exact(&r.energy), &r.chi()).exact_zero);

    // table 2 row 7 at k = 1, μ = 1
    let r = row(2, 7, int(1), int(1));
    assert!(verify(&r.potential, &exact(&r.energy), &r.chi()).exact_zero);
    let v = with_coeff(&r.potential, 'e', r.potential.e().neg());
    assert!(!verify(&v, &exact(&r.energy), &r.chi()).exact_zero);

    // table 1 row 4: e = (k²-4)²μ/64 - (3/2)k√μ
    let r = row(1, 4, int(1), int(3));
    assert_eq!(r.potential.e(), &q(25, 64).sub(&q(9, 2)));
    assert!(verify(&r.potential, &exact(&r.energy), &r.chi()).exact_zero);
}

/// `χ'' - 2φ'χ' - (V - E + φ'' - φ'²)χ = 0` in the descending layout.
fn chi_ode(v: &Potential, energy: &Ext) -> OdeCoefficients {
    let phi1 = build_exponent(v).polynomial().derivative();
    let a5 = phi1.scale(&Ext::from_int(-2));
    let t = v
        .polynomial()
        .sub(&UniPoly::constant(Var::X, energy.clone()))
        .add(&phi1.derivative())
        .sub(&phi1.mul(&phi1));
    assert!(t.degree().unwrap_or(0) <= 4);
    let z = Ext::zero();
    let mut a6 = vec![z.clone(); 7];
    a6[6] = Ext::one();
    let a5: Vec<Ext> = (0..6).map(|j| a5.coeff(5 - j)).collect();
    let tau4: Vec<Ext> = (0..5).map(|j| t.coeff(4 - j)).collect();
    OdeCoefficients::from_vecs(a6, a5, tau4).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_forms_verify_exactly(an in 1i64..9, ad in 1i64..4, bn in -6i64..6, cn in -6i64..6, first in any::<bool>()) {
        let a = rat(an, ad);
        let (b, c) = (Ext::rational(rat(bn, 2)), Ext::rational(rat(cn, 3)));
        let cf = if first { closed_form_first(&a, &b, &c) } else { closed_form_ground(&a, &b, &c) }.unwrap();
        let v = Potential::new(a.clone(), b.clone(), c.clone(), cf.d.clone(), cf.e.clone()).unwrap();
        let chi = UniPoly::monomial(Var::X, Number::one(), first as usize);
        prop_assert!(verify(&v, &exact(&cf.energy), &chi).exact_zero);
        prop_assert_eq!(admissible_state(&v), Some((Parity::of(first as usize), first as usize)));
        let cert = qes_certificate(&v, &cf.energy, 3);
        prop_assert!(cert.terminated);
        let off = qes_certificate(&v, &cf.energy.add(&Ext::one()), 3);
        prop_assert!(!off.terminated);
    }

    #[test]
    fn chi_matches_polyode_nullspace(an in 1i64..9, bn in -6i64..6, cn in -6i64..6, n in 0usize..=1) {
        let a = int(an);
        let sols = solutions(&a, &rat(bn, 2), &rat(cn, 3), n);
        prop_assert_eq!(sols.len(), 1);
        let sol = &sols[0];
        let energy = sol.energy.as_exact().unwrap();
        let v = sol.potential().unwrap();
        let ode = chi_ode(&v, energy);
        let found = polynomial_solutions(&ode, n).unwrap();
        prop_assert_eq!(found.len(), 1);
        let chi: Vec<Ext> = (0..=n).map(|k| sol.chi.coeff(k).as_exact().unwrap().clone()).collect();
        prop_assert_eq!(&found[0].coeffs, &chi);
    }

    #[test]
    fn no_go_families(an in 1i64..50, cn in 1i64..50, en in 1i64..50, family in 0usize..4) {
        let z = int(0);
        let (a, c, e) = (rat(an, 7), rat(cn, 5), rat(en, 3));
        let (c, e) = match family {
            0 => (z.clone(), z.clone()),
            1 => (z.clone(), e),
            2 => (c, z.clone()),
            _ => (c, e),
        };
        let v = Potential::from_rationals(a, z.clone(), c, z, e).unwrap();
        prop_assert_eq!(admissible_state(&v), None);
    }
}

#[test]
fn degree_two_state() {
    let sols = solutions(&int(1), &int(1), &int(1), 2);
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0].d, Ext::rational(rat(-69, 8)));
    assert!(verify_solution(&sols[0]).max_abs < tol(-40));
}
