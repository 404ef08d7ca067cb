use cue_moment::algebra::{rat, rat_int, to_f64};
use cue_moment::haar::{mc_charpoly_moment, mc_moment, mc_trace_square, SamplingPlan};
use cue_moment::moments::{charpoly_moment, deriv_moment_general_x, deriv_moment_laguerre_k};
use cue_moment::n2::{u2_integer_formula_real_k, u2_moment_real_k, u2_moment_sum, u2_real_k_formula};
use num_complex::Complex64;

fn within(est: &cue_moment::haar::MCEstimate, exact: f64, sigmas: f64) -> bool {
    (est.mean - exact).abs() <= sigmas * est.std_error.max(1e-12)
}

#[test]
fn real_k_formulas_disagree_inside_the_disk() {
    // at k = 3/4, |x| = 1/5 neither continuation is the moment: one is real
    // but off, the other is complex
    let g1 = u2_integer_formula_real_k(0.75, 1.0 / 25.0).unwrap();
    let g2 = u2_real_k_formula(0.75, 0.2).unwrap();
    assert!((g1.re - 1.0409).abs() < 1e-4 && g1.im.abs() < 1e-10);
    assert!((g2 - Complex64::new(1.15548, -0.13579)).norm() < 1e-4);
    assert!(u2_moment_real_k(0.75, 0.2).is_err());
    let mc = mc_moment(2, 0.75, Complex64::new(0.2, 0.0), SamplingPlan::new(200_000, 3)).unwrap();
    assert!((mc.mean - 1.01969).abs() < 4.0 * mc.std_error + 1e-3, "{mc:?}");
    assert!((mc.mean - g1.re).abs() > 4.0 * mc.std_error);
}

#[test]
fn formulas_outside_the_disk() {
    for (k, x) in [(3.0, 1.25), (2.0, 1.5), (4.0, 3.0)] {
        let a = u2_integer_formula_real_k(k, x * x).unwrap();
        let b = u2_real_k_formula(k, x).unwrap();
        assert!((a - b).norm() < 1e-8 * b.norm(), "k={k} x={x}: {a} {b}");
    }
    // only the real-k formula survives non-integer k
    let a = u2_integer_formula_real_k(1.25, 3.24).unwrap();
    let b = u2_real_k_formula(1.25, 1.8).unwrap();
    assert!((a - b).norm() > 10.0);
    let mc = mc_moment(2, 1.25, Complex64::new(1.8, 0.0), SamplingPlan::new(100_000, 5)).unwrap();
    assert!(within(&mc, b.re, 5.0), "{mc:?} vs {b}");
}

#[test]
fn monte_carlo_matches_exact_moments() {
    let plan = SamplingPlan::new(100_000, 21);
    let e = mc_moment(3, 2.0, Complex64::new(1.0, 0.0), plan).unwrap();
    assert!(within(&e, to_f64(&deriv_moment_laguerre_k(3, 2).unwrap()), 5.0), "{e:?}");
    let e = mc_charpoly_moment(4, 2.0, Complex64::new(0.0, 1.0), plan).unwrap();
    assert!(within(&e, to_f64(&charpoly_moment(4, 2)), 5.0), "{e:?}");
    // E|tr U|^2 = 1 for N >= 1
    let e = mc_trace_square(5, plan).unwrap();
    assert!(within(&e, 1.0, 5.0), "{e:?}");
    let e = mc_moment(4, 1.0, Complex64::new(0.0, 0.5), plan).unwrap();
    let exact = deriv_moment_general_x(4, 1, &rat(1, 4)).unwrap();
    assert!(within(&e, to_f64(&exact), 5.0), "{e:?} vs {exact}");
}

#[test]
fn catalan_at_origin() {
    let catalan = [1, 1, 2, 5, 14, 42, 132];
    for (k, c) in catalan.iter().enumerate() {
        assert_eq!(u2_moment_sum(k as u64, &rat_int(0)), rat_int(*c));
    }
}
