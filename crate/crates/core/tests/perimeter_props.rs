mod common;

use std::cmp::Ordering;

use common::{naive_perimeter_kth, r};
use proptest::prelude::*;
use rect_spectra::exact::{Rational, RootQuotient};
use rect_spectra::optimize::perimeter::{min_convergence_sweep, perimeter_breakpoints, perimeter_max, perimeter_min};
use rect_spectra::real::{Precision, Real};
use rect_spectra::spectrum::{kth_eigenvalue, kth_perimeter, AreaRectangle, PerimeterRectangle};

fn prec() -> Precision {
    Precision::default()
}

fn eps(e: i32) -> f64 {
    10f64.powi(-e)
}

#[test]
fn maximizer_closed_form_and_scan() {
    for k in 1..=100u64 {
        let opt = perimeter_max(k, prec()).unwrap();
        assert!(opt.attained);
        assert_eq!(opt.optimizers.len(), 1, "k={k}");
        let a_star = r(2, k as i64 + 1);
        let expected_a = Real::from_rational(&a_star, prec());
        assert!((opt.a_star().unwrap() - &expected_a).abs().to_f64() < 1e-25, "k={k}");
        let expected_v = ((k + 1) * (k + 1)) as f64 / 4.0;
        assert!((opt.value_float - expected_v).abs() < 1e-12 * expected_v, "k={k}");
        // The exact spectrum at a* agrees with the reported value.
        let rect = PerimeterRectangle::from_rational(&a_star, prec()).unwrap();
        assert!((kth_perimeter(k as usize, &rect).value - &opt.value_real).abs().to_f64() < 1e-20);
    }
}

#[test]
fn maximizer_dominates_dense_scan() {
    for k in 1..=30u64 {
        let best = ((k + 1) * (k + 1)) as f64 / 4.0;
        let m = 2 * k + 2;
        for i in 1..=2000 {
            let a = i as f64 / 2000.0;
            let v = naive_perimeter_kth(k as usize, a, m);
            assert!(v <= best * (1.0 + 1e-12), "k={k} a={a}: {v} > {best}");
        }
    }
}

#[test]
fn minimizer_dominated_by_dense_scan() {
    for k in 2..=20u64 {
        let opt = perimeter_min(k, prec()).unwrap();
        assert!(opt.attained);
        let m = 2 * k + 2;
        let best = opt.value_float;
        for o in &opt.optimizers {
            let at = naive_perimeter_kth(k as usize, o.a_real.to_f64(), m);
            assert!((at - best).abs() < 1e-9 * best.max(1.0), "k={k}: {at} vs {best}");
        }
        for i in 1..=2000 {
            let a = 0.01 + 0.99 * i as f64 / 2000.0;
            let v = naive_perimeter_kth(k as usize, a, m);
            assert!(v >= best - 1e-9, "k={k} a={a}: {v} < {best}");
        }
    }
}

#[test]
fn minimizer_k1_degenerates() {
    let opt = perimeter_min(1, prec()).unwrap();
    assert!(!opt.attained);
    assert_eq!(opt.value_float, 0.25);
    let rect = PerimeterRectangle::from_rational(&r(1, 1000), prec()).unwrap();
    let v = kth_perimeter(1, &rect).value.to_f64();
    assert!((v - 0.25).abs() < eps(3), "{v}");
    assert!(v > 0.25);
}

#[test]
fn breakpoints_match_case_boundaries() {
    let s3 = 3f64.sqrt() - 1.0;
    let cases: [(u64, Vec<f64>); 3] = [
        (2, vec![2.0 / 3.0]),
        (3, vec![0.5, 2.0 / 3.0, s3]),
        (4, vec![0.4, 0.5, 2.0 / 7.0 * (8f64.sqrt() - 1.0), s3]),
    ];
    for (k, expected) in cases {
        let got: Vec<f64> = perimeter_breakpoints(k, prec()).unwrap().iter().map(Real::to_f64).collect();
        assert_eq!(got.len(), expected.len(), "k={k}: {got:?}");
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-12, "k={k}: {g} vs {e}");
        }
    }
}

/// Away from breakpoints the active mode is locally constant; sampling each
/// gap between consecutive breakpoints finds a single mode.
#[test]
fn active_mode_constant_between_breakpoints() {
    for k in 1..=8u64 {
        let mut edges: Vec<f64> = vec![0.0];
        edges.extend(perimeter_breakpoints(k, prec()).unwrap().iter().map(Real::to_f64));
        edges.push(1.0);
        for gap in edges.windows(2) {
            let (lo, hi) = (gap[0], gap[1]);
            let mut seen = None;
            for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
                let a = lo + (hi - lo) * t;
                let rect = PerimeterRectangle::new(Real::from_rational(&f64_rational(a), prec())).unwrap();
                let e = kth_perimeter(k as usize, &rect);
                if e.multiplicity > 1 {
                    continue;
                }
                let mode = e.modes[0];
                assert!(seen.is_none_or(|m| m == mode), "k={k} on ({lo}, {hi}): {seen:?} then {mode:?}");
                seen = Some(mode);
            }
        }
    }
}

fn f64_rational(x: f64) -> Rational {
    Rational::from_float(x).unwrap()
}

#[test]
fn minimizers_approach_square() {
    let sweep = min_convergence_sweep(128, prec()).unwrap();
    let window = |lo: u64| sweep.windows.iter().find(|w| w.k_lo == lo).unwrap().max_deviation;
    assert!(window(64) < window(8), "{:?}", sweep.windows);
}

/// `mu_k` of the free rectangle with sides `x` and `y` (in units of pi^2),
/// through the area-1 rectangle of the same shape.
fn free_kth(k: usize, x: &Rational, y: &Rational) -> RootQuotient {
    let ratio = x / y;
    let rect = AreaRectangle::canonical(&ratio * &ratio).unwrap();
    let e = kth_eigenvalue(k, &rect).unwrap();
    RootQuotient::new(e.value.n() / (x * y), e.value.w().clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Enlarging both sides never raises any eigenvalue.
    #[test]
    fn enlarging_sides_lowers_eigenvalues(
        k in 1usize..=50,
        xn in 1i64..200, yn in 1i64..200,
        dx in 0i64..100, dy in 0i64..100,
    ) {
        let (x, y) = (r(xn, 100), r(yn, 100));
        let (x2, y2) = (r(xn + dx, 100), r(yn + dy, 100));
        let small = free_kth(k, &x, &y);
        let large = free_kth(k, &x2, &y2);
        prop_assert_ne!(large.compare(&small), Ordering::Greater);
    }
}
