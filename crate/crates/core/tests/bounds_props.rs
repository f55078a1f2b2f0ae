mod common;

use common::{naive_neumann, r};
use proptest::prelude::*;
use rect_spectra::bounds::{lemma1_lower_bound, lemma2_lower_bound, square_count_upper_bound, sweep_check, BoundName, SweepGrid, default_guard};
use rect_spectra::exact::{Rational, RootQuotient};
use rect_spectra::real::{Precision, Real};
use rect_spectra::spectrum::{count_n, AreaRectangle};

fn prec() -> Precision {
    Precision::default()
}

#[test]
fn lemma2_brackets_square_spectrum() {
    let nu = naive_neumann(&r(1, 1), 70);
    let guard = default_guard(prec());
    let pi = Real::pi(prec());
    for k in 1..=2000u64 {
        let v = Real::from_rational(&nu[k as usize], prec()) * &pi * &pi;
        assert!(v >= lemma2_lower_bound(k, prec()).unwrap() - &guard, "k={k}");
        assert!(v <= &pi * Real::from_u64(4 * k, prec()) + &guard, "k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lemma1_holds(bn in 4i64..64, mu_n in 0i64..20_000, mu_d in 1i64..50) {
        let b = r(bn, 16);
        let mu = &b * &b * Rational::from_integer(4.into()) + r(mu_n, mu_d);
        let w = &b * &b * &b * &b;
        let w = if w < r(1, 1) { Rational::from_integer(1.into()) / w } else { w };
        let rect = AreaRectangle::new(w).unwrap();
        let n = count_n(&RootQuotient::rational(mu.clone()).unwrap(), &rect);
        let bound = lemma1_lower_bound(&Real::from_rational(&mu, prec()), &Real::from_rational(&b, prec())).unwrap();
        prop_assert!(Real::from_bigint(&n, prec()) >= bound - default_guard(prec()));
    }

    #[test]
    fn square_count_bound_holds(n in 2i64..100_000, d in 1i64..20) {
        let nu = r(n, d);
        prop_assume!(nu >= r(2, 1));
        let pi = Real::pi(prec());
        let nu_pi2 = Real::from_rational(&nu, prec()) / (&pi * &pi);
        let count = count_n(&RootQuotient::rational(nu_pi2.to_rational()).unwrap(), &AreaRectangle::square());
        let bound = square_count_upper_bound(&Real::from_rational(&nu, prec()));
        prop_assert!(Real::from_bigint(&count, prec()) <= bound + default_guard(prec()));
    }
}

#[test]
fn sweeps_report_no_violations() {
    let grid = SweepGrid::sampled(300, 300, 11);
    for name in BoundName::ALL {
        let rep = sweep_check(name, &grid, &default_guard(prec())).unwrap();
        assert!(rep.passed(), "{name}: {:?}", rep.violations.first());
    }
}
