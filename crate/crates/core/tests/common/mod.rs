//! Naive oracles shared by the integration tests. Each one enumerates a box
//! of modes directly and never calls the crate's counting or search code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rect_spectra::exact::{Rational, RootQuotient};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p^2 + q^2 w`, the eigenvalue of `(p, q)` times `sqrt(w)`.
fn scaled(p: u64, q: u64, w: &Rational) -> Rational {
    Rational::from_integer(BigInt::from(p * p)) + Rational::from_integer(BigInt::from(q * q)) * w
}

/// All Neumann eigenvalues with `p, q <= m`, sorted, as `(p^2 + q^2 w)`.
pub fn naive_neumann(w: &Rational, m: u64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..=m).flat_map(|p| (0..=m).map(move |q| (p, q))).map(|(p, q)| scaled(p, q, w)).collect();
    v.sort();
    v
}

/// `mu_k` (0-indexed, `mu_0 = 0`) from a full sort of the `m x m` box.
pub fn naive_kth(k: usize, w: &Rational, m: u64) -> RootQuotient {
    RootQuotient::new(naive_neumann(w, m)[k].clone(), w.clone()).unwrap()
}

/// Whether `(p, q)` lies under `mu` at `w`: `(p^2 + q^2 w)^2 / w <= mu^2`.
fn under(p: u64, q: u64, w: &Rational, mu_sq: &Rational) -> bool {
    let s = scaled(p, q, w);
    &s * &s / w <= *mu_sq
}

/// `(N, N0)` by double loops over the quadrant.
pub fn brute_counts(mu: &RootQuotient, w: &Rational) -> (BigInt, BigInt) {
    let mu_sq = mu.square();
    let (mut n, mut n0) = (BigInt::zero(), BigInt::from(1));
    let mut p = 0u64;
    while under(p, 0, w, &mu_sq) {
        let mut q = 0u64;
        while under(p, q, w, &mu_sq) {
            if p + q > 0 {
                n += 1;
                n0 += if p == 0 || q == 0 { 2 } else { 4 };
            }
            q += 1;
        }
        p += 1;
    }
    (n, n0)
}

/// `mu_k` of the rectangle with sides `a` and `2 - a` by sorting a mode box
/// in `f64`, in units of pi^2.
pub fn naive_perimeter_kth(k: usize, a: f64, m: u64) -> f64 {
    let mut v: Vec<f64> = Vec::new();
    for p in 0..=m {
        for q in 0..=m {
            let (p, q) = (p as f64, q as f64);
            v.push(p * p / ((2.0 - a) * (2.0 - a)) + q * q / (a * a));
        }
    }
    v.sort_by(f64::total_cmp);
    v[k]
}

/// `mu_k` of the area-1 rectangle `w = b^4` in `f64` from a mode box.
pub fn naive_area_kth_f64(k: usize, w: f64, m: u64, dirichlet: bool) -> f64 {
    let s = w.sqrt();
    let lo = u64::from(dirichlet);
    let mut v: Vec<f64> = Vec::new();
    for p in lo..=m {
        for q in lo..=m {
            let (p, q) = (p as f64, q as f64);
            v.push((p * p + q * q * w) / s);
        }
    }
    v.sort_by(f64::total_cmp);
    v[if dirichlet { k - 1 } else { k }]
}

/// Same as [`naive_area_kth_f64`] but with a caller-owned buffer and a
/// linear-time selection, for dense parameter scans.
pub fn scan_area_kth_f64(k: usize, w: f64, m: u64, dirichlet: bool, buf: &mut Vec<f64>) -> f64 {
    let s = w.sqrt();
    let lo = u64::from(dirichlet);
    buf.clear();
    for p in lo..=m {
        for q in lo..=m {
            let (p, q) = (p as f64, q as f64);
            buf.push((p * p + q * q * w) / s);
        }
    }
    let idx = if dirichlet { k - 1 } else { k };
    *buf.select_nth_unstable_by(idx, f64::total_cmp).1
}
