//! Human-readable radical forms of exact values.
//!
//! `n/sqrt(w)` is shown as `r*sqrt(t)` with `t` squarefree, and side
//! lengths `b = w^(1/4)` as a simplified square root when `w` is a rational
//! square, otherwise as `s*(c/d)^(1/4)` with fourth powers pulled out.
//! Squarefree parts come from trial division; if that does not finish
//! within [`TRIAL_LIMIT`] the unsimplified form is returned.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{exact_sqrt, rational_string, Rational, RootQuotient};

/// Largest trial divisor tried when extracting square factors.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// `x = s^e * t` with `t` free of `e`-th powers, or `None` if the
/// factorization does not complete within the trial limit.
fn extract_power(x: &BigInt, e: u32) -> Option<(BigInt, BigInt)> {
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    let mut m = x.clone();
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= m {
        if p > TRIAL_LIMIT {
            return None;
        }
        let bp = BigInt::from(p);
        let mut mult = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            mult += 1;
        }
        if mult > 0 {
            s *= bp.pow(mult / e);
            t *= bp.pow(mult % e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // What is left is 1 or a prime.
    t *= m;
    Some((s, t))
}

fn coef_times(coef: &Rational, radical: &str) -> String {
    if coef.is_one() {
        return radical.to_string();
    }
    let num = coef.numer();
    let den = coef.denom();
    let head = if num.is_one() { radical.to_string() } else { format!("{num}*{radical}") };
    if den.is_one() { head } else { format!("{head}/{den}") }
}

fn simplified_sqrt(q: &Rational) -> Option<String> {
    if q.is_zero() {
        return Some("0".into());
    }
    // sqrt(a/b) = sqrt(a b) / b
    let (s, t) = extract_power(&(q.numer() * q.denom()), 2)?;
    let coef = Rational::new(s, q.denom().clone());
    Some(if t.is_one() { rational_string(&coef) } else { coef_times(&coef, &format!("sqrt({t})")) })
}

/// `sqrt(q)` for a nonnegative rational, simplified.
pub fn sqrt_string(q: &Rational) -> String {
    simplified_sqrt(q).unwrap_or_else(|| format!("sqrt({})", rational_string(q)))
}

/// The value `n/sqrt(w)` as a radical string such as `18*sqrt(5)/5`.
pub fn value_string(v: &RootQuotient) -> String {
    simplified_sqrt(&v.square()).unwrap_or_else(|| v.to_string())
}

/// The side `b = w^(1/4)`.
pub fn b_string(w: &Rational) -> String {
    let (c, d) = (w.numer(), w.denom());
    if let (Some(rc), Some(rd)) = (exact_sqrt(c), exact_sqrt(d)) {
        return sqrt_string(&Rational::new(rc, rd));
    }
    match (extract_power(c, 4), extract_power(d, 4)) {
        (Some((sc, tc)), Some((sd, td))) => {
            let coef = Rational::new(sc, sd);
            let inner = Rational::new(tc, td);
            let body = if inner.denom().is_one() {
                format!("{}^(1/4)", inner.numer())
            } else {
                format!("({})^(1/4)", rational_string(&inner))
            };
            coef_times(&coef, &body)
        }
        _ => format!("({})^(1/4)", rational_string(w)),
    }
}

/// Squarefree part of a positive integer, when trial division completes.
pub fn squarefree_part(x: &BigInt) -> Option<BigInt> {
    if !x.is_positive() {
        return None;
    }
    extract_power(x, 2).map(|(_, t)| t)
}
