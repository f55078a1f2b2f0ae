//! Exact rationals and the `RootQuotient` scalar `n / sqrt(w)`.
//!
//! Every area-constrained eigenvalue in units of pi^2 has the form
//! `(p^2 + q^2 w) / sqrt(w)` with `w = b^4` rational, so a pair of rationals
//! is enough to hold it. Values are compared by cross-multiplied squares and
//! never reduced to a canonical radical form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always normalized (`gcd = 1`, positive denominator).
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?),
    };
    Ok(parsed)
}

/// `"p/q"` with the denominator omitted when it is 1.
pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// The nonnegative real `n / sqrt(w)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootQuotient {
    #[serde(with = "rational_str")]
    n: Rational,
    #[serde(with = "rational_str")]
    w: Rational,
}

impl RootQuotient {
    pub fn new(n: Rational, w: Rational) -> Result<Self> {
        if n.is_negative() {
            return Err(Error::Precondition(format!("RootQuotient numerator {n} is negative")));
        }
        if !w.is_positive() {
            return Err(Error::Precondition(format!("RootQuotient radicand {w} is not positive")));
        }
        Ok(Self { n, w })
    }

    /// A plain rational value (`w = 1`).
    pub fn rational(n: Rational) -> Result<Self> {
        Self::new(n, Rational::one())
    }

    pub fn zero() -> Self {
        Self { n: Rational::zero(), w: Rational::one() }
    }

    pub(crate) fn new_unchecked(n: Rational, w: Rational) -> Self {
        debug_assert!(!n.is_negative() && w.is_positive());
        Self { n, w }
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.n.is_zero()
    }

    /// `n^2 / w`, the exact square of the value.
    pub fn square(&self) -> Rational {
        &self.n * &self.n / &self.w
    }

    /// Orders the represented reals by comparing `n_x^2 w_y` with `n_y^2 w_x`.
    pub fn compare(&self, other: &Self) -> Ordering {
        let lhs = &self.n * &self.n * &other.w;
        let rhs = &other.n * &other.n * &self.w;
        lhs.cmp(&rhs)
    }

    /// Decimal rendering with `digits` significant digits, round-half-even.
    pub fn to_decimal(&self, digits: u32) -> String {
        format_sqrt_sig(&self.square(), digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.square().to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl PartialEq for RootQuotient {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for RootQuotient {}

impl PartialOrd for RootQuotient {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootQuotient {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Display for RootQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_one() {
            write!(f, "{}", self.n)
        } else {
            write!(f, "{}/sqrt({})", self.n, self.w)
        }
    }
}

pub fn rq_compare(x: &RootQuotient, y: &RootQuotient) -> Ordering {
    x.compare(y)
}

pub fn rq_square(x: &RootQuotient) -> Rational {
    x.square()
}

pub fn rq_to_float(x: &RootQuotient, digits: u32) -> Result<String> {
    if digits == 0 {
        return Err(Error::Precondition("digits must be at least 1".into()));
    }
    Ok(x.to_decimal(digits))
}

// ---------------------------------------------------------------------------
// Integer helpers

/// `floor(sqrt(q))` for `q >= 0`.
pub fn floor_sqrt(q: &Rational) -> BigInt {
    let f = q.floor().to_integer();
    if f.is_negative() {
        return BigInt::zero();
    }
    f.sqrt()
}

/// `floor(q^(1/4))` for `q >= 0`.
pub fn floor_fourth_root(q: &Rational) -> BigInt {
    floor_sqrt(q).sqrt()
}

/// `Some(r)` when the nonnegative integer `x` is the perfect square `r^2`.
pub fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

pub(crate) fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

fn pow10_rat(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow10(e as u32))
    } else {
        Rational::new(BigInt::one(), pow10((-e) as u32))
    }
}

// ---------------------------------------------------------------------------
// Decimal rendering

/// Lays out the integer `m` (exactly `digits` digits) as `m * 10^(e - digits + 1)`.
fn layout(negative: bool, m: &BigInt, e: i64, digits: u32) -> String {
    let s = m.to_string();
    debug_assert_eq!(s.len(), digits as usize);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        for _ in 0..(-e - 1) {
            out.push('0');
        }
        out.push_str(&s);
    } else {
        let int_len = (e + 1) as usize;
        if int_len >= s.len() {
            out.push_str(&s);
            for _ in 0..(int_len - s.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&s[..int_len]);
            out.push('.');
            out.push_str(&s[int_len..]);
        }
    }
    out
}

fn zero_string(digits: u32) -> String {
    if digits <= 1 {
        "0".to_string()
    } else {
        format!("0.{}", "0".repeat(digits as usize - 1))
    }
}

/// Rounds a nonnegative real `x` given only through two exact oracles:
/// `floor_scaled(s)` = floor(x * 10^s) and `cmp_half(s, m)` comparing
/// `x * 10^s` against `m + 1/2`.
fn format_sig_generic(
    digits: u32,
    approx_log10: f64,
    ge_pow10: impl Fn(i64) -> bool,
    floor_scaled: impl Fn(i64) -> BigInt,
    cmp_half: impl Fn(i64, &BigInt) -> Ordering,
) -> String {
    let mut e = if approx_log10.is_finite() { approx_log10.floor() as i64 } else { 0 };
    // Exact decade: 10^e <= x < 10^(e+1).
    while !ge_pow10(e) {
        e -= 1;
    }
    while ge_pow10(e + 1) {
        e += 1;
    }
    let shift = i64::from(digits) - 1 - e;
    let mut m = floor_scaled(shift);
    let round_up = match cmp_half(shift, &m) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => m.is_odd(),
    };
    if round_up {
        m += 1;
    }
    if m == pow10(digits) {
        m = pow10(digits - 1);
        e += 1;
    }
    layout(false, &m, e, digits)
}

/// Significant-digit rendering of an exact rational, round-half-even.
pub fn format_rational_sig(q: &Rational, digits: u32) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return zero_string(digits);
    }
    let x = q.abs();
    let approx = x.to_f64().map(|f| f.log10()).unwrap_or(0.0);
    let s = format_sig_generic(
        digits,
        approx,
        |e| x >= pow10_rat(e),
        |s| (&x * pow10_rat(s)).floor().to_integer(),
        |s, m| {
            let scaled = &x * pow10_rat(s);
            let half = Rational::from_integer(m.clone()) + rat(1, 2);
            scaled.cmp(&half)
        },
    );
    if q.is_negative() {
        format!("-{s}")
    } else {
        s
    }
}

/// Significant-digit rendering of `sqrt(sq)` for a nonnegative rational `sq`.
pub fn format_sqrt_sig(sq: &Rational, digits: u32) -> String {
    let digits = digits.max(1);
    if sq.is_zero() {
        return zero_string(digits);
    }
    let approx = sq.to_f64().map(|f| 0.5 * f.log10()).unwrap_or(0.0);
    format_sig_generic(
        digits,
        approx,
        |e| *sq >= pow10_rat(2 * e),
        |s| floor_sqrt(&(sq * pow10_rat(2 * s))),
        |s, m| {
            // x*10^s vs m + 1/2  <=>  4 sq 10^(2s) vs (2m+1)^2
            let lhs = sq * pow10_rat(2 * s) * int(4);
            let t: BigInt = m * 2 + 1;
            lhs.cmp(&Rational::from_integer(&t * &t))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rq(n: Rational, w: Rational) -> RootQuotient {
        RootQuotient::new(n, w).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(rq(int(0), int(1)).compare(&rq(int(0), int(7))), Ordering::Equal);
        assert_eq!(rq(int(18), int(5)).compare(&rq(int(12), int(1))), Ordering::Less);
        assert_eq!(rq(int(5), int(1)).compare(&rq(int(5), int(1))), Ordering::Equal);
        // 18/sqrt(5) == 9/sqrt(5/4)
        assert_eq!(rq(int(18), int(5)), rq(int(9), rat(5, 4)));
    }

    #[test]
    fn to_float_examples() {
        assert_eq!(rq_to_float(&rq(int(18), int(5)), 6).unwrap(), "8.04984");
        assert_eq!(rq_to_float(&rq(int(1), int(1)), 3).unwrap(), "1.00");
        // 77*sqrt(10)/20 = 12.174774...
        assert_eq!(rq_to_float(&rq(rat(77, 5), rat(8, 5)), 6).unwrap(), "12.1748");
        assert!(rq_to_float(&rq(int(1), int(1)), 0).is_err());
    }

    #[test]
    fn square_examples() {
        assert_eq!(rq_square(&rq(int(18), int(5))), rat(324, 5));
        assert_eq!(rq_square(&rq(int(0), int(3))), int(0));
        assert_eq!(rq_square(&rq(rat(77, 5), rat(8, 5))), rat(5929, 40));
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(RootQuotient::new(int(-1), int(1)).is_err());
        assert!(RootQuotient::new(int(1), int(0)).is_err());
    }

    #[test]
    fn half_even_rounding() {
        // sqrt(6.25) = 2.5 exactly
        assert_eq!(format_sqrt_sig(&rat(25, 4), 1), "2");
        assert_eq!(format_sqrt_sig(&rat(49, 4), 1), "4");
        assert_eq!(format_rational_sig(&rat(5, 2), 1), "2");
        assert_eq!(format_rational_sig(&rat(15, 2), 1), "8");
        assert_eq!(format_rational_sig(&rat(9999, 1000), 3), "10.0");
        assert_eq!(format_rational_sig(&rat(1, 800), 2), "0.0012");
        assert_eq!(format_rational_sig(&rat(-7, 4), 2), "-1.8");
        assert_eq!(format_rational_sig(&int(1200), 2), "1200");
        assert_eq!(format_rational_sig(&int(0), 3), "0.00");
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("16/9").unwrap(), rat(16, 9));
        assert_eq!(parse_rational("4").unwrap(), int(4));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_string(&rat(8, 4)), "2");
        assert_eq!(rational_string(&rat(5, 4)), "5/4");
    }

    #[test]
    fn root_helpers() {
        assert_eq!(floor_sqrt(&rat(99, 4)), BigInt::from(4));
        assert_eq!(floor_fourth_root(&int(80)), BigInt::from(2));
        assert_eq!(floor_fourth_root(&int(81)), BigInt::from(3));
        assert_eq!(exact_sqrt(&BigInt::from(144)), Some(BigInt::from(12)));
        assert_eq!(exact_sqrt(&BigInt::from(145)), None);
    }

    #[test]
    fn serializes_as_strings() {
        let v = serde_json::to_string(&rq(rat(77, 5), rat(8, 5))).unwrap();
        assert_eq!(v, r#"{"n":"77/5","w":"8/5"}"#);
        let back: RootQuotient = serde_json::from_str(r#"{"n":"9","w":"5/4"}"#).unwrap();
        assert_eq!(back, rq(int(18), int(5)));
    }
}
