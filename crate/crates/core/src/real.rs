//! Configurable-precision real numbers.
//!
//! `Real` wraps an `astro_float::BigFloat` together with its working
//! precision. Binary operators use the larger of the two operand
//! precisions and round to nearest-even. Conversion to and from exact
//! rationals is lossless, which is what floors, `f64` views and decimal
//! rendering are built on.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::format_rational_sig;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default number of significant decimal digits for real-valued output.
pub const DEFAULT_DIGITS: u32 = 30;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

/// Working precision expressed in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn digits(digits: u32) -> Self {
        Self { digits: digits.max(1) }
    }

    pub fn get(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits: the decimal digits plus a 64-bit guard. The digit
    /// count is recoverable from this, see [`Real::precision`].
    pub fn bits(&self) -> usize {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as usize + 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::digits(DEFAULT_DIGITS)
    }
}

#[derive(Clone, Debug)]
pub struct Real {
    v: BigFloat,
    bits: usize,
}

impl Real {
    fn wrap(v: BigFloat, bits: usize) -> Self {
        debug_assert!(!v.is_nan(), "NaN produced in Real arithmetic");
        Self { v, bits }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn from_i64(x: i64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self::wrap(BigFloat::from_i64(x, bits), bits)
    }

    pub fn from_u64(x: u64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self::wrap(BigFloat::from_u64(x, bits), bits)
    }

    pub fn from_bigint(x: &BigInt, prec: Precision) -> Self {
        let bits = prec.bits();
        if x.is_zero() {
            return Self::zero(prec);
        }
        let (sign, mag) = x.to_u64_digits();
        let words: Vec<Word> = mag.iter().map(|&d| d as Word).collect();
        let e = (words.len() * WORD_BIT_SIZE) as i32;
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let mut v = BigFloat::from_words(&words, s, e);
        // Rounds to the working precision when the integer is wider.
        v.set_precision(bits, RM).expect("set precision");
        Self::wrap(v, bits)
    }

    pub fn from_rational(q: &BigRational, prec: Precision) -> Self {
        let n = Self::from_bigint(q.numer(), prec);
        if q.denom().is_one() {
            return n;
        }
        n / Self::from_bigint(q.denom(), prec)
    }

    pub fn pi(prec: Precision) -> Self {
        let bits = prec.bits();
        let v = CONSTS.with(|cc| cc.borrow_mut().pi(bits, RM));
        Self::wrap(v, bits)
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    /// Precision handle matching this value's working precision.
    pub fn precision(&self) -> Precision {
        let digits = ((self.bits.saturating_sub(64)) as f64 / std::f64::consts::LOG2_10).floor();
        Precision::digits(digits.max(1.0) as u32)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.bits, RM), self.bits)
    }

    pub fn cbrt(&self) -> Self {
        Self::wrap(self.v.cbrt(self.bits, RM), self.bits)
    }

    /// `self^e` for `self > 0`.
    pub fn pow(&self, e: &Real) -> Self {
        let bits = self.bits.max(e.bits);
        let v = CONSTS.with(|cc| self.v.pow(&e.v, bits, RM, &mut cc.borrow_mut()));
        Self::wrap(v, bits)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.bits, RM), self.bits)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// The exact binary value held by this number.
    pub fn to_rational(&self) -> BigRational {
        if self.v.is_zero() {
            return BigRational::zero();
        }
        let (words, _, sign, e, _) = self.v.as_raw_parts().expect("finite value");
        let digits: Vec<u64> = words.iter().map(|&w| w as u64).collect();
        let mant = BigInt::from_biguint(BigSign::Plus, BigUint::new(to_u32_digits(&digits)));
        let shift = i64::from(e) - (words.len() * WORD_BIT_SIZE) as i64;
        let mut q = if shift >= 0 {
            BigRational::from_integer(mant << (shift as usize))
        } else {
            BigRational::new(mant, BigInt::one() << ((-shift) as usize))
        };
        if sign == Sign::Neg {
            q = -q;
        }
        q
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn floor(&self) -> BigInt {
        self.to_rational().floor().to_integer()
    }

    /// Decimal string with `digits` significant digits, round-half-even.
    pub fn to_decimal(&self, digits: u32) -> String {
        format_rational_sig(&self.to_rational(), digits)
    }

    pub fn ln(&self) -> Self {
        let v = CONSTS.with(|cc| self.v.ln(self.bits, RM, &mut cc.borrow_mut()));
        Self::wrap(v, self.bits)
    }
}

fn to_u32_digits(d: &[u64]) -> Vec<u32> {
    let mut out = Vec::with_capacity(d.len() * 2);
    for &x in d {
        out.push(x as u32);
        out.push((x >> 32) as u32);
    }
    out
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(DEFAULT_DIGITS))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let bits = self.bits.max(rhs.bits);
                Real::wrap(self.v.$method(&rhs.v, bits, RM), bits)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
        impl $tr<i64> for &Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                let r = Real::wrap(BigFloat::from_i64(rhs, self.bits), self.bits);
                self.$method(&r)
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.bits)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(-&self.v, self.bits)
    }
}

/// `true` when `|x - y| <= tol`.
pub fn close(x: &Real, y: &Real, tol: &Real) -> bool {
    (x - y).abs() <= *tol
}

/// `10^-e` at the given precision.
pub fn ten_pow_neg(e: u32, prec: Precision) -> Real {
    let ten = BigInt::from(10u32);
    Real::from_rational(&BigRational::new(BigInt::one(), num_traits::pow(ten, e as usize)), prec)
}

/// Exact floor of a nonnegative real as `u64`.
pub fn floor_u64(x: &Real) -> Option<u64> {
    let f = x.floor();
    if f.is_negative() {
        None
    } else {
        f.to_u64()
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn precision_round_trip() {
        for d in [1u32, 15, 20, 30, 31, 50, 100] {
            let p = super::Precision::digits(d);
            assert_eq!(super::Real::from_i64(1, p).precision(), p);
        }
    }

    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn integer_round_trip() {
        for x in [0i64, 1, -1, 7, 1 << 40, -(1 << 62), 123_456_789] {
            let r = Real::from_i64(x, p());
            assert_eq!(r.to_rational(), BigRational::from_integer(BigInt::from(x)));
        }
        let big: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let r = Real::from_bigint(&big, Precision::digits(60));
        assert_eq!(r.floor(), big);
    }

    #[test]
    fn rational_conversion_is_close() {
        let q = BigRational::new(BigInt::from(77), BigInt::from(20));
        let r = Real::from_rational(&q, p());
        assert_eq!(r.to_decimal(6), "3.85000");
        let third = Real::from_rational(&BigRational::new(1.into(), 3.into()), p());
        assert_eq!(third.to_decimal(5), "0.33333");
    }

    #[test]
    fn pi_and_roots() {
        assert_eq!(Real::pi(p()).to_decimal(30), "3.14159265358979323846264338328");
        let two = Real::from_i64(2, p());
        assert_eq!(two.sqrt().to_decimal(20), "1.4142135623730950488");
        let eight = Real::from_i64(8, p());
        assert_eq!(eight.cbrt().to_decimal(10), "2.000000000");
        let half = Real::from_rational(&BigRational::new(1.into(), 2.into()), p());
        assert_eq!(Real::from_i64(9, p()).pow(&half).to_decimal(10), "3.000000000");
    }

    #[test]
    fn floors_and_ordering() {
        let x = Real::from_rational(&BigRational::new(BigInt::from(-7), BigInt::from(2)), p());
        assert_eq!(x.floor(), BigInt::from(-4));
        assert!(x < Real::zero(p()));
        assert!((Real::from_i64(3, p()) - 1) > Real::from_i64(1, p()));
        assert_eq!(floor_u64(&Real::from_i64(5, p())), Some(5));
    }
}
