//! Neumann spectrum of the rectangle with sides `a` and `2 - a` (perimeter 4).

use serde::{Serialize, Serializer};

use super::{sort_modes, Mode};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::real::{floor_u64, ten_pow_neg, Precision, Real};

/// Eigenvalues closer than `10^-PERIMETER_TIE_DIGITS` are one multiple eigenvalue.
pub const PERIMETER_TIE_DIGITS: u32 = 20;

#[derive(Clone, Debug)]
pub struct PerimeterRectangle {
    a: Real,
}

impl PerimeterRectangle {
    pub fn new(a: Real) -> Result<Self> {
        let one = Real::from_i64(1, a.precision());
        if a.is_negative() || a.is_zero() || a > one {
            return Err(Error::Precondition(format!("a = {} must lie in (0, 1]", a.to_decimal(12))));
        }
        Ok(Self { a })
    }

    pub fn from_rational(a: &Rational, prec: Precision) -> Result<Self> {
        Self::new(Real::from_rational(a, prec))
    }

    pub fn a(&self) -> &Real {
        &self.a
    }

    /// The long side `2 - a`.
    pub fn long_side(&self) -> Real {
        Real::from_i64(2, self.a.precision()) - &self.a
    }
}

impl Serialize for PerimeterRectangle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.a.to_decimal(self.a.precision().get()))
    }
}

/// A perimeter-spectrum eigenvalue with its (numerically tied) modes.
#[derive(Clone, Debug)]
pub struct PerimeterEntry {
    pub value: Real,
    pub modes: Vec<Mode>,
    pub multiplicity: usize,
    pub first_index: usize,
}

impl Serialize for PerimeterEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PerimeterEntry", 4)?;
        st.serialize_field("value", &self.value.to_decimal(self.value.precision().get()))?;
        st.serialize_field("modes", &self.modes)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("first_index", &self.first_index)?;
        st.end()
    }
}

/// `p^2 / (2-a)^2 + q^2 / a^2` in units of pi^2.
pub fn perimeter_eigenvalue(mode: Mode, rect: &PerimeterRectangle) -> Real {
    let prec = rect.a.precision();
    let p = Real::from_u64(mode.p, prec);
    let q = Real::from_u64(mode.q, prec);
    let x = p / rect.long_side();
    let y = q / &rect.a;
    &x * &x + &y * &y
}

/// The first `count` modes (0-indexed, with multiplicity) in eigenvalue order.
pub fn perimeter_spectrum(count: usize, rect: &PerimeterRectangle) -> Vec<(Real, Mode)> {
    if count == 0 {
        return Vec::new();
    }
    let prec = rect.a.precision();
    let long = rect.long_side();
    let k = count as u64 - 1;
    let area = &rect.a * &long;
    let mut bound = Real::from_u64(4 * k, prec) / (Real::pi(prec) * area) + 1;
    loop {
        let root = bound.sqrt();
        let pmax = floor_u64(&(&long * &root)).unwrap_or(0);
        let qmax = floor_u64(&(&rect.a * &root)).unwrap_or(0);
        let mut vals = Vec::new();
        for q in 0..=qmax {
            for p in 0..=pmax {
                let m = Mode::new(p, q);
                let v = perimeter_eigenvalue(m, rect);
                if v <= bound {
                    vals.push((v, m));
                }
            }
        }
        if vals.len() >= count {
            vals.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite").then((x.1.q, x.1.p).cmp(&(y.1.q, y.1.p))));
            vals.truncate(count);
            return vals;
        }
        bound = bound * 2;
    }
}

/// The entry holding `mu_k` (0-indexed) with ties grouped at `10^-20`.
pub fn kth_perimeter(k: usize, rect: &PerimeterRectangle) -> PerimeterEntry {
    let prec = rect.a.precision();
    let tol = ten_pow_neg(PERIMETER_TIE_DIGITS, prec);
    // Extend the prefix until the cluster around index k is complete.
    let mut len = k + 8;
    loop {
        let spec = perimeter_spectrum(len, rect);
        let target = spec[k].0.clone();
        let hi = &target + &tol;
        if spec.last().expect("nonempty").0 > hi {
            let lo = &target - &tol;
            let first = spec.partition_point(|(v, _)| *v < lo);
            let mut modes: Vec<Mode> = spec[first..].iter().take_while(|(v, _)| *v <= hi).map(|(_, m)| *m).collect();
            sort_modes(&mut modes);
            return PerimeterEntry { value: target, multiplicity: modes.len(), modes, first_index: first };
        }
        len *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn rect(a: Rational) -> PerimeterRectangle {
        PerimeterRectangle::from_rational(&a, Precision::default()).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(perimeter_eigenvalue(Mode::new(0, 1), &rect(int(1))).to_decimal(10), "1.000000000");
        let v = perimeter_eigenvalue(Mode::new(2, 0), &rect(rat(2, 3)));
        assert_eq!(v.to_decimal(25), "2.250000000000000000000000");
    }

    #[test]
    fn kth_examples() {
        let e = kth_perimeter(3, &rect(int(1)));
        assert_eq!(e.value.to_decimal(10), "2.000000000");
        assert_eq!(e.modes, vec![Mode::new(1, 1)]);
        assert_eq!(e.first_index, 3);
        let e = kth_perimeter(1, &rect(int(1)));
        assert_eq!(e.multiplicity, 2);
        let e = kth_perimeter(0, &rect(rat(1, 3)));
        assert!(e.value.is_zero());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PerimeterRectangle::from_rational(&int(0), Precision::default()).is_err());
        assert!(PerimeterRectangle::from_rational(&rat(3, 2), Precision::default()).is_err());
        assert!(PerimeterRectangle::from_rational(&rat(-1, 2), Precision::default()).is_err());
    }
}
