//! Neumann and Dirichlet spectra of rectangles.
//!
//! Area-1 rectangles are parametrized by `w = b^4` (rational), for which
//! every eigenvalue in units of pi^2 is the exact [`RootQuotient`]
//! `(p^2 + q^2 w) / sqrt(w)`. With `w = c/d` in lowest terms all eigenvalues
//! of one rectangle share the radicand, so ordering them reduces to ordering
//! the integer keys `p^2 d + q^2 c`.

mod counting;
mod perimeter;

pub use counting::{count_n, count_n0, multiplicity_on_curve, quadrant_counts, QuadrantCounts};
pub use perimeter::{
    kth_perimeter, perimeter_eigenvalue, perimeter_spectrum, PerimeterEntry, PerimeterRectangle,
    PERIMETER_TIE_DIGITS,
};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{floor_sqrt, Rational, RootQuotient};
use crate::real::{Precision, Real};

/// Lattice pair `(p, q)` indexing the product eigenfunction
/// `cos(p pi x / a) cos(q pi y / b)` (Neumann) or its sine analogue (Dirichlet).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub p: u64,
    pub q: u64,
}

impl Mode {
    pub const fn new(p: u64, q: u64) -> Self {
        Self { p, q }
    }

    pub fn transposed(self) -> Self {
        Self { p: self.q, q: self.p }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.p, self.q].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [p, q] = <[u64; 2]>::deserialize(d)?;
        Ok(Mode { p, q })
    }
}

/// Sort order used for every mode list: by `q`, then `p`.
pub(crate) fn sort_modes(modes: &mut [Mode]) {
    modes.sort_by_key(|m| (m.q, m.p));
}

/// One distinct eigenvalue together with the modes realizing it.
#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct SpectrumEntry {
    pub value: RootQuotient,
    pub modes: Vec<Mode>,
    pub multiplicity: usize,
    /// Position of the first occurrence of `value` in the ordered spectrum
    /// (0-based list position, counting multiplicity).
    pub first_index: usize,
}

impl SpectrumEntry {
    pub(crate) fn new(value: RootQuotient, mut modes: Vec<Mode>, first_index: usize) -> Self {
        sort_modes(&mut modes);
        Self { multiplicity: modes.len(), value, modes, first_index }
    }
}

impl Serialize for SpectrumEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SpectrumEntry", 5)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("value_float", &self.value.to_decimal(crate::real::DEFAULT_DIGITS))?;
        st.serialize_field("modes", &self.modes)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("first_index", &self.first_index)?;
        st.end()
    }
}

/// Enumeration caps.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_modes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_modes: 20_000_000 }
    }
}

/// The area-1 rectangle `(0, b) x (0, 1/b)` with `w = b^4 >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaRectangle {
    #[serde(with = "crate::exact::rational_str")]
    w: Rational,
}

impl AreaRectangle {
    pub fn new(w: Rational) -> Result<Self> {
        if w < Rational::one() {
            return Err(Error::Precondition(format!("w = {w} must be >= 1 (canonical orientation b >= 1)")));
        }
        Ok(Self { w })
    }

    /// Accepts any positive `w`, replacing `w < 1` by the congruent `1/w`.
    pub fn canonical(w: Rational) -> Result<Self> {
        if !w.is_positive() {
            return Err(Error::Precondition(format!("w = {w} must be positive")));
        }
        Ok(Self { w: if w < Rational::one() { w.recip() } else { w } })
    }

    pub fn square() -> Self {
        Self { w: Rational::one() }
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    /// Side length `b = w^(1/4)`.
    pub fn b(&self, prec: Precision) -> Real {
        Real::from_rational(&self.w, prec).sqrt().sqrt()
    }

    /// Perimeter `2 (b + 1/b)`.
    pub fn perimeter(&self, prec: Precision) -> Real {
        let b = self.b(prec);
        let inv = Real::from_i64(1, prec) / &b;
        (b + inv) * 2
    }

    pub(crate) fn lattice(&self) -> Lattice {
        Lattice { c: self.w.numer().clone(), d: self.w.denom().clone() }
    }
}

/// Integer view of `w = c/d`: an eigenvalue `n / sqrt(w)` has key `n d`.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    pub c: BigInt,
    pub d: BigInt,
}

impl Lattice {
    pub fn key(&self, m: Mode) -> BigInt {
        let p = BigInt::from(m.p);
        let q = BigInt::from(m.q);
        &p * &p * &self.d + &q * &q * &self.c
    }

    pub fn w(&self) -> Rational {
        Rational::new(self.c.clone(), self.d.clone())
    }

    pub fn value(&self, key: &BigInt) -> RootQuotient {
        RootQuotient::new_unchecked(Rational::new(key.clone(), self.d.clone()), self.w())
    }

    /// Largest key whose eigenvalue is `<= bound` (bound in pi^2 units, integer).
    /// `value <= M  <=>  key^2 <= M^2 c d`.
    pub fn key_bound(&self, bound: &BigInt) -> BigInt {
        (bound * bound * &self.c * &self.d).sqrt()
    }

    /// Number of modes with key `<= kmax`; `interior` restricts to `p, q >= 1`.
    pub fn count_keys(&self, kmax: &BigInt, interior: bool) -> BigInt {
        let mut total = BigInt::zero();
        let mut q = BigInt::from(u64::from(interior));
        loop {
            let r = kmax - &q * &q * &self.c;
            if r.is_negative() {
                break;
            }
            let pmax = floor_sqrt(&Rational::new(r, self.d.clone()));
            total += if interior { pmax } else { pmax + 1 };
            q += 1;
        }
        total
    }

    /// All modes with key `<= kmax`, paired with their keys.
    pub fn modes_up_to(&self, kmax: &BigInt, interior: bool, limits: &Limits) -> Result<Vec<(BigInt, Mode)>> {
        let count = self.count_keys(kmax, interior);
        let count = count.to_usize().filter(|&n| n <= limits.max_modes).ok_or_else(|| {
            Error::ResourceLimit(format!("{count} modes exceed the cap of {}", limits.max_modes))
        })?;
        let start = u64::from(interior);
        let mut out = Vec::with_capacity(count);
        let mut q = start;
        loop {
            let qq = BigInt::from(q);
            let r = kmax - &qq * &qq * &self.c;
            if r.is_negative() {
                break;
            }
            let pmax = floor_sqrt(&Rational::new(r, self.d.clone())).to_u64().expect("p fits u64");
            for p in start..=pmax {
                let m = Mode::new(p, q);
                out.push((self.key(m), m));
            }
            q += 1;
        }
        Ok(out)
    }
}

/// `ceil(4k/pi) + 1`, a rational (integer) upper bound on `mu_k / pi^2` for
/// every area-1 rectangle.
pub fn polya_bound_pi2(k: u64) -> BigInt {
    let prec = Precision::default();
    let x = Real::from_u64(4 * k, prec) / Real::pi(prec);
    let fl = x.floor();
    // 4k/pi is irrational for k >= 1, so its ceiling is floor + 1.
    let ceil = if k == 0 { BigInt::zero() } else { fl + 1 };
    ceil + 1
}

pub fn neumann_eigenvalue(mode: Mode, rect: &AreaRectangle) -> RootQuotient {
    let lat = rect.lattice();
    lat.value(&lat.key(mode))
}

pub fn dirichlet_eigenvalue(mode: Mode, rect: &AreaRectangle) -> Result<RootQuotient> {
    if mode.p == 0 || mode.q == 0 {
        return Err(Error::Precondition(format!("Dirichlet mode {mode} needs p, q >= 1")));
    }
    Ok(neumann_eigenvalue(mode, rect))
}

/// Sorted (key, mode) list long enough to contain list position `index`.
fn sorted_prefix(
    lat: &Lattice,
    index: usize,
    interior: bool,
    start_bound: BigInt,
    limits: &Limits,
) -> Result<Vec<(BigInt, Mode)>> {
    let mut bound = start_bound;
    loop {
        let kmax = lat.key_bound(&bound);
        let count = lat.count_keys(&kmax, interior);
        if count > BigInt::from(index) {
            let mut modes = lat.modes_up_to(&kmax, interior, limits)?;
            modes.sort_unstable_by(|a, b| a.0.cmp(&b.0).then((a.1.q, a.1.p).cmp(&(b.1.q, b.1.p))));
            return Ok(modes);
        }
        bound *= 2;
    }
}

fn entry_at(lat: &Lattice, sorted: &[(BigInt, Mode)], index: usize) -> SpectrumEntry {
    let key = &sorted[index].0;
    let first = sorted.partition_point(|(k, _)| k < key);
    let modes: Vec<Mode> = sorted[first..].iter().take_while(|(k, _)| k == key).map(|(_, m)| *m).collect();
    SpectrumEntry::new(lat.value(key), modes, first)
}

/// The entry holding `mu_k` (0-indexed, `mu_0 = 0`), counting multiplicity.
pub fn kth_eigenvalue(k: usize, rect: &AreaRectangle) -> Result<SpectrumEntry> {
    kth_eigenvalue_with(k, rect, &Limits::default())
}

pub fn kth_eigenvalue_with(k: usize, rect: &AreaRectangle, limits: &Limits) -> Result<SpectrumEntry> {
    let lat = rect.lattice();
    let sorted = sorted_prefix(&lat, k, false, polya_bound_pi2(k as u64), limits)?;
    Ok(entry_at(&lat, &sorted, k))
}

/// `mu_0, ..., mu_{count-1}` in pi^2 units.
pub fn neumann_spectrum(rect: &AreaRectangle, count: usize, limits: &Limits) -> Result<Vec<RootQuotient>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let lat = rect.lattice();
    let sorted = sorted_prefix(&lat, count - 1, false, polya_bound_pi2(count as u64 - 1), limits)?;
    Ok(sorted[..count].iter().map(|(key, _)| lat.value(key)).collect())
}

/// The entry holding `lambda_k` (1-indexed). `first_index` is the 0-based
/// list position of the first occurrence.
pub fn kth_dirichlet(k: usize, rect: &AreaRectangle) -> Result<SpectrumEntry> {
    kth_dirichlet_with(k, rect, &Limits::default())
}

pub fn kth_dirichlet_with(k: usize, rect: &AreaRectangle, limits: &Limits) -> Result<SpectrumEntry> {
    if k == 0 {
        return Err(Error::Precondition("Dirichlet eigenvalues are 1-indexed".into()));
    }
    let lat = rect.lattice();
    let sorted = sorted_prefix(&lat, k - 1, true, polya_bound_pi2(k as u64) + 2, limits)?;
    Ok(entry_at(&lat, &sorted, k - 1))
}

/// `lambda_1, ..., lambda_count` in pi^2 units.
pub fn dirichlet_spectrum(rect: &AreaRectangle, count: usize, limits: &Limits) -> Result<Vec<RootQuotient>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let lat = rect.lattice();
    let sorted = sorted_prefix(&lat, count - 1, true, polya_bound_pi2(count as u64) + 2, limits)?;
    Ok(sorted[..count].iter().map(|(key, _)| lat.value(key)).collect())
}
