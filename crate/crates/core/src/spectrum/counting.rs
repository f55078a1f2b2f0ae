//! Lattice counting functions `N` (first quadrant, origin excluded) and
//! `N0` (all of Z^2), evaluated exactly.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{AreaRectangle, Lattice, Mode, SpectrumEntry};
use crate::exact::{exact_sqrt, Rational, RootQuotient};

/// Lattice points of the closed first quadrant under the curve, split by
/// where they sit. The origin is not included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrantCounts {
    pub interior: BigInt,
    pub x_axis: BigInt,
    pub y_axis: BigInt,
}

impl QuadrantCounts {
    pub fn n(&self) -> BigInt {
        &self.interior + &self.x_axis + &self.y_axis
    }

    pub fn n0(&self) -> BigInt {
        &self.interior * 4 + (&self.x_axis + &self.y_axis) * 2 + 1
    }
}

/// `d^2 (n_mu^2 w / w_mu)`: a mode is under the curve iff `key^2` is at most this.
fn key_square_bound(mu: &RootQuotient, lat: &Lattice) -> Rational {
    let d = Rational::from_integer(lat.d.clone());
    mu.n() * mu.n() * lat.w() / mu.w() * &d * &d
}

/// Largest key of a mode whose eigenvalue is `<= mu`, and whether equality
/// with `mu` is attainable by some integer key.
pub(crate) fn key_limit(mu: &RootQuotient, lat: &Lattice) -> (BigInt, bool) {
    let sq = key_square_bound(mu, lat);
    let fl = sq.floor().to_integer();
    let root = fl.sqrt();
    let on_curve = sq.is_integer() && &root * &root == fl;
    (root, on_curve)
}

pub fn quadrant_counts(mu: &RootQuotient, rect: &AreaRectangle) -> QuadrantCounts {
    let lat = rect.lattice();
    let (kmax, _) = key_limit(mu, &lat);
    quadrant_counts_key(&lat, &kmax)
}

pub(crate) fn quadrant_counts_key(lat: &Lattice, kmax: &BigInt) -> QuadrantCounts {
    if kmax.is_negative() {
        return QuadrantCounts { interior: BigInt::zero(), x_axis: BigInt::zero(), y_axis: BigInt::zero() };
    }
    let x_axis = (kmax / &lat.d).sqrt();
    let y_axis = (kmax / &lat.c).sqrt();
    let interior = lat.count_keys(kmax, true);
    QuadrantCounts { interior, x_axis, y_axis }
}

/// `N(mu)`: modes `(x, y) != (0, 0)` with eigenvalue `<= mu`.
pub fn count_n(mu: &RootQuotient, rect: &AreaRectangle) -> BigInt {
    quadrant_counts(mu, rect).n()
}

/// `N0(mu)`: points of Z^2 (origin included) with eigenvalue `<= mu`.
pub fn count_n0(mu: &RootQuotient, rect: &AreaRectangle) -> BigInt {
    quadrant_counts(mu, rect).n0()
}

/// All modes whose eigenvalue equals `mu` exactly. `first_index` is the
/// number of eigenvalues strictly below `mu` (origin included).
pub fn multiplicity_on_curve(mu: &RootQuotient, rect: &AreaRectangle) -> SpectrumEntry {
    let lat = rect.lattice();
    let (kmax, on_curve) = key_limit(mu, &lat);
    let below = if on_curve { &kmax - 1 } else { kmax.clone() };
    let first_index = if below.is_negative() { 0 } else { lat.count_keys(&below, false).to_usize().unwrap_or(usize::MAX) };
    if !on_curve {
        return SpectrumEntry::new(mu.clone(), Vec::new(), first_index);
    }
    let mut modes = Vec::new();
    let mut q = BigInt::zero();
    loop {
        let r = &kmax - &q * &q * &lat.c;
        if r.is_negative() {
            break;
        }
        if (&r % &lat.d).is_zero() {
            if let Some(p) = exact_sqrt(&(&r / &lat.d)) {
                modes.push(Mode::new(p.to_u64().expect("p fits u64"), q.to_u64().expect("q fits u64")));
            }
        }
        q += 1;
    }
    SpectrumEntry::new(mu.clone(), modes, first_index)
}
