//! Area-1 rectangles: the maximal k-th Neumann eigenvalue and the minimal
//! k-th Dirichlet eigenvalue, solved exactly over a finite candidate set.
//!
//! Along the family `s = b^2`, each eigenvalue curve `p^2/s + q^2 s` is
//! strictly convex, so the k-th eigenvalue is continuous and piecewise convex.
//! Its maxima therefore sit where two curves cross (or at the symmetric
//! square `w = 1`), and its minima sit at crossings, at the bottom of a single
//! curve, or at `w = 1`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::{self, crossing, modes_on_curve, select, Candidate};
use super::{OptConfig, OptimumReport, Optimizer, Sense};
use crate::error::{Error, Result};
use crate::exact::{rational_str, Rational, RootQuotient};
use crate::real::Real;
use crate::spectrum::{kth_dirichlet_with, kth_eigenvalue_with, polya_bound_pi2, AreaRectangle, Mode};

/// Two eigenvalue curves meeting at `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub mode_a: Mode,
    pub mode_b: Mode,
    #[serde(with = "rational_str")]
    pub w: Rational,
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    Ok(())
}

fn square_value(entry_value: &RootQuotient) -> u128 {
    entry_value.n().to_integer().to_u128().expect("square eigenvalue fits u128")
}

/// `S_k = k^2 / n_k`, with `n_k` the k-th eigenvalue of the unit square in
/// pi^2 units. Beyond `w = S_k^2` the modes `(0,0), ..., (k,0)` force
/// `mu_k <= k^2 / sqrt(w) < n_k`, so maximizers satisfy `w <= S_k^2`.
pub fn search_bound(k: u64) -> Result<Rational> {
    check_k(k)?;
    let nk = kth_eigenvalue_with(k as usize, &AreaRectangle::square(), &Default::default())?;
    Ok(Rational::from_integer(BigInt::from(k).pow(2)) / nk.value.n())
}

/// Modes that can hold list position `pos`: the `(p+1)(q+1) - 1` modes
/// below `(p, q)` componentwise all have strictly smaller eigenvalues.
fn box_modes(pos: u64, interior: bool) -> Vec<Mode> {
    let mut out = Vec::new();
    if interior {
        // p, q >= 1 and the p q - 1 interior modes below (p, q) precede it.
        for q in 1..=pos + 1 {
            for p in 1..=(pos + 1) / q {
                out.push(Mode::new(p, q));
            }
        }
    } else {
        for q in 0..=pos {
            for p in 0..=((pos + 1) / (q + 1) - 1) {
                out.push(Mode::new(p, q));
            }
        }
    }
    out
}

/// Value window and `w` range for crossing candidates, as exact integer tests.
struct Window {
    /// `V >= lo` (optional).
    lo: Option<u128>,
    /// `V <= hi`.
    hi: u128,
    /// `w <= wmax_num / wmax_den`.
    wmax_num: u128,
    wmax_den: u128,
}

impl Window {
    fn admits(&self, cand: &Candidate) -> Result<bool> {
        use lattice::mul;
        if cand.c < cand.d || mul(cand.c, self.wmax_den)? > mul(self.wmax_num, cand.d)? {
            return Ok(false);
        }
        let k2 = mul(cand.key, cand.key)?;
        let cd = mul(cand.c, cand.d)?;
        if k2 > mul(mul(self.hi, self.hi)?, cd)? {
            return Ok(false);
        }
        if let Some(lo) = self.lo {
            if k2 < mul(mul(lo, lo)?, cd)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn crossing_candidates(modes: &[Mode], win: &Window) -> Result<Vec<(Candidate, Mode, Mode)>> {
    // Group by q so that each mode only meets partners with larger q and smaller p.
    let mut rows: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut sorted = modes.to_vec();
    sorted.sort_by_key(|m| (m.q, m.p));
    for m in &sorted {
        match rows.last_mut() {
            Some((q, ps)) if *q == m.q => ps.push(m.p),
            _ => rows.push((m.q, vec![m.p])),
        }
    }
    let per_mode: Vec<Result<Vec<(Candidate, Mode, Mode)>>> = sorted
        .par_iter()
        .map(|&a| {
            let mut out = Vec::new();
            let start = rows.partition_point(|(q, _)| *q <= a.q);
            for (q, ps) in &rows[start..] {
                for &p in ps.iter().take_while(|&&p| p < a.p) {
                    let b = Mode::new(p, *q);
                    let c = crossing(a, b)?;
                    if win.admits(&c)? {
                        out.push((c.reduced(), a, b));
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for v in per_mode {
        all.extend(v?);
    }
    Ok(all)
}

/// Neumann modes whose curve `p^2/s + q^2 s` can take a value in `[n_k, M]`
/// (or `[0, M]` without `floor`) for some `s = sqrt(w)` in `[1, S_k]`, where
/// `S_k = k^2 / n_k`.
fn neumann_modes(k: u64, nk: u128, m: u128, floor: bool) -> Result<Vec<Mode>> {
    use lattice::mul;
    let k2 = u128::from(k) * u128::from(k);
    let mut out = Vec::new();
    for mode in box_modes(k, false) {
        let (p2, q2) = (u128::from(mode.p).pow(2), u128::from(mode.q).pow(2));
        if q2 > m {
            continue;
        }
        // Curve values at the ends, scaled by k^2 n_k: f(1) and f(S_k).
        let at_one = mul(p2 + q2, mul(k2, nk)?)?;
        let at_s = mul(p2, nk * nk)? + mul(q2, k2 * k2)?;
        let lo = mul(nk, mul(k2, nk)?)?;
        let hi = mul(m, mul(k2, nk)?)?;
        if floor && at_one < lo && at_s < lo {
            continue;
        }
        // Minimum over the interval: 2pq when p/q lies in [1, S_k], else an end value.
        let (p, q) = (u128::from(mode.p), u128::from(mode.q));
        let interior_min = q > 0 && p >= q && mul(p, nk)? <= mul(q, k2)?;
        let min_scaled = if interior_min { mul(2 * p * q, mul(k2, nk)?)? } else { at_one.min(at_s) };
        if min_scaled <= hi {
            out.push(mode);
        }
    }
    Ok(out)
}

fn to_u128(x: &BigInt) -> Result<u128> {
    x.to_u128().ok_or_else(|| Error::ResourceLimit("value exceeds 128-bit integers".into()))
}

/// Neumann setup: `(n_k, S_k^2 as num/den, M)`.
fn neumann_window(k: u64, cfg: &OptConfig) -> Result<(u128, Rational, u128)> {
    let nk = square_value(&kth_eigenvalue_with(k as usize, &AreaRectangle::square(), &cfg.limits)?.value);
    let s = Rational::new(BigInt::from(k).pow(2), BigInt::from(nk));
    let m = to_u128(&polya_bound_pi2(k))?;
    Ok((nk, &s * &s, m))
}

/// Every crossing `w in [1, S_k^2]` of two modes that can be the k-th
/// eigenvalue, with common value at most the Pólya bound. Sorted by `w`.
pub fn enumerate_crossings(k: u64) -> Result<Vec<Crossing>> {
    check_k(k)?;
    let cfg = OptConfig::default();
    let (nk, wmax, m) = neumann_window(k, &cfg)?;
    let win = Window { lo: None, hi: m, wmax_num: to_u128(wmax.numer())?, wmax_den: to_u128(wmax.denom())? };
    let mut cands = crossing_candidates(&neumann_modes(k, nk, m, false)?, &win)?;
    cands.sort_by(|x, y| x.0.cmp_w(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    Ok(cands
        .into_iter()
        .map(|(c, a, b)| Crossing {
            mode_a: a,
            mode_b: b,
            w: Rational::new(BigInt::from(c.c), BigInt::from(c.d)),
        })
        .collect())
}

fn report(k: u64, sense: Sense, winners: Vec<Candidate>, interior: bool, wmax: Rational, cfg: &OptConfig) -> OptimumReport {
    let digits = cfg.precision.get();
    let optimizers: Vec<Optimizer> = winners
        .iter()
        .map(|c| {
            let w = Rational::new(BigInt::from(c.c), BigInt::from(c.d));
            let modes = modes_on_curve(c, interior);
            let mut mode_pairs = Vec::new();
            for i in 0..modes.len() {
                for j in i + 1..modes.len() {
                    mode_pairs.push((modes[i], modes[j]));
                }
            }
            let b = Real::from_rational(&w, cfg.precision).sqrt().sqrt();
            Optimizer { b_float: b.to_decimal(digits), w, modes, mode_pairs }
        })
        .collect();
    let first = &winners[0];
    let value = RootQuotient::new(
        Rational::new(BigInt::from(first.key), BigInt::from(first.d)),
        Rational::new(BigInt::from(first.c), BigInt::from(first.d)),
    )
    .expect("positive radicand");
    OptimumReport { k, sense, value_float: value.to_decimal(digits), value, optimizers, search_bound_w: wmax }
}

/// `sup { mu_k(R_b) : b >= 1 }` together with every optimal `w = b^4`.
pub fn maximize_mu_k(k: u64) -> Result<OptimumReport> {
    maximize_mu_k_with(k, &OptConfig::default())
}

pub fn maximize_mu_k_with(k: u64, cfg: &OptConfig) -> Result<OptimumReport> {
    check_k(k)?;
    let (nk, wmax, m) = neumann_window(k, cfg)?;
    let win = Window { lo: Some(nk), hi: m, wmax_num: to_u128(wmax.numer())?, wmax_den: to_u128(wmax.denom())? };
    let modes = neumann_modes(k, nk, m, true)?;
    if modes.len() > cfg.limits.max_modes {
        return Err(Error::ResourceLimit(format!("{} candidate modes exceed the cap", modes.len())));
    }
    let mut cands: Vec<Candidate> = crossing_candidates(&modes, &win)?.into_iter().map(|t| t.0).collect();
    cands.push(Candidate::new(1, 1, nk));
    let winners = select(cands, u128::from(k), false, Sense::Max)?;
    if winners.is_empty() {
        return Err(Error::Mismatch(format!("no candidate holds position {k}")));
    }
    Ok(report(k, Sense::Max, winners, false, wmax, cfg))
}

/// `inf { lambda_k(R_b) : b >= 1 }` (Dirichlet, 1-indexed).
///
/// Search interval: every Dirichlet mode has `q >= 1`, so
/// `lambda_k(w) >= sqrt(w)`, and `w > d_k^2` cannot beat the square's `d_k`.
pub fn minimize_dirichlet_lambda_k(k: u64) -> Result<OptimumReport> {
    minimize_dirichlet_lambda_k_with(k, &OptConfig::default())
}

pub fn minimize_dirichlet_lambda_k_with(k: u64, cfg: &OptConfig) -> Result<OptimumReport> {
    check_k(k)?;
    let dk = square_value(&kth_dirichlet_with(k as usize, &AreaRectangle::square(), &cfg.limits)?.value);
    let wmax = Rational::from_integer(BigInt::from(dk).pow(2));
    let win = Window { lo: None, hi: dk, wmax_num: dk * dk, wmax_den: 1 };
    let modes = box_modes(k - 1, true);
    if modes.len() > cfg.limits.max_modes {
        return Err(Error::ResourceLimit(format!("{} candidate modes exceed the cap", modes.len())));
    }
    let mut cands: Vec<Candidate> = crossing_candidates(&modes, &win)?.into_iter().map(|t| t.0).collect();
    // Bottom of the curve of (p, q): w = (p/q)^2, value 2 p q.
    for m in &modes {
        if m.p >= m.q {
            let (p, q) = (u128::from(m.p), u128::from(m.q));
            let c = Candidate::new(p * p, q * q, 2 * p * p * q * q);
            if win.admits(&c)? {
                cands.push(c);
            }
        }
    }
    cands.push(Candidate::new(1, 1, dk));
    let winners = select(cands, u128::from(k - 1), true, Sense::Min)?;
    if winners.is_empty() {
        return Err(Error::Mismatch(format!("no candidate holds Dirichlet position {k}")));
    }
    Ok(report(k, Sense::Min, winners, true, wmax, cfg))
}

/// `k(n) = sum_{l >= 0} floor(sqrt((4^n - l^2)_+)) + 2^n - 1` for `n = 0..=n_max`,
/// the indices for which the unit square is the expected maximizer.
pub fn conjecture_indices(n_max: u32) -> Result<Vec<(u32, u128)>> {
    if n_max > 30 {
        return Err(Error::ResourceLimit("n_max > 30 exceeds the supported range".into()));
    }
    Ok((0..=n_max)
        .map(|n| {
            use num_integer::Roots;
            let r2: u128 = 1u128 << (2 * n);
            let mut total: u128 = 0;
            let mut l: u128 = 0;
            while l * l <= r2 {
                total += (r2 - l * l).sqrt();
                l += 1;
            }
            (n, total + (1u128 << n) - 1)
        })
        .collect())
}
