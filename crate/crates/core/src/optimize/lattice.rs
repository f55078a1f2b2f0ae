//! Fixed-width integer machinery shared by the area optimizers.
//!
//! A candidate rectangle is `w = c/d` (lowest terms) and a candidate value is
//! a key `N = p^2 d + q^2 c`, meaning the eigenvalue `N / sqrt(c d)` in pi^2
//! units. All comparisons and counts are exact in `u128`; overflow surfaces
//! as a resource-limit error.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use rayon::prelude::*;

use super::Sense;
use crate::error::{Error, Result};
use crate::spectrum::Mode;

fn overflow() -> Error {
    Error::ResourceLimit("exact arithmetic exceeds 128-bit integers".into())
}

pub(crate) fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or_else(overflow)
}

fn sq(x: u64) -> u128 {
    u128::from(x) * u128::from(x)
}

#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub c: u128,
    pub d: u128,
    pub key: u128,
    pub approx: f64,
}

impl Candidate {
    /// Unreduced candidate; the value and the ratio `c/d` are what matter.
    pub fn raw(c: u128, d: u128, key: u128) -> Self {
        Self { c, d, key, approx: 0.0 }
    }

    pub fn reduced(self) -> Self {
        Self::new(self.c, self.d, self.key)
    }

    pub fn new(c: u128, d: u128, key: u128) -> Self {
        let g = c.gcd(&d);
        let (c, d) = (c / g, d / g);
        let key = key / g;
        let approx = key as f64 / ((c as f64) * (d as f64)).sqrt();
        Self { c, d, key, approx }
    }

    /// Exact comparison of the values `key / sqrt(c d)`.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let l = BigUint::from(self.key).pow(2) * BigUint::from(other.c) * BigUint::from(other.d);
        let r = BigUint::from(other.key).pow(2) * BigUint::from(self.c) * BigUint::from(self.d);
        l.cmp(&r)
    }

    pub fn same_w(&self, other: &Self) -> bool {
        self.c == other.c && self.d == other.d
    }

    pub fn cmp_w(&self, other: &Self) -> Ordering {
        if let (Some(l), Some(r)) = (self.c.checked_mul(other.d), other.c.checked_mul(self.d)) {
            return l.cmp(&r);
        }
        (BigUint::from(self.c) * BigUint::from(other.d)).cmp(&(BigUint::from(other.c) * BigUint::from(self.d)))
    }
}

/// The crossing of `a` and `b` (requires `a.p > b.p`, `b.q > a.q`), as a
/// candidate at `w = (pa^2 - pb^2) / (qb^2 - qa^2)`.
pub(crate) fn crossing(a: Mode, b: Mode) -> Result<Candidate> {
    let p = sq(a.p) - sq(b.p);
    let q = sq(b.q) - sq(a.q);
    let key = mul(sq(a.p), q)?.checked_add(mul(sq(a.q), p)?).ok_or_else(overflow)?;
    Ok(Candidate::raw(p, q, key))
}

/// Number of modes with key `<= kmax` at `w = c/d`; the origin is included
/// unless `interior`, which restricts to `p, q >= 1`. Counting stops once the
/// total exceeds `cap`.
pub(crate) fn count_le(c: u128, d: u128, kmax: u128, interior: bool, cap: u128) -> Result<u128> {
    const FAST: u128 = 1 << 52;
    if kmax < FAST && c < FAST && d < FAST {
        return Ok(u128::from(count_le_u64(c as u64, d as u64, kmax as u64, interior, cap.min(FAST) as u64)));
    }
    count_le_wide(c, d, kmax, interior, cap)
}

fn count_le_wide(c: u128, d: u128, kmax: u128, interior: bool, cap: u128) -> Result<u128> {
    let mut total: u128 = 0;
    let mut q: u128 = u128::from(interior);
    loop {
        let qc = mul(mul(q, q)?, c)?;
        let Some(r) = kmax.checked_sub(qc) else { break };
        let pmax = (r / d).sqrt();
        total += if interior { pmax } else { pmax + 1 };
        if total > cap {
            break;
        }
        q += 1;
    }
    Ok(total)
}

/// `floor(sqrt(x))` for `x < 2^52` via a corrected float root.
fn isqrt52(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn count_le_u64(c: u64, d: u64, kmax: u64, interior: bool, cap: u64) -> u64 {
    let mut total = 0;
    let mut q = u64::from(interior);
    while let Some(r) = q.checked_mul(q).and_then(|qq| qq.checked_mul(c)).and_then(|qc| kmax.checked_sub(qc)) {
        let pmax = isqrt52(r / d);
        total += if interior { pmax } else { pmax + 1 };
        if total > cap {
            break;
        }
        q += 1;
    }
    total
}

/// Whether the value `key` is the eigenvalue at 0-based list position `pos`.
pub(crate) fn is_member(cand: &Candidate, pos: u128, interior: bool) -> Result<bool> {
    let below = if cand.key == 0 { 0 } else { count_le(cand.c, cand.d, cand.key - 1, interior, pos)? };
    if below > pos {
        return Ok(false);
    }
    Ok(count_le(cand.c, cand.d, cand.key, interior, pos)? > pos)
}

/// Modes on the curve `key` at `w = c/d`.
pub(crate) fn modes_on_curve(cand: &Candidate, interior: bool) -> Vec<Mode> {
    let mut out = Vec::new();
    let mut q: u128 = u128::from(interior);
    while let Some(r) = cand.key.checked_sub(q * q * cand.c) {
        if r % cand.d == 0 {
            let x = r / cand.d;
            let p = x.sqrt();
            if p * p == x && (!interior || p >= 1) {
                out.push(Mode::new(p as u64, q as u64));
            }
        }
        q += 1;
    }
    crate::spectrum::sort_modes(&mut out);
    out
}

/// Candidates attaining the exact optimum of the value at list position
/// `pos` over `cands`.
///
/// Candidates are visited in approximate order of value; the first that
/// holds position `pos` fixes the optimum up to floating error, and only the
/// few candidates within that error band need exact comparison.
pub(crate) fn select(mut cands: Vec<Candidate>, pos: u128, interior: bool, sense: Sense) -> Result<Vec<Candidate>> {
    match sense {
        Sense::Max => cands.par_sort_unstable_by(|a, b| b.approx.total_cmp(&a.approx)),
        Sense::Min => cands.par_sort_unstable_by(|a, b| a.approx.total_cmp(&b.approx)),
    }
    const REL: f64 = 1e-9;
    let mut first = None;
    for (i, c) in cands.iter().enumerate() {
        if is_member(c, pos, interior)? {
            first = Some(i);
            break;
        }
    }
    let Some(i0) = first else { return Ok(Vec::new()) };
    let edge = cands[i0].approx;
    let within = |x: f64| (x - edge).abs() <= REL * edge.abs().max(1.0);
    let mut members = vec![cands[i0].clone()];
    for c in cands[i0 + 1..].iter().take_while(|c| within(c.approx)) {
        if is_member(c, pos, interior)? {
            members.push(c.clone());
        }
    }
    let better = |a: &Candidate, b: &Candidate| match sense {
        Sense::Max => a.cmp_value(b) == Ordering::Greater,
        Sense::Min => a.cmp_value(b) == Ordering::Less,
    };
    let mut best = members[0].clone();
    for m in &members[1..] {
        if better(m, &best) {
            best = m.clone();
        }
    }
    let mut winners: Vec<Candidate> =
        members.into_iter().filter(|m| m.cmp_value(&best) == Ordering::Equal).collect();
    winners.sort_by(|a, b| a.cmp_w(b));
    winners.dedup_by(|a, b| a.same_w(b));
    Ok(winners)
}
