//! Rectangles with sides `a` and `2 - a` (perimeter 4), `a in (0, 1]`.
//!
//! Each eigenvalue curve `a -> p^2/(2-a)^2 + q^2/a^2` is convex, so the k-th
//! eigenvalue is continuous and piecewise convex in `a`. Its extrema lie at
//! crossings of two curves, at the bottom of one curve, at `a = 1`, or in the
//! degenerate limit `a -> 0` where `mu_k -> k^2/4`. All of these have closed
//! forms in `t = a/(2-a)`:
//!
//! * crossing of `(pa,qa)` and `(pb,qb)`: `t^2 = (qb^2 - qa^2)/(pa^2 - pb^2)`,
//! * bottom of `(p,q)`: `t^3 = q^2/p^2`,
//!
//! and `a = 2t/(1+t)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::Sense;
use crate::error::{Error, Result};
use crate::exact::{rational_string, Rational};
use crate::real::{ten_pow_neg, Precision, Real};
use crate::spectrum::{kth_perimeter, perimeter_eigenvalue, Mode, PerimeterRectangle, PERIMETER_TIE_DIGITS};

/// Relative slack of the floating-point prefilter.
const PREFILTER: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Origin {
    Crossing { a: Mode, b: Mode, rho: (u128, u128) },
    Bottom { mode: Mode },
    Endpoint,
}

#[derive(Clone, Debug)]
struct Cand {
    origin: Origin,
    a: f64,
    value: f64,
}

fn sq(x: u64) -> u128 {
    u128::from(x) * u128::from(x)
}

fn a_of_t(t: f64) -> f64 {
    2.0 * t / (1.0 + t)
}

fn value_f64(m: Mode, a: f64) -> f64 {
    let (p, q) = (m.p as f64, m.q as f64);
    p * p / ((2.0 - a) * (2.0 - a)) + q * q / (a * a)
}

impl Cand {
    fn crossing(a: Mode, b: Mode) -> Option<Self> {
        let num = sq(b.q) - sq(a.q);
        let den = sq(a.p) - sq(b.p);
        if num > den {
            return None;
        }
        let g = num.gcd(&den);
        let rho = (num / g, den / g);
        let at = a_of_t((rho.0 as f64 / rho.1 as f64).sqrt());
        Some(Self { origin: Origin::Crossing { a, b, rho }, a: at, value: value_f64(a, at) })
    }

    fn bottom(mode: Mode) -> Self {
        let t = (mode.q as f64 / mode.p as f64).powf(2.0 / 3.0);
        let at = a_of_t(t);
        Self { origin: Origin::Bottom { mode }, a: at, value: value_f64(mode, at) }
    }

    /// `a` at full precision.
    fn a_real(&self, prec: Precision) -> Real {
        let one = Real::from_i64(1, prec);
        let t = match &self.origin {
            Origin::Crossing { rho, .. } => Real::from_rational(&ratio(rho.0, rho.1), prec).sqrt(),
            Origin::Bottom { mode } => Real::from_rational(&ratio(sq(mode.q), sq(mode.p)), prec).cbrt(),
            Origin::Endpoint => return one,
        };
        &t * 2 / (t + one)
    }

    /// Closed form of `a` as text.
    fn a_exact(&self) -> String {
        match &self.origin {
            Origin::Endpoint => "1".into(),
            Origin::Crossing { rho: (c, d), .. } => crossing_tag(*c, *d),
            Origin::Bottom { mode } => {
                let g = mode.p.gcd(&mode.q);
                let (u, v) = (mode.q / g, mode.p / g);
                if u == v {
                    "1".into()
                } else {
                    format!("2t/(1+t), t=({u}/{v})^(2/3)")
                }
            }
        }
    }
}

fn ratio(n: u128, d: u128) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `a = 2t/(1+t)` with `t = sqrt(c/d)`, i.e. `a = 2 (sqrt(cd) - c) / (d - c)`.
fn crossing_tag(c: u128, d: u128) -> String {
    if c == d {
        return "1".into();
    }
    let cd = c * d;
    let s = num_integer::Roots::sqrt(&cd);
    if s * s == cd {
        return rational_string(&ratio(2 * s, d + s));
    }
    let f = ratio(2, d - c);
    let (u, v) = (f.numer().clone(), f.denom().clone());
    let core = format!("sqrt({cd})-{c}");
    match (u == BigInt::from(1), v == BigInt::from(1)) {
        (true, true) => core,
        (false, true) => format!("{u}*({core})"),
        (true, false) => format!("({core})/{v}"),
        (false, false) => format!("{u}*({core})/{v}"),
    }
}

/// Modes that can hold position `k`: `(p+1)(q+1) <= k+1`.
fn box_modes(k: u64) -> Vec<Mode> {
    let mut out = Vec::new();
    for q in 0..=k {
        for p in 0..=((k + 1) / (q + 1) - 1) {
            out.push(Mode::new(p, q));
        }
    }
    out
}

fn polya_f64(k: u64, a: f64) -> f64 {
    4.0 * k as f64 / (std::f64::consts::PI * a * (2.0 - a))
}

fn crossing_cands(k: u64) -> Vec<Cand> {
    let modes = box_modes(k);
    modes
        .par_iter()
        .flat_map_iter(|&a| {
            let modes = &modes;
            modes.iter().filter_map(move |&b| {
                if a.p > b.p && b.q > a.q {
                    Cand::crossing(a, b).filter(|c| c.value <= polya_f64(k, c.a) * (1.0 + PREFILTER))
                } else {
                    None
                }
            })
        })
        .collect()
}

/// Rows of the lattice count `#{(p,q) : value <= x}` at side `a`, in `f64`.
fn count_f64(a: f64, x: f64, cap: u64) -> u64 {
    if x < 0.0 {
        return 0;
    }
    let long = 2.0 - a;
    let mut total = 0u64;
    let mut q = 0u64;
    loop {
        let rest = x - (q as f64 / a).powi(2);
        if rest < 0.0 {
            break;
        }
        total += (long * rest.sqrt()).floor() as u64 + 1;
        if total > cap {
            break;
        }
        q += 1;
    }
    total
}

/// Loose membership test: could `value` be `mu_k` at `a`?
fn plausible(c: &Cand, k: u64) -> bool {
    count_f64(c.a, c.value * (1.0 - PREFILTER), k) <= k && count_f64(c.a, c.value * (1.0 + PREFILTER), k) > k
}

/// High-precision view of one candidate: `a`, `mu_k(a)`, and whether the
/// candidate's own curve value equals `mu_k(a)` within the tie tolerance.
struct Verified {
    cand: Cand,
    a: Real,
    value: Real,
}

fn own_value(c: &Cand, rect: &PerimeterRectangle) -> Option<Real> {
    match &c.origin {
        Origin::Crossing { a, .. } => Some(perimeter_eigenvalue(*a, rect)),
        Origin::Bottom { mode } => Some(perimeter_eigenvalue(*mode, rect)),
        Origin::Endpoint => None,
    }
}

fn verify(c: &Cand, k: u64, prec: Precision) -> Result<Option<Verified>> {
    let a = c.a_real(prec);
    let rect = PerimeterRectangle::new(a.clone())?;
    let entry = kth_perimeter(k as usize, &rect);
    let tol = ten_pow_neg(PERIMETER_TIE_DIGITS, prec);
    match own_value(c, &rect) {
        Some(v) if (&v - &entry.value).abs() > tol => Ok(None),
        _ => Ok(Some(Verified { cand: c.clone(), a, value: entry.value })),
    }
}

/// Candidates attaining the optimum of `mu_k`, in the spirit of the exact
/// area selection: visit in approximate order, verify at full precision,
/// then settle the floating-point band exactly.
fn select(mut cands: Vec<Cand>, k: u64, sense: Sense, prec: Precision) -> Result<Vec<Verified>> {
    match sense {
        Sense::Max => cands.sort_by(|x, y| y.value.total_cmp(&x.value).then(x.a.total_cmp(&y.a))),
        Sense::Min => cands.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.a.total_cmp(&y.a))),
    }
    let mut found: Vec<Verified> = Vec::new();
    let mut edge: Option<f64> = None;
    for c in &cands {
        if let Some(e) = edge {
            if (c.value - e).abs() > 1e-7 * e.abs().max(1.0) {
                break;
            }
        }
        if !matches!(c.origin, Origin::Endpoint) && !plausible(c, k) {
            continue;
        }
        if let Some(v) = verify(c, k, prec)? {
            edge.get_or_insert(c.value);
            found.push(v);
        }
    }
    if found.is_empty() {
        return Ok(found);
    }
    let tol = ten_pow_neg(PERIMETER_TIE_DIGITS, prec);
    let best = found
        .iter()
        .map(|v| v.value.clone())
        .reduce(|x, y| match sense {
            Sense::Max => x.max(y),
            Sense::Min => x.min(y),
        })
        .expect("nonempty");
    let mut winners: Vec<Verified> = found.into_iter().filter(|v| (&v.value - &best).abs() <= tol).collect();
    winners.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    winners.dedup_by(|x, y| (&x.a - &y.a).abs() <= tol);
    Ok(winners)
}

/// One optimal rectangle of a perimeter problem.
#[derive(Clone, Debug, Serialize)]
pub struct PerimeterOptimizer {
    pub a: String,
    pub a_exact: String,
    pub long_side: String,
    pub modes: Vec<Mode>,
    pub mode_pairs: Vec<(Mode, Mode)>,
    #[serde(skip)]
    pub a_real: Real,
}

/// Degeneration witness for a non-attained infimum.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub sequence: String,
    pub samples: Vec<WitnessSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessSample {
    pub n: u64,
    pub a: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerimeterOptimum {
    pub k: u64,
    pub sense: Sense,
    pub attained: bool,
    /// Optimal value (or infimum) in units of pi^2.
    pub value: String,
    pub value_float: f64,
    pub optimizers: Vec<PerimeterOptimizer>,
    /// Points of `(0, 1)` where the mode realizing `mu_k` changes, ascending.
    pub breakpoints: Vec<String>,
    pub witness: Option<Witness>,
    /// Every rectangle here has perimeter 4; a rectangle of perimeter `P`
    /// scales all eigenvalues by `(4/P)^2`.
    pub perimeter: u32,
    #[serde(skip)]
    pub value_real: Real,
}

impl PerimeterOptimum {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("optimum serializes")
    }

    pub fn a_star(&self) -> Option<&Real> {
        self.optimizers.first().map(|o| &o.a_real)
    }
}

fn pairs(modes: &[Mode]) -> Vec<(Mode, Mode)> {
    let mut out = Vec::new();
    for i in 0..modes.len() {
        for j in i + 1..modes.len() {
            out.push((modes[i], modes[j]));
        }
    }
    out
}

fn optimizer(a: Real, a_exact: String, k: u64) -> PerimeterOptimizer {
    let digits = a.precision().get();
    let rect = PerimeterRectangle::new(a.clone()).expect("a in (0, 1]");
    let modes = kth_perimeter(k as usize, &rect).modes;
    PerimeterOptimizer {
        a: a.to_decimal(digits),
        a_exact,
        long_side: rect.long_side().to_decimal(digits),
        mode_pairs: pairs(&modes),
        modes,
        a_real: a,
    }
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    Ok(())
}

fn min_cands(k: u64, prec: Precision) -> Vec<Cand> {
    let mut cands = crossing_cands(k);
    for m in box_modes(k) {
        if m.p >= m.q && m.q >= 1 {
            let c = Cand::bottom(m);
            if c.value <= polya_f64(k, c.a) * (1.0 + PREFILTER) {
                cands.push(c);
            }
        }
    }
    cands.push(Cand { origin: Origin::Endpoint, a: 1.0, value: kth_perimeter(k as usize, &unit(prec)).value.to_f64() });
    cands
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateKind {
    Crossing,
    Stationary,
    Endpoint,
}

/// A closed-form point where an extremum of `mu_k` may sit.
#[derive(Clone, Debug, Serialize)]
pub struct PerimeterCandidate {
    pub a: String,
    pub a_exact: String,
    pub kind: CandidateKind,
    /// The two crossing modes, or the one stationary mode.
    pub modes: Vec<Mode>,
}

/// All crossing, stationary and endpoint candidates that pass the Pólya
/// prune, sorted by `a` with duplicates (same `a` and kind) merged.
pub fn perimeter_candidates(k: u64, prec: Precision) -> Result<Vec<PerimeterCandidate>> {
    check_k(k)?;
    let mut cands = min_cands(k, prec);
    cands.sort_by(|x, y| x.a.total_cmp(&y.a));
    let tol = ten_pow_neg(PERIMETER_TIE_DIGITS, prec);
    let mut out: Vec<(Real, PerimeterCandidate)> = Vec::new();
    for c in &cands {
        let a = c.a_real(prec);
        let (kind, modes) = match &c.origin {
            Origin::Crossing { a, b, .. } => (CandidateKind::Crossing, vec![*a, *b]),
            Origin::Bottom { mode } => (CandidateKind::Stationary, vec![*mode]),
            Origin::Endpoint => (CandidateKind::Endpoint, Vec::new()),
        };
        if out.iter().rev().take_while(|(x, _)| (x - &a).abs() <= tol).any(|(_, p)| p.kind == kind) {
            continue;
        }
        let cand = PerimeterCandidate { a: a.to_decimal(prec.get()), a_exact: c.a_exact(), kind, modes };
        out.push((a, cand));
    }
    out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

/// Points where the mode holding `mu_k` changes. At a crossing value `V`
/// with `L` eigenvalues strictly below, the curves tied at `V` are ordered
/// by slope: just left of the crossing the steepest is lowest, just right it
/// is highest. The active mode is the one at offset `k - L` in each order.
pub fn perimeter_breakpoints(k: u64, prec: Precision) -> Result<Vec<Real>> {
    check_k(k)?;
    let tol = ten_pow_neg(PERIMETER_TIE_DIGITS, prec);
    let mut cands = crossing_cands(k);
    cands.retain(|c| c.a < 1.0 && plausible(c, k));
    cands.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut out: Vec<Real> = Vec::new();
    for c in &cands {
        let a = c.a_real(prec);
        if out.last().is_some_and(|last| (&a - last).abs() <= tol) {
            continue;
        }
        let rect = PerimeterRectangle::new(a.clone())?;
        let entry = kth_perimeter(k as usize, &rect);
        let own = own_value(c, &rect).expect("crossing");
        if (&own - &entry.value).abs() > tol || entry.multiplicity < 2 {
            continue;
        }
        let two = Real::from_i64(2, prec);
        let long = rect.long_side();
        let slope = |m: &Mode| {
            let p2 = Real::from_u64(m.p * m.p, prec);
            let q2 = Real::from_u64(m.q * m.q, prec);
            &two * p2 / long.powi(3) - &two * q2 / a.powi(3)
        };
        let mut by_slope: Vec<(Real, Mode)> = entry.modes.iter().map(|m| (slope(m), *m)).collect();
        by_slope.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal).then(x.1.cmp(&y.1)));
        let offset = k as usize - entry.first_index;
        let n = by_slope.len();
        let right = by_slope[offset].1;
        let left = by_slope[n - 1 - offset].1;
        if left != right {
            out.push(a);
        }
    }
    Ok(out)
}

/// The maximizer `a* = 2/(k+1)` with `mu_k* = (k+1)^2/4`, realized by `(k,0)`
/// and `(0,1)`. The closed form is cross-checked against a search over all
/// crossing candidates; disagreement beyond `1e-12` is an error.
pub fn perimeter_max(k: u64, prec: Precision) -> Result<PerimeterOptimum> {
    check_k(k)?;
    let closed_a = Rational::new(BigInt::from(2), BigInt::from(k + 1));
    let closed_v = Rational::new(BigInt::from((k + 1) * (k + 1)), BigInt::from(4));
    let a = Real::from_rational(&closed_a, prec);
    let value = Real::from_rational(&closed_v, prec);

    let mut cands = crossing_cands(k);
    cands.push(Cand { origin: Origin::Endpoint, a: 1.0, value: kth_perimeter(k as usize, &unit(prec)).value.to_f64() });
    let found = select(cands, k, Sense::Max, prec)?;
    let search = found.first().ok_or_else(|| Error::Mismatch("candidate search found no maximizer".into()))?;
    let gap = ten_pow_neg(12, prec);
    if (&search.value - &value).abs() > gap || (&search.a - &a).abs() > gap {
        return Err(Error::Mismatch(format!(
            "candidate search gives a = {}, value = {}; closed form gives {}, {}",
            search.a.to_decimal(20),
            search.value.to_decimal(20),
            a.to_decimal(20),
            value.to_decimal(20)
        )));
    }
    let digits = prec.get();
    Ok(PerimeterOptimum {
        k,
        sense: Sense::Max,
        attained: true,
        value: value.to_decimal(digits),
        value_float: value.to_f64(),
        optimizers: vec![optimizer(a, rational_string(&closed_a), k)],
        breakpoints: perimeter_breakpoints(k, prec)?.iter().map(|b| b.to_decimal(digits)).collect(),
        witness: None,
        perimeter: 4,
        value_real: value,
    })
}

fn unit(prec: Precision) -> PerimeterRectangle {
    PerimeterRectangle::new(Real::from_i64(1, prec)).expect("a = 1")
}

/// Minimizer of `mu_k` over `a in (0, 1]`. When the degenerate limit
/// `k^2/4` lies strictly below every candidate (only `k = 1`) the infimum is
/// not attained and a witness sequence `a_n = 1/n` is attached.
pub fn perimeter_min(k: u64, prec: Precision) -> Result<PerimeterOptimum> {
    check_k(k)?;
    let digits = prec.get();
    let found = select(min_cands(k, prec), k, Sense::Min, prec)?;
    let best = found.first().ok_or_else(|| Error::Mismatch("candidate search found no minimizer".into()))?;
    let limit = Real::from_rational(&Rational::new(BigInt::from(k * k), BigInt::from(4)), prec);
    let breakpoints: Vec<String> = perimeter_breakpoints(k, prec)?.iter().map(|b| b.to_decimal(digits)).collect();
    let tol = ten_pow_neg(PERIMETER_TIE_DIGITS, prec);
    if &limit + &tol < best.value {
        let samples = [10u64, 100, 1000, 10_000]
            .iter()
            .map(|&n| {
                let a = Real::from_rational(&Rational::new(BigInt::from(1), BigInt::from(n)), prec);
                let v = kth_perimeter(k as usize, &PerimeterRectangle::new(a.clone()).expect("a in (0,1]")).value;
                WitnessSample { n, a: a.to_decimal(digits), value: v.to_decimal(digits) }
            })
            .collect();
        return Ok(PerimeterOptimum {
            k,
            sense: Sense::Min,
            attained: false,
            value: limit.to_decimal(digits),
            value_float: limit.to_f64(),
            optimizers: Vec::new(),
            breakpoints,
            witness: Some(Witness { sequence: "a_n = 1/n".into(), samples }),
            perimeter: 4,
            value_real: limit,
        });
    }
    let value = best.value.clone();
    let optimizers = found.iter().map(|v| optimizer(v.a.clone(), v.cand.a_exact(), k)).collect();
    Ok(PerimeterOptimum {
        k,
        sense: Sense::Min,
        attained: true,
        value: value.to_decimal(digits),
        value_float: value.to_f64(),
        optimizers,
        breakpoints,
        witness: None,
        perimeter: 4,
        value_real: value,
    })
}

/// One row of [`min_convergence_sweep`].
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub k: u64,
    pub a_star: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceWindow {
    pub k_lo: u64,
    pub k_hi: u64,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceSweep {
    pub rows: Vec<ConvergenceRow>,
    /// Maxima of `|a_k* - 1|` over `[2^j, 2^(j+1)]`.
    pub windows: Vec<ConvergenceWindow>,
}

/// `|a_k* - 1|` for `k = 2..=k_max`, with dyadic window maxima. Where several
/// minimizers tie the one farthest from 1 is used.
pub fn min_convergence_sweep(k_max: u64, prec: Precision) -> Result<ConvergenceSweep> {
    if k_max < 2 {
        return Err(Error::Precondition("k_max must be >= 2".into()));
    }
    let rows: Vec<ConvergenceRow> = (2..=k_max)
        .into_par_iter()
        .map(|k| {
            let opt = perimeter_min(k, prec)?;
            let a = opt
                .optimizers
                .iter()
                .map(|o| o.a_real.to_f64())
                .min_by(|x, y| x.total_cmp(y))
                .ok_or_else(|| Error::Mismatch(format!("k = {k}: minimum not attained")))?;
            Ok(ConvergenceRow { k, a_star: a, deviation: (1.0 - a).abs() })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceSweep { windows: dyadic_windows(&rows), rows })
}

fn dyadic_windows(rows: &[ConvergenceRow]) -> Vec<ConvergenceWindow> {
    let mut out = Vec::new();
    let mut lo = 2u64;
    let k_max = rows.last().map_or(0, |r| r.k);
    while lo <= k_max {
        let hi = lo * 2;
        let max = rows.iter().filter(|r| r.k >= lo && r.k <= hi).map(|r| r.deviation).fold(0.0, f64::max);
        out.push(ConvergenceWindow { k_lo: lo, k_hi: hi.min(k_max), max_deviation: max });
        lo = hi;
    }
    out
}
