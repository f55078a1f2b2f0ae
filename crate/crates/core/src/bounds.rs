//! Explicit eigenvalue and lattice-count inequalities, and sweeps that
//! check them against exact spectra.
//!
//! Unit conventions: `mu` arguments of [`lemma1_lower_bound`] are in units of
//! pi^2 (like every exact eigenvalue in this crate), while
//! [`lemma2_lower_bound`] and [`polya_upper_bound`] return plain eigenvalue
//! magnitudes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rational_string, Rational, RootQuotient};
use crate::real::{ten_pow_neg, Precision, Real};
use crate::spectrum::{count_n, neumann_spectrum, AreaRectangle, Limits};

/// Lower bound on the lattice count `N(mu; b)`, valid when `sqrt(mu)/(b pi) >= 2`:
/// `mu/(4pi) + b sqrt(mu)/(2pi) - b^(3/2) mu^(1/4)/sqrt(2pi) - 1`.
///
/// `mu_pi2` is `mu / pi^2`; in these units the hypothesis reads `mu_pi2 >= 4 b^2`.
pub fn lemma1_lower_bound(mu_pi2: &Real, b: &Real) -> Result<Real> {
    if b.is_negative() || b.is_zero() || mu_pi2.is_negative() {
        return Err(Error::Precondition("mu must be >= 0 and b > 0".into()));
    }
    if *mu_pi2 < (b * b) * 4 {
        return Err(Error::HypothesisUnmet(format!(
            "sqrt(mu)/(b pi) = {} < 2",
            (mu_pi2.sqrt() / b).to_decimal(12)
        )));
    }
    let prec = mu_pi2.precision();
    let pi = Real::pi(prec);
    let mu = mu_pi2 * &pi * &pi;
    let root = mu.sqrt();
    let two_pi = &pi * 2;
    let b32 = b * &b.sqrt();
    Ok(&mu / (&pi * 4) + b * &root / &two_pi - b32 * root.sqrt() / two_pi.sqrt() - 1)
}

/// `4 pi k - 16 sqrt(pi k)`, a lower bound for the k-th positive Neumann
/// eigenvalue of the unit square.
pub fn lemma2_lower_bound(k: u64, prec: Precision) -> Result<Real> {
    if k == 0 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    let pk = Real::pi(prec) * Real::from_u64(k, prec);
    Ok(&pk * 4 - pk.sqrt() * 16)
}

/// `4 pi k / area`.
pub fn polya_upper_bound(k: u64, area: &Rational, prec: Precision) -> Result<Real> {
    if k == 0 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    if *area <= Rational::from_integer(BigInt::from(0)) {
        return Err(Error::Precondition("area must be positive".into()));
    }
    Ok(Real::pi(prec) * Real::from_u64(4 * k, prec) / Real::from_rational(area, prec))
}

/// `nu/(4pi) + 2 sqrt(nu)/pi`, an upper bound on `N(nu; 1)` for `nu >= 2`
/// (`nu` in plain units).
pub fn square_count_upper_bound(nu: &Real) -> Real {
    let pi = Real::pi(nu.precision());
    nu / (&pi * 4) + nu.sqrt() * 2 / pi
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Lemma1,
    Lemma2,
    Polya,
    SquareCount,
}

impl BoundName {
    pub const ALL: [BoundName; 4] = [BoundName::Lemma1, BoundName::Lemma2, BoundName::Polya, BoundName::SquareCount];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::Lemma1 => "lemma1",
            BoundName::Lemma2 => "lemma2",
            BoundName::Polya => "polya",
            BoundName::SquareCount => "square_count",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBound(format!("{s:?} (expected one of lemma1, lemma2, polya, square_count)")))
    }
}

/// Inputs for [`sweep_check`]. Each bound reads only the fields it needs.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    /// Indices `1..=k_max` for the eigenvalue bounds.
    pub k_max: u64,
    /// Rectangles (as `w = b^4`) for the Pólya sweep.
    pub ws: Vec<Rational>,
    /// `(mu / pi^2, b)` pairs for the `lemma1` check.
    pub lemma1_pairs: Vec<(Rational, Rational)>,
    /// `nu / pi^2` values for the square-count bound.
    pub nus: Vec<Rational>,
}

impl SweepGrid {
    /// A reproducible grid: `samples` random `lemma1` pairs meeting the
    /// hypothesis and `samples` values of `nu`.
    pub fn sampled(k_max: u64, samples: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let lemma1_pairs = (0..samples)
            .map(|_| {
                let b = Rational::new(BigInt::from(rng.gen_range(4..=64)), BigInt::from(16));
                let excess = Rational::new(BigInt::from(rng.gen_range(0..=40_000)), BigInt::from(rng.gen_range(1..=100)));
                (&b * &b * BigInt::from(4) + excess, b)
            })
            .collect();
        let nus = (0..samples)
            .map(|_| Rational::new(BigInt::from(rng.gen_range(20..=400_000)), BigInt::from(rng.gen_range(1..=100))))
            .collect();
        Self {
            k_max,
            ws: vec![Rational::one(), Rational::from_integer(BigInt::from(2)), Rational::new(16.into(), 9.into())],
            lemma1_pairs,
            nus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a sweep: each check is `lhs >= rhs - guard`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub bound_name: String,
    pub samples: usize,
    pub violations: Vec<Violation>,
    /// Smallest `lhs - rhs` over all samples.
    pub min_slack: String,
}

impl BoundCheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per violation followed by a summary row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["row", "bound_name", "input", "lhs", "rhs", "min_slack", "samples"]).expect("csv");
        for v in &self.violations {
            w.write_record(["violation", &self.bound_name, &v.input, &v.lhs, &v.rhs, "", ""]).expect("csv");
        }
        let n = self.samples.to_string();
        w.write_record(["summary", &self.bound_name, "", "", "", &self.min_slack, &n]).expect("csv");
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
    }
}

struct Check {
    order: (usize, usize),
    input: String,
    lhs: Real,
    rhs: Real,
}

const OUT_DIGITS: u32 = 20;

fn summarize(name: BoundName, mut checks: Vec<Check>, guard: &Real) -> BoundCheckReport {
    checks.sort_by_key(|c| c.order);
    let mut min_slack: Option<Real> = None;
    let mut violations = Vec::new();
    for c in &checks {
        let slack = &c.lhs - &c.rhs;
        if c.lhs < &c.rhs - guard {
            violations.push(Violation {
                input: c.input.clone(),
                lhs: c.lhs.to_decimal(OUT_DIGITS),
                rhs: c.rhs.to_decimal(OUT_DIGITS),
            });
        }
        min_slack = Some(match min_slack {
            Some(m) => m.min(slack),
            None => slack,
        });
    }
    BoundCheckReport {
        bound_name: name.to_string(),
        samples: checks.len(),
        violations,
        min_slack: min_slack.map_or_else(|| "NaN".into(), |m| m.to_decimal(OUT_DIGITS)),
    }
}

fn plain(v: &RootQuotient, prec: Precision) -> Real {
    let pi = Real::pi(prec);
    Real::from_rational(&v.square(), prec).sqrt() * &pi * &pi
}

/// Evaluates a named inequality across `grid`; a sample is a violation iff
/// `lhs < rhs - guard`.
///
/// * `lemma1`: `N(mu; b)` against [`lemma1_lower_bound`].
/// * `lemma2`: `nu_k` against `4 pi k - 16 sqrt(pi k)` and `4 pi k` against `nu_k`.
/// * `polya`: `4 pi k` against `mu_k` on each rectangle of `grid.ws`.
/// * `square_count`: the upper count bound against `N(nu; 1)`.
pub fn sweep_check(name: BoundName, grid: &SweepGrid, guard: &Real) -> Result<BoundCheckReport> {
    if guard.is_negative() || guard.is_zero() {
        return Err(Error::Precondition("guard must be positive".into()));
    }
    let prec = guard.precision();
    let limits = Limits::default();
    let checks: Vec<Check> = match name {
        BoundName::Lemma1 => grid
            .lemma1_pairs
            .par_iter()
            .enumerate()
            .map(|(i, (m, b))| {
                let rect = AreaRectangle::canonical(b.pow(4))?;
                let mu = RootQuotient::rational(m.clone())?;
                let lhs = Real::from_bigint(&count_n(&mu, &rect), prec);
                let rhs = lemma1_lower_bound(&Real::from_rational(m, prec), &Real::from_rational(b, prec))?;
                let input = format!("mu={}pi^2 b={}", rational_string(m), rational_string(b));
                Ok(Check { order: (i, 0), input, lhs, rhs })
            })
            .collect::<Result<_>>()?,
        BoundName::Lemma2 => {
            let k_max = grid.k_max as usize;
            let spec = neumann_spectrum(&AreaRectangle::square(), k_max + 1, &limits)?;
            (1..=k_max)
                .into_par_iter()
                .flat_map_iter(|k| {
                    let nu = plain(&spec[k], prec);
                    let lower = lemma2_lower_bound(k as u64, prec).expect("k >= 1");
                    let upper = polya_upper_bound(k as u64, &Rational::one(), prec).expect("k >= 1");
                    [
                        Check { order: (k, 0), input: format!("k={k} lower"), lhs: nu.clone(), rhs: lower },
                        Check { order: (k, 1), input: format!("k={k} upper"), lhs: upper, rhs: nu },
                    ]
                })
                .collect()
        }
        BoundName::Polya => {
            let k_max = grid.k_max as usize;
            let mut all = Vec::new();
            for (j, w) in grid.ws.iter().enumerate() {
                let rect = AreaRectangle::canonical(w.clone())?;
                let spec = neumann_spectrum(&rect, k_max + 1, &limits)?;
                let wstr = rational_string(rect.w());
                all.par_extend((1..=k_max).into_par_iter().map(|k| Check {
                    order: (j, k),
                    input: format!("w={wstr} k={k}"),
                    lhs: polya_upper_bound(k as u64, &Rational::one(), prec).expect("k >= 1"),
                    rhs: plain(&spec[k], prec),
                }));
            }
            all
        }
        BoundName::SquareCount => grid
            .nus
            .par_iter()
            .enumerate()
            .map(|(i, nu)| {
                let mu = RootQuotient::rational(nu.clone())?;
                let count = count_n(&mu, &AreaRectangle::square());
                let pi = Real::pi(prec);
                let plain_nu = Real::from_rational(nu, prec) * &pi * &pi;
                Ok(Check {
                    order: (i, 0),
                    input: format!("nu={}pi^2", rational_string(nu)),
                    lhs: square_count_upper_bound(&plain_nu),
                    rhs: Real::from_bigint(&count, prec),
                })
            })
            .collect::<Result<_>>()?,
    };
    Ok(summarize(name, checks, guard))
}

/// Default guard band `10^-9` at the given precision.
pub fn default_guard(prec: Precision) -> Real {
    ten_pow_neg(9, prec)
}

/// Smallest `lhs - rhs` as an `f64`, for quick inspection.
pub fn min_slack_f64(report: &BoundCheckReport) -> f64 {
    report.min_slack.parse().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p() -> Precision {
        Precision::default()
    }

    fn r(q: Rational) -> Real {
        Real::from_rational(&q, p())
    }

    #[test]
    fn lemma1_examples() {
        let v = lemma1_lower_bound(&r(int(16)), &r(int(1))).unwrap();
        assert_eq!(v.to_decimal(5), "12.152");
        let v = lemma1_lower_bound(&r(int(4)), &r(int(1))).unwrap();
        // pi + 1 - 1 - 1 at the hypothesis boundary
        assert!((v.to_f64() - (std::f64::consts::PI - 1.0)).abs() < 1e-12, "{}", v);
        assert!(matches!(lemma1_lower_bound(&r(int(4)), &r(int(2))), Err(Error::HypothesisUnmet(_))));
    }

    #[test]
    fn lemma2_and_polya_examples() {
        assert!((lemma2_lower_bound(1, p()).unwrap().to_f64() + 15.7929).abs() < 1e-3);
        assert!((lemma2_lower_bound(6, p()).unwrap().to_f64() - 5.9325).abs() < 1e-3);
        assert!((lemma2_lower_bound(100, p()).unwrap().to_f64() - 972.97).abs() < 1e-1);
        assert!((polya_upper_bound(6, &int(1), p()).unwrap().to_f64() - 75.398).abs() < 1e-3);
        assert!(lemma2_lower_bound(0, p()).is_err());
    }

    #[test]
    fn unknown_bound_name() {
        assert!(matches!("lemma3".parse::<BoundName>(), Err(Error::UnknownBound(_))));
        assert_eq!("square_count".parse::<BoundName>().unwrap(), BoundName::SquareCount);
    }

    #[test]
    fn small_sweeps_pass() {
        let grid = SweepGrid::sampled(200, 50, 7);
        for name in BoundName::ALL {
            let rep = sweep_check(name, &grid, &default_guard(p())).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.violations);
            assert!(min_slack_f64(&rep) > -1e-9);
        }
    }

    #[test]
    fn report_serialization() {
        let grid = SweepGrid { k_max: 5, ws: vec![rat(2, 1)], lemma1_pairs: vec![], nus: vec![] };
        let rep = sweep_check(BoundName::Polya, &grid, &default_guard(p())).unwrap();
        assert_eq!(rep.samples, 5);
        let csv = rep.to_csv();
        assert!(csv.lines().last().unwrap().starts_with("summary,polya"));
        let back: BoundCheckReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }
}
