//! Large-k behaviour of the area-1 maximizers and of the rectangle spectra.
//!
//! Limits cannot be tested, so the claims are turned into windowed
//! statistics over dyadic blocks of indices: maxima of `|b_k* - 1|`, of the
//! normalized remainder of `mu_k*`, and of `c_k = b_k*/sqrt(k)`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rational_str, Rational};
use crate::optimize::area::maximize_mu_k_with;
use crate::optimize::OptConfig;
use crate::real::{Precision, Real};
use crate::spectrum::{dirichlet_spectrum, neumann_spectrum, AreaRectangle, Limits};

/// Ceiling on `b_k*` for all large k.
pub const B_CEILING: f64 = 43.0;
/// Asymptotic ceiling on `c_k = b_k* / sqrt(k)`.
pub const C_CEILING: f64 = 0.46359;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymptoticsConfig {
    pub k_max: u64,
    /// Lattice remainder exponent, `1/2 < theta < 1`.
    #[serde(with = "rational_str")]
    pub theta: Rational,
    /// Slack added to `theta` in reported exponents only.
    pub epsilon: f64,
    pub window_base: u64,
    /// First k at which `c_k` is held to [`C_CEILING`].
    pub c_onset: u64,
    pub precision: u32,
}

impl Default for AsymptoticsConfig {
    fn default() -> Self {
        Self {
            k_max: 512,
            theta: Rational::new(BigInt::from(131), BigInt::from(208)),
            epsilon: 1e-6,
            window_base: 2,
            c_onset: 50,
            precision: crate::real::DEFAULT_DIGITS,
        }
    }
}

impl AsymptoticsConfig {
    pub fn validate(&self) -> Result<()> {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        if self.theta <= half || self.theta >= Rational::one() {
            return Err(Error::Precondition("theta must lie in (1/2, 1)".into()));
        }
        if self.window_base < 2 {
            return Err(Error::Precondition("window_base must be >= 2".into()));
        }
        if self.k_max == 0 {
            return Err(Error::Precondition("k_max must be >= 1".into()));
        }
        Ok(())
    }

    fn prec(&self) -> Precision {
        Precision::digits(self.precision)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u64,
    pub mu_star_float: String,
    pub b_star_set: Vec<String>,
    pub max_b_deviation: f64,
    pub c_k: f64,
    pub theta_residual: f64,
    /// Smallest multiplicity of the optimal value over the optimizers.
    pub multiplicity: usize,
    /// `mu_k* - nu_k` (pi^2 units), nonnegative since the square is admissible.
    pub square_gap: f64,
    /// `4 pi k - mu_k*`, nonnegative by Pólya's inequality.
    pub polya_gap: f64,
}

/// One row per `k = 1..=k_max` from the exact maximizer.
pub fn run_sweep(config: &AsymptoticsConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let prec = config.prec();
    let cfg = OptConfig { limits: Limits::default(), precision: prec };
    let theta = Real::from_rational(&config.theta, prec);
    let squares = neumann_spectrum(&AreaRectangle::square(), config.k_max as usize + 1, &cfg.limits)?;
    (1..=config.k_max)
        .into_par_iter()
        .map(|k| {
            let rep = maximize_mu_k_with(k, &cfg)?;
            let pi = Real::pi(prec);
            let kr = Real::from_u64(k, prec);
            let mu = Real::from_rational(&rep.value.square(), prec).sqrt() * &pi * &pi;
            let bs: Vec<Real> = rep.optimizers.iter().map(|o| Real::from_rational(&o.w, prec).sqrt().sqrt()).collect();
            let one = Real::from_i64(1, prec);
            let max_b = bs.iter().cloned().reduce(Real::max).expect("at least one optimizer");
            let dev = bs.iter().map(|b| (b - &one).abs()).reduce(Real::max).expect("nonempty");
            let pk = &pi * &kr;
            let exponent = (&theta + 1) / 4;
            let residual = (&mu - &pk * 4 + pk.sqrt() * 8) / kr.pow(&exponent);
            let nu = Real::from_rational(&squares[k as usize].square(), prec).sqrt() * &pi * &pi;
            Ok(SweepRow {
                k,
                mu_star_float: rep.value_float.clone(),
                b_star_set: bs.iter().map(|b| b.to_decimal(prec.get())).collect(),
                max_b_deviation: dev.to_f64(),
                c_k: (max_b / kr.sqrt()).to_f64(),
                theta_residual: residual.to_f64(),
                multiplicity: rep.optimizers.iter().map(|o| o.modes.len()).min().unwrap_or(0),
                square_gap: ((&mu - &nu) / (&pi * &pi)).to_f64(),
                polya_gap: (&pk * 4 - &mu).to_f64(),
            })
        })
        .collect()
}

/// Closed index window `[k_lo, k_hi]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WindowTrend {
    pub k_lo: u64,
    pub k_hi: u64,
    pub max_b_deviation: f64,
    pub max_abs_residual: f64,
    pub max_c_k: f64,
    pub max_b: f64,
    pub flags: Vec<String>,
}

/// Maxima over the windows `[base^j, base^(j+1)]`, clipped to the sweep.
///
/// Flags raised per window:
/// * `b_above_ceiling`: some `b_k* > 43`;
/// * `c_above_ceiling`: some `c_k > 0.46359` with `k >= c_onset`;
/// * `residual_upward`: the window's max `|residual|` exceeds twice the
///   largest window max seen from index 8 on.
pub fn window_trends(rows: &[SweepRow], window_base: u64, c_onset: u64) -> Result<Vec<WindowTrend>> {
    if rows.is_empty() {
        return Err(Error::Precondition("no sweep rows".into()));
    }
    if window_base < 2 {
        return Err(Error::Precondition("window_base must be >= 2".into()));
    }
    let k_max = rows.iter().map(|r| r.k).max().expect("nonempty");
    let mut out: Vec<WindowTrend> = Vec::new();
    let mut lo = 1u64;
    let mut running_residual: Option<f64> = None;
    while lo <= k_max {
        let hi = (lo * window_base).min(k_max);
        let win: Vec<&SweepRow> = rows.iter().filter(|r| r.k >= lo && r.k <= hi).collect();
        let fold = |f: &dyn Fn(&SweepRow) -> f64| win.iter().map(|r| f(r)).fold(0.0_f64, f64::max);
        let max_b = win
            .iter()
            .flat_map(|r| r.b_star_set.iter().map(|b| b.parse::<f64>().unwrap_or(f64::NAN)))
            .fold(0.0_f64, f64::max);
        let max_res = fold(&|r| r.theta_residual.abs());
        let mut flags = Vec::new();
        if max_b > B_CEILING {
            flags.push("b_above_ceiling".to_string());
        }
        if win.iter().any(|r| r.k >= c_onset && r.c_k > C_CEILING) {
            flags.push("c_above_ceiling".to_string());
        }
        if lo >= 8 {
            if let Some(prev) = running_residual {
                if max_res > 2.0 * prev {
                    flags.push("residual_upward".to_string());
                }
            }
            running_residual = Some(running_residual.map_or(max_res, |p: f64| p.max(max_res)));
        }
        out.push(WindowTrend {
            k_lo: lo,
            k_hi: hi,
            max_b_deviation: fold(&|r| r.max_b_deviation),
            max_abs_residual: max_res,
            max_c_k: fold(&|r| r.c_k),
            max_b,
            flags,
        });
        if hi == k_max {
            break;
        }
        lo *= window_base;
    }
    Ok(out)
}

/// Largest `Theta_k / k^(1/3)` over the sweep.
pub fn max_multiplicity_ratio(rows: &[SweepRow]) -> f64 {
    rows.iter().map(|r| r.multiplicity as f64 / (r.k as f64).cbrt()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Neumann,
    Dirichlet,
}

/// `r_k` for one index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylPoint {
    pub k: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylSeries {
    pub boundary: Boundary,
    #[serde(with = "rational_str")]
    pub w: Rational,
    pub perimeter: f64,
    pub points: Vec<WeylPoint>,
}

impl WeylSeries {
    /// Largest `|r_k|` over `lo <= k <= hi`.
    pub fn window_max(&self, lo: u64, hi: u64) -> f64 {
        self.points.iter().filter(|p| p.k >= lo && p.k <= hi).map(|p| p.residual.abs()).fold(0.0, f64::max)
    }
}

/// `r_k = (e_k - 4 pi k -/+ 2 sqrt(pi) Per sqrt(k)) / sqrt(k)` on the
/// area-1 rectangle `w`, with `Per = 2 (b + 1/b)`: the second term is
/// subtracted for Neumann and added for Dirichlet eigenvalues.
pub fn weyl_two_term_residual(boundary: Boundary, rect: &AreaRectangle, k_lo: u64, k_hi: u64, prec: Precision) -> Result<WeylSeries> {
    if k_lo == 0 || k_hi < k_lo {
        return Err(Error::Precondition("need 1 <= k_lo <= k_hi".into()));
    }
    let limits = Limits::default();
    let count = k_hi as usize + 1;
    let values = match boundary {
        Boundary::Neumann => neumann_spectrum(rect, count, &limits)?,
        Boundary::Dirichlet => {
            let mut v = dirichlet_spectrum(rect, count - 1, &limits)?;
            v.insert(0, crate::exact::RootQuotient::zero());
            v
        }
    };
    let per = rect.perimeter(prec);
    let sign = match boundary {
        Boundary::Neumann => -1,
        Boundary::Dirichlet => 1,
    };
    let points = (k_lo..=k_hi)
        .into_par_iter()
        .map(|k| {
            let pi = Real::pi(prec);
            let e = Real::from_rational(&values[k as usize].square(), prec).sqrt() * &pi * &pi;
            let kr = Real::from_u64(k, prec);
            let root = kr.sqrt();
            let second = pi.sqrt() * 2 * &per * &root * sign;
            let r = (e - &pi * &kr * 4 - second) / root;
            WeylPoint { k, residual: r.to_f64() }
        })
        .collect();
    Ok(WeylSeries { boundary, w: rect.w().clone(), perimeter: per.to_f64(), points })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HuxleyFit {
    #[serde(with = "rational_str")]
    pub w: Rational,
    #[serde(with = "rational_str")]
    pub theta: Rational,
    /// `mu` ranges over eigenvalues of the rectangle with `mu <= mu_max` (plain units).
    pub mu_max: f64,
    pub sup: f64,
    /// The same supremum over `mu <= mu_max / 2`.
    pub sup_half_range: f64,
    /// `sup <= 2 sup_half_range`.
    pub doubling_ok: bool,
    /// `mu / pi^2` where the supremum is attained.
    pub argmax_mu_pi2: String,
}

/// `sup |N0(mu; b) - mu/pi| / mu^(theta/2)` over `mu = 4 pi k`, `k <= k_max`.
/// `N0` jumps at eigenvalues, so both one-sided limits are taken at each
/// eigenvalue of the rectangle.
pub fn huxley_remainder_fit(rect: &AreaRectangle, k_max: u64, theta: &Rational, prec: Precision) -> Result<HuxleyFit> {
    if k_max == 0 {
        return Err(Error::Precondition("k_max must be >= 1".into()));
    }
    let pi = Real::pi(prec);
    // mu_max / pi^2 = 4 k_max / pi, rounded up to an integer bound for the enumeration.
    let bound = (Real::from_u64(4 * k_max, prec) / &pi).floor() + 1;
    let lat = rect.lattice();
    let kmax_key = lat.key_bound(&bound);
    let mut modes = lat.modes_up_to(&kmax_key, false, &Limits::default())?;
    modes.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mu_max = Real::from_u64(4 * k_max, prec) * &pi;
    let half = Real::from_rational(theta, prec) / 2;
    let mut n0: u64 = 0;
    let mut i = 0;
    let mut best = (0.0_f64, String::from("0"));
    let mut best_half = 0.0_f64;
    let mu_half = &mu_max / 2;
    while i < modes.len() {
        let key = modes[i].0.clone();
        let value = lat.value(&key);
        let mu = Real::from_rational(&value.square(), prec).sqrt() * &pi * &pi;
        if mu > mu_max {
            break;
        }
        let before = n0;
        while i < modes.len() && modes[i].0 == key {
            let m = modes[i].1;
            n0 += match (m.p == 0, m.q == 0) {
                (true, true) => 1,
                (true, false) | (false, true) => 2,
                (false, false) => 4,
            };
            i += 1;
        }
        if mu.is_zero() {
            continue;
        }
        let area = &mu / &pi;
        let scale = mu.pow(&half);
        let lower = ((Real::from_u64(before, prec) - &area).abs() / &scale).to_f64();
        let upper = ((Real::from_u64(n0, prec) - &area).abs() / &scale).to_f64();
        let local = lower.max(upper);
        if local > best.0 {
            best = (local, value.to_decimal(12));
        }
        if mu <= mu_half {
            best_half = best_half.max(local);
        }
    }
    Ok(HuxleyFit {
        w: rect.w().clone(),
        theta: theta.clone(),
        mu_max: mu_max.to_f64(),
        sup: best.0,
        sup_half_range: best_half,
        doubling_ok: best.0 <= 2.0 * best_half,
        argmax_mu_pi2: best.1,
    })
}

/// `|N0(mu; b) - mu/pi|` for `mu = pi^2 * mu_pi2`.
pub fn lattice_remainder(mu_pi2: &Rational, rect: &AreaRectangle, prec: Precision) -> Result<Real> {
    let mu = crate::exact::RootQuotient::rational(mu_pi2.clone())?;
    let n0 = crate::spectrum::count_n0(&mu, rect);
    let pi = Real::pi(prec);
    Ok((Real::from_bigint(&n0, prec) - Real::from_rational(mu_pi2, prec) * pi).abs())
}

/// Writes sweep rows as CSV.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "mu_star_float", "b_star_set", "max_b_deviation", "c_k", "theta_residual", "multiplicity"])
        .expect("csv");
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.mu_star_float.clone(),
            r.b_star_set.join(" "),
            r.max_b_deviation.to_string(),
            r.c_k.to_string(),
            r.theta_residual.to_string(),
            r.multiplicity.to_string(),
        ])
        .expect("csv");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

/// The exponent `(theta + eps + 1)/4` of the remainder in `mu_k*`, for display.
pub fn reported_exponent(config: &AsymptoticsConfig) -> f64 {
    (config.theta.to_f64().unwrap_or(f64::NAN) + config.epsilon + 1.0) / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn small(k_max: u64) -> AsymptoticsConfig {
        AsymptoticsConfig { k_max, ..Default::default() }
    }

    #[test]
    fn sweep_rows() {
        let rows = run_sweep(&small(15)).unwrap();
        let r15 = &rows[14];
        assert_eq!(r15.b_star_set.len(), 2);
        assert!(r15.b_star_set[0].starts_with("1.0000"));
        assert!(r15.b_star_set[1].starts_with("2.0000"));
        assert_eq!(r15.multiplicity, 2);
        let r1 = &rows[0];
        let pi = std::f64::consts::PI;
        let num = pi * pi - 4.0 * pi + 8.0 * pi.sqrt();
        assert!((r1.theta_residual - num).abs() < 1e-12);
        assert!((rows[7].c_k - 0.374).abs() < 1e-3);
        assert!(rows.iter().all(|r| r.multiplicity >= 2 && r.square_gap >= 0.0 && r.polya_gap >= 0.0));
    }

    #[test]
    fn windows_cover_sweep() {
        let rows = run_sweep(&small(20)).unwrap();
        let w = window_trends(&rows, 2, 50).unwrap();
        let spans: Vec<(u64, u64)> = w.iter().map(|t| (t.k_lo, t.k_hi)).collect();
        assert_eq!(spans, vec![(1, 2), (2, 4), (4, 8), (8, 16), (16, 20)]);
        assert!(w.iter().all(|t| t.max_b <= B_CEILING));
    }

    #[test]
    fn bad_theta() {
        let cfg = AsymptoticsConfig { theta: rat(1, 2), ..Default::default() };
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn weyl_perimeter_term() {
        let rect = AreaRectangle::new(rat(16, 9)).unwrap();
        let s = weyl_two_term_residual(Boundary::Neumann, &rect, 1, 10, Precision::default()).unwrap();
        let b = (16f64 / 9.0).powf(0.25);
        assert!((s.perimeter - 2.0 * (b + 1.0 / b)).abs() < 1e-12);
        assert_eq!(s.points.len(), 10);
    }

    #[test]
    fn remainder_at_first_eigenvalue() {
        let r = lattice_remainder(&int(1), &AreaRectangle::square(), Precision::default()).unwrap();
        assert!((r.to_f64() - (5.0 - std::f64::consts::PI)).abs() < 1e-12);
    }

    #[test]
    fn huxley_fit_is_finite() {
        let fit = huxley_remainder_fit(&AreaRectangle::square(), 200, &rat(131, 208), Precision::default()).unwrap();
        assert!(fit.sup.is_finite() && fit.sup > 0.0);
        assert!(fit.sup_half_range <= fit.sup);
    }
}
