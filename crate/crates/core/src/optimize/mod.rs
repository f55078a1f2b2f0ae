//! Extremal eigenvalue problems over families of rectangles.
//!
//! * [`area`]: maximize the k-th Neumann eigenvalue, and minimize the k-th
//!   Dirichlet eigenvalue, among rectangles of area 1.
//! * [`perimeter`]: maximize or minimize the k-th Neumann eigenvalue among
//!   rectangles of perimeter 4.

pub mod area;
mod lattice;
pub mod perimeter;

use serde::{Deserialize, Serialize};

use crate::exact::{rational_str, Rational, RootQuotient};
use crate::real::{Precision, DEFAULT_DIGITS};
use crate::spectrum::{Limits, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

impl std::str::FromStr for Sense {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "max" => Ok(Sense::Max),
            "min" => Ok(Sense::Min),
            _ => Err(crate::Error::Parse(format!("sense must be max or min, got {s:?}"))),
        }
    }
}

/// Knobs shared by the optimizers.
#[derive(Clone, Copy, Debug)]
pub struct OptConfig {
    pub limits: Limits,
    /// Digits used for the decimal renderings in reports.
    pub precision: Precision,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self { limits: Limits::default(), precision: Precision::digits(DEFAULT_DIGITS) }
    }
}

/// One optimal rectangle `w = b^4` of an area problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimizer {
    #[serde(with = "rational_str")]
    pub w: Rational,
    pub b_float: String,
    /// Every mode whose eigenvalue equals the optimal value at `w`.
    pub modes: Vec<Mode>,
    /// All pairs of those modes (their eigenvalue curves cross at `w`).
    pub mode_pairs: Vec<(Mode, Mode)>,
}

/// Exact solution of an area-constrained extremal problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub k: u64,
    pub sense: Sense,
    /// Optimal value in units of pi^2, written with the radicand of the first optimizer.
    pub value: RootQuotient,
    pub value_float: String,
    /// Sorted by `w` ascending.
    pub optimizers: Vec<Optimizer>,
    #[serde(with = "rational_str")]
    pub search_bound_w: Rational,
}

impl OptimumReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per optimizer.
    pub fn csv_rows(&self) -> Vec<[String; 7]> {
        self.optimizers
            .iter()
            .map(|o| {
                let pairs: Vec<String> = o.mode_pairs.iter().map(|(a, b)| format!("{a}{b}")).collect();
                [
                    self.k.to_string(),
                    format!("{:?}", self.sense).to_lowercase(),
                    self.value.to_string(),
                    self.value_float.clone(),
                    crate::exact::rational_string(&o.w),
                    o.b_float.clone(),
                    pairs.join(" "),
                ]
            })
            .collect()
    }

    pub const CSV_HEADER: [&'static str; 7] = ["k", "sense", "value", "value_float", "w", "b_float", "mode_pairs"];
}
