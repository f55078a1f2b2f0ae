//! The k = 1..15 table of maximizing rectangles, recomputed and checked
//! against a built-in copy.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{rat, rational_string, Rational, RootQuotient};
use crate::optimize::area::maximize_mu_k_with;
use crate::optimize::OptConfig;
use crate::render::{b_string, value_string};
use crate::spectrum::Mode;

/// Last index in the table.
pub const TABLE_K: u64 = 15;

/// `coef * prod r_i^(1/e_i)`.
struct Radical {
    coef: (i64, i64),
    roots: &'static [((i64, i64), u32)],
}

impl Radical {
    fn fourth_power(&self) -> Rational {
        let mut out = rat(self.coef.0, self.coef.1).pow(4u32);
        for &((n, d), e) in self.roots {
            out *= rat(n, d).pow(4 / e);
        }
        out
    }
}

struct ExpectedRow {
    k: u64,
    /// `coef * sqrt(t)`.
    value: ((i64, i64), i64),
    optimizers: &'static [(Radical, [(u64, u64); 2])],
}

const fn r(coef: (i64, i64), roots: &'static [((i64, i64), u32)]) -> Radical {
    Radical { coef, roots }
}

const ONE: (i64, i64) = (1, 1);

const EXPECTED: [ExpectedRow; 15] = [
    ExpectedRow { k: 1, value: (ONE, 1), optimizers: &[(r(ONE, &[]), [(1, 0), (0, 1)])] },
    ExpectedRow { k: 2, value: ((2, 1), 1), optimizers: &[(r(ONE, &[((2, 1), 2)]), [(2, 0), (0, 1)])] },
    ExpectedRow { k: 3, value: ((3, 1), 1), optimizers: &[(r(ONE, &[((3, 1), 2)]), [(3, 0), (0, 1)])] },
    ExpectedRow {
        k: 4,
        value: ((4, 1), 1),
        optimizers: &[(r((2, 1), &[]), [(4, 0), (0, 1)]), (r(ONE, &[]), [(2, 0), (0, 2)])],
    },
    ExpectedRow { k: 5, value: ((5, 1), 1), optimizers: &[(r(ONE, &[((5, 1), 2)]), [(5, 0), (0, 1)])] },
    ExpectedRow {
        k: 6,
        value: ((6, 1), 1),
        optimizers: &[(r(ONE, &[((6, 1), 2)]), [(6, 0), (0, 1)]), (r((1, 2), &[((6, 1), 2)]), [(3, 0), (0, 2)])],
    },
    ExpectedRow { k: 7, value: ((7, 1), 1), optimizers: &[(r(ONE, &[((7, 1), 2)]), [(7, 0), (0, 1)])] },
    ExpectedRow {
        k: 8,
        value: ((18, 5), 5),
        optimizers: &[(r(ONE, &[((2, 1), 2), ((1, 2), 1), ((5, 1), 4)]), [(2, 2), (3, 0)])],
    },
    ExpectedRow { k: 9, value: ((16, 3), 3), optimizers: &[(r((2, 1), &[((1, 3), 4)]), [(4, 1), (0, 2)])] },
    ExpectedRow {
        k: 10,
        value: ((10, 1), 1),
        optimizers: &[(r((1, 2), &[((10, 1), 2)]), [(5, 0), (0, 2)]), (r(ONE, &[((10, 1), 2)]), [(10, 0), (0, 1)])],
    },
    ExpectedRow { k: 11, value: ((12, 1), 1), optimizers: &[(r((2, 3), &[((3, 1), 2)]), [(4, 0), (0, 3)])] },
    ExpectedRow { k: 12, value: ((77, 20), 10), optimizers: &[(r(ONE, &[((8, 5), 4)]), [(1, 3), (3, 2)])] },
    ExpectedRow {
        k: 13,
        value: ((8, 1), 3),
        optimizers: &[(r(ONE, &[((3, 1), 4), ((2, 1), 2)]), [(6, 1), (0, 2)])],
    },
    ExpectedRow { k: 14, value: ((15, 1), 1), optimizers: &[(r((1, 3), &[((15, 1), 2)]), [(5, 0), (0, 3)])] },
    ExpectedRow {
        k: 15,
        value: ((16, 1), 1),
        optimizers: &[(r((2, 1), &[]), [(8, 0), (0, 2)]), (r(ONE, &[]), [(4, 0), (0, 4)])],
    },
];

/// One optimal rectangle in a table row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableOptimizer {
    pub w: String,
    pub b: String,
    pub b_float: String,
    pub modes: Vec<Mode>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: u64,
    /// `mu_k*` in units of pi^2, as a radical.
    pub value: String,
    pub value_float: String,
    pub optimizers: Vec<TableOptimizer>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableMismatch {
    pub k: u64,
    pub field: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub mismatches: Vec<TableMismatch>,
}

impl TableReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// One line per optimizer.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "value", "value_float", "w", "b", "b_float", "modes"]).expect("csv");
        for row in &self.rows {
            for o in &row.optimizers {
                let modes: Vec<String> = o.modes.iter().map(Mode::to_string).collect();
                w.write_record([
                    row.k.to_string(),
                    row.value.clone(),
                    row.value_float.clone(),
                    o.w.clone(),
                    o.b.clone(),
                    o.b_float.clone(),
                    modes.join(" "),
                ])
                .expect("csv");
            }
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
    }

    /// Human-readable diff of the mismatches.
    pub fn diff(&self) -> String {
        self.mismatches
            .iter()
            .map(|m| format!("k={} {}:\n- {}\n+ {}\n", m.k, m.field, m.expected, m.computed))
            .collect()
    }
}

fn sorted_modes(pairs: &[(u64, u64)]) -> Vec<Mode> {
    let mut v: Vec<Mode> = pairs.iter().map(|&(p, q)| Mode::new(p, q)).collect();
    crate::spectrum::sort_modes(&mut v);
    v
}

fn modes_str(m: &[Mode]) -> String {
    m.iter().map(Mode::to_string).collect::<Vec<_>>().join(",")
}

/// Recomputes every row and compares exactly: the value as a root quotient,
/// the set of optimal `w = b^4`, and the modes on the optimal curve at each.
pub fn reproduce_table(cfg: &OptConfig) -> Result<TableReport> {
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for exp in &EXPECTED {
        let rep = maximize_mu_k_with(exp.k, cfg)?;
        let ((cn, cd), t) = exp.value;
        let t = BigInt::from(t);
        let expected_value = RootQuotient::new(rat(cn, cd) * Rational::from_integer(t.clone()), Rational::from_integer(t))?;
        let mut push = |field: &str, e: String, c: String| {
            mismatches.push(TableMismatch { k: exp.k, field: field.into(), expected: e, computed: c })
        };
        if expected_value.compare(&rep.value) != std::cmp::Ordering::Equal {
            push("value", value_string(&expected_value), value_string(&rep.value));
        }
        let mut expected: Vec<(Rational, Vec<Mode>)> =
            exp.optimizers.iter().map(|(b, pair)| (b.fourth_power(), sorted_modes(pair))).collect();
        expected.sort_by(|a, b| a.0.cmp(&b.0));
        let ews: Vec<String> = expected.iter().map(|(w, _)| b_string(w)).collect();
        let cws: Vec<String> = rep.optimizers.iter().map(|o| b_string(&o.w)).collect();
        if expected.len() != rep.optimizers.len() || expected.iter().zip(&rep.optimizers).any(|(e, o)| e.0 != o.w) {
            push("b", ews.join(" or "), cws.join(" or "));
        } else {
            for ((_, em), o) in expected.iter().zip(&rep.optimizers) {
                if *em != o.modes {
                    push("modes", modes_str(em), modes_str(&o.modes));
                }
            }
        }
        rows.push(TableRow {
            k: exp.k,
            value: value_string(&rep.value),
            value_float: rep.value_float.clone(),
            optimizers: rep
                .optimizers
                .iter()
                .map(|o| TableOptimizer {
                    w: rational_string(&o.w),
                    b: b_string(&o.w),
                    b_float: o.b_float.clone(),
                    modes: o.modes.clone(),
                })
                .collect(),
        });
    }
    debug_assert!(rows.len() as u64 == TABLE_K);
    Ok(TableReport { rows, mismatches })
}
