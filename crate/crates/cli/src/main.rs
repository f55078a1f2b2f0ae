use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rect_spectra::asymptotics::{self, AsymptoticsConfig, SweepRow, WindowTrend};
use rect_spectra::bounds::{default_guard, sweep_check, BoundName, SweepGrid};
use rect_spectra::exact::{parse_rational, rational_string, Rational};
use rect_spectra::optimize::area::{conjecture_indices, maximize_mu_k_with, minimize_dirichlet_lambda_k_with};
use rect_spectra::optimize::perimeter::{perimeter_max, perimeter_min, PerimeterOptimum};
use rect_spectra::optimize::{OptConfig, OptimumReport, Sense};
use rect_spectra::real::{Precision, Real};
use rect_spectra::spectrum::{kth_dirichlet_with, kth_eigenvalue_with, kth_perimeter, AreaRectangle, Limits, PerimeterRectangle};
use rect_spectra::table::reproduce_table;
use rect_spectra::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "rect-spectra", version, about = "Exact Laplacian spectra and eigenvalue optimization on rectangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Significant digits for decimal renderings (at least 15).
    #[arg(long, env = "RECT_SPECTRA_PRECISION", default_value_t = 30, global = true)]
    precision: u32,
    /// Cap on the number of lattice modes enumerated.
    #[arg(long, default_value_t = 20_000_000, global = true)]
    max_modes: usize,
    /// Cap on the eigenvalue index.
    #[arg(long, default_value_t = 100_000, global = true)]
    max_k: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Boundary {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SenseArg {
    Max,
    Min,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Self {
        match s {
            SenseArg::Max => Sense::Max,
            SenseArg::Min => Sense::Min,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The k-th eigenvalue of one rectangle, with its modes.
    Spectrum {
        #[arg(long)]
        k: u64,
        /// Area-1 rectangle `w = b^4` as p/q.
        #[arg(long, conflicts_with = "a")]
        w: Option<String>,
        /// Perimeter-4 rectangle with short side `a` (decimal).
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_enum, default_value_t = Boundary::Neumann)]
        boundary: Boundary,
    },
    /// Optimal area-1 rectangle: max of the Neumann or min of the Dirichlet k-th eigenvalue.
    OptimizeArea {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = SenseArg::Max)]
        sense: SenseArg,
    },
    /// Optimal perimeter-4 rectangle for the k-th Neumann eigenvalue.
    OptimizePerimeter {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = SenseArg::Max)]
        sense: SenseArg,
    },
    /// Check an inequality on a grid of inputs.
    Bounds {
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 100)]
        k_max: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep of the maximizers for k = 1..k_max with windowed trends.
    Asymptotics {
        #[arg(long, default_value_t = 512)]
        k_max: u64,
        /// Lattice remainder exponent as p/q.
        #[arg(long, default_value = "131/208")]
        theta: String,
        #[arg(long, default_value_t = 2)]
        window_base: u64,
    },
    /// Indices k(n), n <= k_max, where the unit square is the expected maximizer.
    Conjecture {
        #[arg(long, default_value_t = 2)]
        k_max: u32,
    },
    /// Recompute the k = 1..15 table of maximizers and compare with the built-in copy.
    Table,
}

struct Failure {
    code: u8,
    message: String,
    output: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnknownBound(_) => EXIT_USAGE,
            Error::Precondition(_) | Error::HypothesisUnmet(_) => EXIT_PRECONDITION,
            Error::ResourceLimit(_) => EXIT_RESOURCE,
            Error::Mismatch(_) => EXIT_MISMATCH,
        };
        Failure { code, message: e.to_string(), output: None }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into(), output: None }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv");
    for r in rows {
        w.write_record(&r).expect("csv");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn check_k(k: u64, common: &Common) -> Result<(), Failure> {
    if k > common.max_k {
        return Err(fail(EXIT_RESOURCE, format!("k = {k} exceeds --max-k {}", common.max_k)));
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumOut<T: Serialize> {
    k: u64,
    boundary: Boundary,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    entry: T,
}

fn spectrum_csv(k: u64, boundary: Boundary, shape: &str, value: &str, modes: &[rect_spectra::spectrum::Mode], mult: usize, first: usize) -> String {
    let modes: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
    csv_string(
        &["k", "boundary", "rectangle", "value", "modes", "multiplicity", "first_index"],
        [vec![
            k.to_string(),
            format!("{boundary:?}").to_lowercase(),
            shape.to_string(),
            value.to_string(),
            modes.join(" "),
            mult.to_string(),
            first.to_string(),
        ]],
    )
}

fn area_csv(rep: &OptimumReport) -> String {
    csv_string(&OptimumReport::CSV_HEADER, rep.csv_rows().into_iter().map(|r| r.to_vec()))
}

fn perimeter_csv(rep: &PerimeterOptimum) -> String {
    let header = ["k", "sense", "attained", "value", "a", "a_exact", "modes"];
    let sense = format!("{:?}", rep.sense).to_lowercase();
    let base = |a: &str, exact: &str, modes: String| {
        vec![rep.k.to_string(), sense.clone(), rep.attained.to_string(), rep.value.clone(), a.into(), exact.into(), modes]
    };
    if rep.optimizers.is_empty() {
        return csv_string(&header, [base("", "", String::new())]);
    }
    csv_string(
        &header,
        rep.optimizers.iter().map(|o| {
            let modes: Vec<String> = o.modes.iter().map(|m| m.to_string()).collect();
            base(&o.a, &o.a_exact, modes.join(" "))
        }),
    )
}

#[derive(Serialize)]
struct AsymptoticsOut {
    k_max: u64,
    theta: String,
    window_base: u64,
    c_onset: u64,
    remainder_exponent: f64,
    max_multiplicity_ratio: f64,
    rows: Vec<SweepRow>,
    windows: Vec<WindowTrend>,
}

#[derive(Serialize)]
struct ConjectureRow {
    n: u32,
    k: String,
    square_optimal: bool,
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let common = &cli.common;
    if common.precision < 15 {
        return Err(fail(EXIT_PRECONDITION, format!("precision must be >= 15, got {}", common.precision)));
    }
    if common.max_modes == 0 || common.max_k == 0 {
        return Err(fail(EXIT_PRECONDITION, "resource caps must be positive"));
    }
    let prec = Precision::digits(common.precision);
    let limits = Limits { max_modes: common.max_modes };
    let cfg = OptConfig { limits, precision: prec };
    let csv = matches!(common.format, Format::Csv);

    match &cli.command {
        Command::Spectrum { k, w, a, boundary } => {
            check_k(*k, common)?;
            if let Some(a) = a {
                if matches!(boundary, Boundary::Dirichlet) {
                    return Err(fail(EXIT_USAGE, "perimeter rectangles support only the neumann boundary"));
                }
                let a_val = parse_decimal(a)?;
                let rect = PerimeterRectangle::from_rational(&a_val, prec)?;
                let entry = kth_perimeter(*k as usize, &rect);
                let shown = Real::from_rational(&a_val, prec).to_decimal(prec.get());
                if csv {
                    let v = entry.value.to_decimal(prec.get());
                    return Ok(spectrum_csv(*k, *boundary, &format!("a={shown}"), &v, &entry.modes, entry.multiplicity, entry.first_index));
                }
                return Ok(json(&SpectrumOut { k: *k, boundary: *boundary, w: None, a: Some(shown), entry }));
            }
            let w = parse_rational(w.as_deref().unwrap_or("1"))?;
            let rect = AreaRectangle::canonical(w)?;
            let entry = match boundary {
                Boundary::Neumann => kth_eigenvalue_with(*k as usize, &rect, &limits)?,
                Boundary::Dirichlet => kth_dirichlet_with(*k as usize, &rect, &limits)?,
            };
            let w_str = rational_string(rect.w());
            if csv {
                return Ok(spectrum_csv(*k, *boundary, &format!("w={w_str}"), &entry.value.to_string(), &entry.modes, entry.multiplicity, entry.first_index));
            }
            Ok(json(&SpectrumOut { k: *k, boundary: *boundary, w: Some(w_str), a: None, entry }))
        }
        Command::OptimizeArea { k, sense } => {
            check_k(*k, common)?;
            let rep = match Sense::from(*sense) {
                Sense::Max => maximize_mu_k_with(*k, &cfg)?,
                Sense::Min => minimize_dirichlet_lambda_k_with(*k, &cfg)?,
            };
            Ok(if csv { area_csv(&rep) } else { rep.to_json() })
        }
        Command::OptimizePerimeter { k, sense } => {
            check_k(*k, common)?;
            let rep = match Sense::from(*sense) {
                Sense::Max => perimeter_max(*k, prec)?,
                Sense::Min => perimeter_min(*k, prec)?,
            };
            Ok(if csv { perimeter_csv(&rep) } else { rep.to_json() })
        }
        Command::Bounds { check, k_max, samples, seed } => {
            check_k(*k_max, common)?;
            let name: BoundName = check.parse()?;
            let grid = SweepGrid::sampled(*k_max, *samples, *seed);
            let report = sweep_check(name, &grid, &default_guard(prec))?;
            let text = if csv { report.to_csv() } else { report.to_json() };
            if !report.passed() {
                return Err(Failure {
                    code: EXIT_MISMATCH,
                    message: format!("{} violation(s) of {}", report.violations.len(), name),
                    output: Some(text),
                });
            }
            Ok(text)
        }
        Command::Asymptotics { k_max, theta, window_base } => {
            check_k(*k_max, common)?;
            let config = AsymptoticsConfig {
                k_max: *k_max,
                theta: parse_rational(theta)?,
                window_base: *window_base,
                precision: common.precision,
                ..Default::default()
            };
            let rows = asymptotics::run_sweep(&config)?;
            if csv {
                return Ok(asymptotics::rows_to_csv(&rows));
            }
            let windows = asymptotics::window_trends(&rows, config.window_base, config.c_onset)?;
            Ok(json(&AsymptoticsOut {
                k_max: config.k_max,
                theta: rational_string(&config.theta),
                window_base: config.window_base,
                c_onset: config.c_onset,
                remainder_exponent: asymptotics::reported_exponent(&config),
                max_multiplicity_ratio: asymptotics::max_multiplicity_ratio(&rows),
                rows,
                windows,
            }))
        }
        Command::Conjecture { k_max } => {
            let idx = conjecture_indices(*k_max)?;
            let mut out = Vec::new();
            for (n, k) in idx {
                let k64 = u64::try_from(k).map_err(|_| fail(EXIT_RESOURCE, "index exceeds 64 bits"))?;
                check_k(k64, common)?;
                let rep = maximize_mu_k_with(k64, &cfg)?;
                let square_optimal = rep.optimizers.iter().any(|o| o.w == Rational::from_integer(1.into()));
                out.push(ConjectureRow { n, k: k.to_string(), square_optimal });
            }
            if csv {
                return Ok(csv_string(
                    &["n", "k", "square_optimal"],
                    out.iter().map(|r| vec![r.n.to_string(), r.k.clone(), r.square_optimal.to_string()]),
                ));
            }
            Ok(json(&out))
        }
        Command::Table => {
            let rep = reproduce_table(&cfg)?;
            let text = if csv { rep.to_csv() } else { rep.to_json() };
            if !rep.matches() {
                return Err(Failure { code: EXIT_MISMATCH, message: format!("table mismatch\n{}", rep.diff()), output: Some(text) });
            }
            Ok(text)
        }
    }
}

/// Exact rational from a decimal literal such as `0.25` or `2/3`.
fn parse_decimal(s: &str) -> Result<Rational, Failure> {
    if s.contains('/') {
        return Ok(parse_rational(s)?);
    }
    let bad = || fail(EXIT_USAGE, format!("invalid decimal {s:?}"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = parse_rational(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let scale = Rational::from_integer(10.into()).pow(frac.len() as i32);
    Ok(num / scale)
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli);
    let (text, code) = match result {
        Ok(t) => (Some(t), 0),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.output, f.code)
        }
    };
    if let Some(t) = text {
        if let Err(e) = emit(&t, cli.common.out.as_ref()) {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
    }
    ExitCode::from(code)
}
