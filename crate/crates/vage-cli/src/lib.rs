//! Command-line front end over `vage-core`: weight-family reports, series
//! algebra, inequality suites, realization algebra and Hermite numerics.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain/precondition error (the
//! message names the violated precondition), 4 numeric non-convergence.

pub mod expr;
pub mod json;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vage_core::analysis;
use vage_core::hermite::{self, QuadratureSpec, StripVerdict};
use vage_core::linsys::{self, Realization, WitnessStatus};
use vage_core::monoid::TruncationSpec;
use vage_core::series::{self, Series};
use vage_core::weights::{VageMode, WeightClass, WeightSpec};
use vage_core::Complex64;

/// Default seed when neither `--seed` nor `VAGE_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x5641_4745;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            exit_code: 2,
            message: message.into(),
        }
    }
}

impl From<vage_core::Error> for CliError {
    fn from(e: vage_core::Error) -> Self {
        CliError {
            exit_code: if e.is_nonconvergence() { 4 } else { 3 },
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "vage",
    version,
    about = "Exact truncated computation in weighted convolution rings"
)]
pub struct Cli {
    /// Write the report to this path instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weight-family reports and constants.
    #[command(subcommand)]
    Weight(WeightCmd),
    /// Series arithmetic on a truncation window.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Inequality suites and convergence experiments.
    #[command(subcommand)]
    Analysis(AnalysisCmd),
    /// Realization algebra and observability.
    #[command(subcommand)]
    Linsys(LinsysCmd),
    /// Hermite functions, the Mehler kernel and weighted Gaussian norms.
    #[command(subcommand)]
    Hermite(HermiteCmd),
}

#[derive(Subcommand, Debug)]
pub enum WeightCmd {
    /// Admissibility + regularity + superexponential report.
    Check {
        /// Family name or JSON weight spec.
        #[arg(long)]
        spec: String,
        /// Regularity order for the partial sum.
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Generators probed for admissibility and regularity.
        #[arg(long = "K", value_parser = parse_count, default_value = "8")]
        max_generator: u64,
        /// Degree bound of the superexponential probe window.
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// The constant A(d) = (sum_alpha a_alpha^-d)^(1/2).
    VageConstant {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        d: u32,
        /// Use the closed-form product (exponential families only).
        #[arg(long)]
        closed_form: bool,
        /// Window for the partial (lower-bound) mode, as K,N.
        #[arg(long, value_parser = parse_window)]
        window: Option<TruncationSpec>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BinarySeriesOp {
    Convolve,
    Add,
}

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    /// Binary operation on two series.
    Op {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long, value_enum)]
        op: BinarySeriesOp,
        #[arg(long, value_parser = parse_window)]
        window: Option<TruncationSpec>,
    },
    /// Exact truncated inverse (or the Neumann partial sum).
    Invert {
        #[arg(long = "in", allow_hyphen_values = true)]
        input: String,
        /// Sum the Neumann series with this many terms instead.
        #[arg(long)]
        neumann: Option<u32>,
        #[arg(long, value_parser = parse_window)]
        window: Option<TruncationSpec>,
    },
    /// Weighted norm of a series.
    Norm {
        #[arg(long = "in", allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        spec: String,
        #[arg(long, allow_negative_numbers = true)]
        p: i32,
        #[arg(long, value_parser = parse_window)]
        window: Option<TruncationSpec>,
    },
    /// Power-series composition phi(f).
    Compose {
        /// `exp`, `geometric`, `identity`, or a comma list of complex
        /// coefficients.
        #[arg(long)]
        phi: String,
        #[arg(long = "in", allow_hyphen_values = true)]
        input: String,
        #[arg(long, value_parser = parse_window)]
        window: Option<TruncationSpec>,
        /// Convergence radius override for coefficient lists.
        #[arg(long)]
        radius: Option<f64>,
        /// Enforce the convergence guard `|E[f]| < R / A(d)` for this weight.
        #[arg(long)]
        guard_spec: Option<String>,
        /// Order d of the guard constant.
        #[arg(long, default_value_t = 2)]
        guard_d: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum AnalysisCmd {
    /// Check the convolution-norm inequality on one pair or a random suite.
    Vage {
        #[arg(long)]
        spec: String,
        #[arg(long, allow_negative_numbers = true)]
        p: i32,
        #[arg(long, allow_negative_numbers = true)]
        q: i32,
        #[arg(long)]
        d: u32,
        /// Number of random unit-norm pairs.
        #[arg(long, value_parser = parse_count)]
        random: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        lhs: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rhs: Option<String>,
        #[arg(long, value_parser = parse_window)]
        window: Option<TruncationSpec>,
    },
    /// Find monomial pairs defeating any constant for the Schwartz weight.
    SchwartzFailure {
        #[arg(long, allow_negative_numbers = true)]
        p: i32,
        #[arg(long, allow_negative_numbers = true)]
        q: i32,
        #[arg(long)]
        target: f64,
    },
    /// Partial products prod_{n<=K} (1 + 1/((2n)^d - 1)).
    Zhang {
        #[arg(long)]
        d: u32,
        #[arg(long = "K", value_parser = parse_count)]
        max_n: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RealizationOp {
    Sum,
    Product,
    Inverse,
    ConcatCol,
    ConcatRow,
}

#[derive(Subcommand, Debug)]
pub enum LinsysCmd {
    /// Evaluate a realization at a ring element.
    Eval {
        /// Realization JSON (inline or @file).
        #[arg(long)]
        real: String,
        /// Series to substitute for z.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Combine realizations (sum, product, inverse, concatenation).
    Compose {
        #[arg(long, value_enum)]
        op: RealizationOp,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: Option<String>,
    },
    /// Kalman observability of the expectation pair, with optional random
    /// state-vector witnesses.
    Observable {
        #[arg(long)]
        real: String,
        #[arg(long, default_value_t = 0)]
        trials: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecayKind {
    /// `|F_n| = exp(-sqrt(2n+1))`
    ExpSqrt,
    /// `|F_n| = 2^(-n/2)`
    Geometric,
    /// `|F_n| = exp(-rate * sqrt(2n+1))`
    Custom,
}

#[derive(Args, Debug)]
pub struct GridArg {
    /// Real sample grid as MIN,MAX,STEP.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: (f64, f64, f64),
}

#[derive(Subcommand, Debug)]
pub enum HermiteCmd {
    /// Mehler kernel error table (CSV) over a grid of (u, v) and a list of s.
    Mehler {
        #[command(flatten)]
        grid: GridArg,
        /// Comma list of s parameters (complex literals, |s| < 1).
        #[arg(long = "s", allow_hyphen_values = true)]
        s_values: String,
        #[arg(long)]
        terms: u32,
    },
    /// Weighted Gaussian integral form of the squared G_p norm.
    GpNorm {
        /// Comma list of Hermite coefficients (complex literals).
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        p: u32,
        /// Relative agreement required between quadrature refinements.
        #[arg(long, default_value_t = 1e-7)]
        rel_tolerance: f64,
        #[arg(long, default_value_t = 6)]
        max_levels: u32,
    },
    /// Strip radius estimate for a Hermite coefficient decay profile.
    Strip {
        #[arg(long, value_enum)]
        decay: DecayKind,
        #[arg(long, value_parser = parse_count)]
        nmax: u64,
        /// Decay rate for --decay custom.
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long, default_value_t = hermite::DEFAULT_STRIP_CAP)]
        cap: f64,
    },
    /// Sample grid of Hermite functions (CSV of n, x, xi_n(x)).
    Sample {
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        grid: GridArg,
    },
}

/// Counts accept plain integers or scientific notation like 1e6.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("'{s}' is not a count (integer or scientific notation)"))?;
    if !v.is_finite() || v < 0.0 || v > 9.0e18 {
        return Err(format!("count '{s}' out of range"));
    }
    Ok(v.round() as u64)
}

fn parse_window(s: &str) -> Result<TruncationSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("window must be K,N".into());
    }
    let k: u32 = parts[0]
        .trim()
        .parse()
        .map_err(|_| "window K must be a positive integer".to_string())?;
    let n: u32 = parts[1]
        .trim()
        .parse()
        .map_err(|_| "window N must be a nonnegative integer".to_string())?;
    if k == 0 {
        return Err("window K must be at least 1".into());
    }
    check_window_size(TruncationSpec::new(k, n)).map_err(|e| e.message)
}

/// Desk-scale guard shared by flag and JSON windows: dense operations
/// enumerate the window, so its index count stays bounded.
pub fn check_window_size(window: TruncationSpec) -> Result<TruncationSpec, CliError> {
    const MAX_SIDE: u32 = 4096;
    const MAX_INDEX_COUNT: u64 = 250_000;
    if window.max_generator > MAX_SIDE || window.max_degree > MAX_SIDE {
        return Err(CliError::usage(format!(
            "window {},{} is beyond the supported size (sides up to {MAX_SIDE})",
            window.max_generator, window.max_degree
        )));
    }
    let count = window.index_count();
    if count > MAX_INDEX_COUNT {
        return Err(CliError::usage(format!(
            "window {},{} holds {count} indices; the supported bound is {MAX_INDEX_COUNT}",
            window.max_generator, window.max_degree
        )));
    }
    Ok(window)
}

fn parse_grid(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("grid must be MIN,MAX,STEP".into());
    }
    let read = |i: usize| -> Result<f64, String> {
        parts[i]
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad grid number '{}'", parts[i]))
    };
    let (min, max, step) = (read(0)?, read(1)?, read(2)?);
    if !(step > 0.0) || max < min {
        return Err("grid needs MIN <= MAX and STEP > 0".into());
    }
    Ok((min, max, step))
}

fn grid_points((min, max, step): (f64, f64, f64)) -> Vec<f64> {
    let count = ((max - min) / step).round() as usize;
    (0..=count).map(|i| min + step * i as f64).collect()
}

/// CLI result payload.
pub enum Output {
    Json(Value),
    Csv(String),
}

impl Output {
    pub fn to_text(&self) -> String {
        match self {
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(v).expect("serializable");
                s.push('\n');
                s
            }
            Output::Csv(s) => s.clone(),
        }
    }
}

fn resolve_input(s: &str) -> Result<String, CliError> {
    if let Some(path) = s.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read '{path}': {e}")))
    } else {
        Ok(s.to_string())
    }
}

/// Loads a series from inline JSON, `@file`, or a literal expression.
/// `literal_window` applies to literals only; JSON inputs carry their own
/// window, and any disagreement surfaces from the ring operations as a
/// window-mismatch domain error.
fn load_series(raw: &str, literal_window: Option<TruncationSpec>) -> Result<Series, CliError> {
    let text = resolve_input(raw)?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(trimmed)
            .map_err(|e| CliError::usage(format!("bad series JSON: {e}")))?;
        json::series_from_value(&value)
    } else {
        let window = literal_window.ok_or_else(|| {
            CliError::usage("--window K,N is required when the series is a literal expression")
        })?;
        expr::parse_series(trimmed, window)
    }
}

fn load_weight(raw: &str) -> Result<WeightSpec, CliError> {
    let text = resolve_input(raw)?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(trimmed)
            .map_err(|e| CliError::usage(format!("bad weight JSON: {e}")))?;
        json::weight_from_value(&value)
    } else {
        match trimmed {
            "schwartz" => Ok(WeightSpec::Schwartz),
            "gspace" => Ok(WeightSpec::GSpace),
            "kondratiev" => Ok(WeightSpec::Kondratiev),
            "doubly_exponential" => Ok(WeightSpec::DoublyExponential),
            other => Err(CliError::usage(format!(
                "unknown weight '{other}'; use a family name or a JSON spec"
            ))),
        }
    }
}

fn load_realization(raw: &str) -> Result<Realization, CliError> {
    let text = resolve_input(raw)?;
    let value: Value = serde_json::from_str(text.trim())
        .map_err(|e| CliError::usage(format!("bad realization JSON: {e}")))?;
    json::realization_from_value(&value)
}

fn default_seed(explicit: Option<u64>) -> u64 {
    explicit.unwrap_or_else(|| {
        std::env::var("VAGE_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_SEED)
    })
}

fn class_value(class: Option<WeightClass>) -> Value {
    match class {
        Some(WeightClass::Exponential) => json!("exponential"),
        Some(WeightClass::Superexponential) => json!("superexponential"),
        Some(WeightClass::NotSuperexponential) => json!("not_superexponential"),
        None => Value::Null,
    }
}

fn complex_value(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

pub fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Weight(cmd) => weight_command(cmd),
        Command::Series(cmd) => series_command(cmd),
        Command::Analysis(cmd) => analysis_command(cmd),
        Command::Linsys(cmd) => linsys_command(cmd),
        Command::Hermite(cmd) => hermite_command(cmd),
    }
}

fn weight_command(cmd: &WeightCmd) -> Result<Output, CliError> {
    match cmd {
        WeightCmd::Check {
            spec,
            d,
            max_generator,
            degree,
        } => {
            let weight = load_weight(spec)?;
            let k = u32::try_from(*max_generator)
                .ok()
                .filter(|&k| k <= 10_000_000)
                .ok_or_else(|| CliError::usage("--K must be at most 1e7"))?;
            if k == 0 {
                return Err(CliError::usage("--K must be at least 1"));
            }
            let probe = TruncationSpec::new(k, *degree);
            if probe.index_count() > 5000 {
                return Err(CliError::usage(
                    "probe window too large for the pairwise check; lower --K or --degree",
                ));
            }
            let admissibility = weight.is_admissible(&probe);
            let regularity = weight.regularity_sum(*d, k).ok();
            let superexp = weight.check_superexponential(&probe);
            Ok(Output::Json(json!({
                "spec": json::weight_to_value(&weight),
                "d": d,
                "K": k,
                "probe_window": json::window_to_value(probe),
                "admissible": admissibility.ok,
                "unit_value": admissibility.unit_value,
                "violations": admissibility.violations
                    .iter()
                    .map(|&(g, w)| json!([g, w]))
                    .collect::<Vec<_>>(),
                "regularity_sum": regularity.map(Value::from).unwrap_or(Value::Null),
                "superexponential": superexp.ok,
                "witness": superexp.witness.as_ref().map(|(a, b)| {
                    json!([json::multi_index_to_value(a), json::multi_index_to_value(b)])
                }).unwrap_or(Value::Null),
                "pairs_checked": superexp.pairs_checked,
                "known_class": class_value(weight.known_class()),
            })))
        }
        WeightCmd::VageConstant {
            spec,
            d,
            closed_form,
            window,
        } => {
            let weight = load_weight(spec)?;
            let (mode, mode_name) = if *closed_form {
                (VageMode::ClosedForm, "closed_form")
            } else {
                let w = window.ok_or_else(|| {
                    CliError::usage("partial mode needs --window K,N (or pass --closed-form)")
                })?;
                (VageMode::Partial(w), "partial")
            };
            let value = weight.vage_constant(*d, mode)?;
            let mut report = json!({
                "spec": json::weight_to_value(&weight),
                "d": d,
                "mode": mode_name,
                "value": value,
                "squared": value * value,
            });
            if let (VageMode::Partial(w), Value::Object(map)) = (mode, &mut report) {
                map.insert("window".into(), json::window_to_value(w));
            }
            Ok(Output::Json(report))
        }
    }
}

fn series_command(cmd: &SeriesCmd) -> Result<Output, CliError> {
    match cmd {
        SeriesCmd::Op {
            lhs,
            rhs,
            op,
            window,
        } => {
            let f = load_series(lhs, *window)?;
            let g = load_series(rhs, window.or(Some(f.window())))?;
            let result = match op {
                BinarySeriesOp::Convolve => f.convolve(&g)?,
                BinarySeriesOp::Add => Series::linear_combine(
                    Complex64::new(1.0, 0.0),
                    &f,
                    Complex64::new(1.0, 0.0),
                    &g,
                )?,
            };
            Ok(Output::Json(json::series_to_value(&result)))
        }
        SeriesCmd::Invert {
            input,
            neumann,
            window,
        } => {
            let f = load_series(input, *window)?;
            let result = match neumann {
                Some(terms) => f.neumann_invert(*terms)?,
                None => f.invert()?,
            };
            Ok(Output::Json(json::series_to_value(&result)))
        }
        SeriesCmd::Norm {
            input,
            spec,
            p,
            window,
        } => {
            let f = load_series(input, *window)?;
            let weight = load_weight(spec)?;
            let value = f.norm_p(&weight, *p)?;
            Ok(Output::Json(json!({
                "value": value,
                "p": p,
                "spec": json::weight_to_value(&weight),
                "window": json::window_to_value(f.window()),
            })))
        }
        SeriesCmd::Compose {
            phi,
            input,
            window,
            radius,
            guard_spec,
            guard_d,
        } => {
            let f = load_series(input, *window)?;
            let guard = match guard_spec {
                Some(spec) => {
                    let weight = load_weight(spec)?;
                    Some(weight.vage_constant(*guard_d, VageMode::ClosedForm)?)
                }
                None => None,
            };
            let (coeffs, default_radius): (Box<dyn FnMut(u64) -> Complex64>, f64) =
                match phi.as_str() {
                    "exp" => {
                        let mut factorial = 1.0f64;
                        (
                            Box::new(move |n| {
                                if n > 0 {
                                    factorial *= n as f64;
                                }
                                Complex64::new(1.0 / factorial, 0.0)
                            }),
                            f64::INFINITY,
                        )
                    }
                    "geometric" => (Box::new(|_| Complex64::new(1.0, 0.0)), 1.0),
                    "identity" => (
                        Box::new(|n| {
                            if n == 1 {
                                Complex64::new(1.0, 0.0)
                            } else {
                                Complex64::ZERO
                            }
                        }),
                        f64::INFINITY,
                    ),
                    list => {
                        let coeffs: Vec<Complex64> = list
                            .split(',')
                            .map(|tok| expr::parse_complex(tok.trim()))
                            .collect::<Result<_, _>>()?;
                        (
                            Box::new(move |n| {
                                coeffs.get(n as usize).copied().unwrap_or(Complex64::ZERO)
                            }),
                            f64::INFINITY,
                        )
                    }
                };
            let radius = radius.unwrap_or(default_radius);
            let result = series::compose(coeffs, radius, &f, guard)?;
            Ok(Output::Json(json::series_to_value(&result)))
        }
    }
}

fn analysis_command(cmd: &AnalysisCmd) -> Result<Output, CliError> {
    match cmd {
        AnalysisCmd::Vage {
            spec,
            p,
            q,
            d,
            random,
            seed,
            lhs,
            rhs,
            window,
        } => {
            let weight = load_weight(spec)?;
            match (random, lhs, rhs) {
                (Some(trials), None, None) => {
                    let window = window.ok_or_else(|| {
                        CliError::usage("--window K,N is required for the random suite")
                    })?;
                    let seed = default_seed(*seed);
                    let trials = u32::try_from(*trials)
                        .ok()
                        .filter(|&t| t <= 1_000_000)
                        .ok_or_else(|| CliError::usage("--random must be at most 1e6"))?;
                    let suite =
                        analysis::vage_random_suite(&weight, *p, *q, *d, window, trials, seed)?;
                    Ok(Output::Json(json!({
                        "mode": "random",
                        "spec": json::weight_to_value(&weight),
                        "window": json::window_to_value(window),
                        "seed": seed,
                        "p": p,
                        "q": q,
                        "d": d,
                        "trials": suite.trials,
                        "failures": suite.failures,
                        "all_hold": suite.all_hold(),
                        "max_ratio": suite.max_ratio,
                        "constant": suite.constant,
                    })))
                }
                (None, Some(lhs), Some(rhs)) => {
                    let f = load_series(lhs, *window)?;
                    let g = load_series(rhs, window.or(Some(f.window())))?;
                    let report = analysis::check_vage(&f, &g, &weight, *p, *q, *d)?;
                    Ok(Output::Json(json!({
                        "mode": "pair",
                        "spec": json::weight_to_value(&weight),
                        "window": json::window_to_value(f.window()),
                        "p": report.p,
                        "q": report.q,
                        "d": report.d,
                        "lhs": report.lhs,
                        "rhs": report.rhs,
                        "ratio": report.ratio,
                        "holds": report.holds,
                        "constant": report.constant,
                    })))
                }
                _ => Err(CliError::usage(
                    "pass either --random N or both --lhs and --rhs",
                )),
            }
        }
        AnalysisCmd::SchwartzFailure { p, q, target } => {
            let hit = analysis::demonstrate_schwartz_failure(*p, *q, *target)?;
            Ok(Output::Json(json!({
                "p": p,
                "q": q,
                "target": target,
                "k": hit.k,
                "ratio": hit.ratio,
                "witness": [
                    json::multi_index_to_value(&hit.witness.0),
                    json::multi_index_to_value(&hit.witness.1),
                ],
                "probes": hit.probes,
            })))
        }
        AnalysisCmd::Zhang { d, max_n } => {
            if *d == 0 {
                return Err(CliError::usage("--d must be at least 1"));
            }
            if *max_n > 1_000_000_000 {
                return Err(CliError::usage("--K must be at most 1e9"));
            }
            let value = analysis::zhang_partial(*d, *max_n);
            let mut report = json!({ "d": d, "K": max_n, "value": value });
            if *d == 2 {
                let map = report.as_object_mut().expect("object");
                map.insert("target".into(), json!("pi/2"));
                map.insert("target_value".into(), json!(core::f64::consts::PI / 2.0));
            }
            Ok(Output::Json(report))
        }
    }
}

fn linsys_command(cmd: &LinsysCmd) -> Result<Output, CliError> {
    match cmd {
        LinsysCmd::Eval { real, at } => {
            let realization = load_realization(real)?;
            let f = load_series(at, Some(realization.window()))?;
            let value = realization.eval(&f)?;
            Ok(Output::Json(json!({
                "rows": value.rows(),
                "cols": value.cols(),
                "entries": json::matrix_to_value(&value),
            })))
        }
        LinsysCmd::Compose { op, lhs, rhs } => {
            let left = load_realization(lhs)?;
            let result = match op {
                RealizationOp::Inverse => {
                    if rhs.is_some() {
                        return Err(CliError::usage("--op inverse takes only --lhs"));
                    }
                    left.inverse()?
                }
                binary => {
                    let rhs = rhs
                        .as_ref()
                        .ok_or_else(|| CliError::usage("this operation needs --rhs"))?;
                    let right = load_realization(rhs)?;
                    match binary {
                        RealizationOp::Sum => left.sum(&right)?,
                        RealizationOp::Product => left.product(&right)?,
                        RealizationOp::ConcatCol => left.concat_col(&right)?,
                        RealizationOp::ConcatRow => left.concat_row(&right)?,
                        RealizationOp::Inverse => unreachable!(),
                    }
                }
            };
            Ok(Output::Json(json::realization_to_value(&result)))
        }
        LinsysCmd::Observable { real, trials, seed } => {
            let realization = load_realization(real)?;
            let observable = linsys::kalman_observable(
                &realization.c.expectation(),
                &realization.a.expectation(),
            )?;
            let mut report = json!({
                "observable": observable,
                "state_dim": realization.state_dim(),
                "window": json::window_to_value(realization.window()),
            });
            if *trials > 0 {
                let seed = default_seed(*seed);
                let witness = linsys::observability_witness(&realization, *trials, seed)?;
                let map = report.as_object_mut().expect("object");
                map.insert("seed".into(), json!(seed));
                map.insert("trials".into(), json!(witness.trials));
                map.insert("certified".into(), json!(witness.certified));
                map.insert(
                    "status".into(),
                    json!(match witness.status {
                        WitnessStatus::Certified => "certified",
                        WitnessStatus::ZeroInput => "zero_input",
                        WitnessStatus::Inconclusive => "inconclusive",
                        WitnessStatus::Exhausted => "exhausted",
                    }),
                );
                map.insert(
                    "first_location".into(),
                    witness
                        .first_location
                        .map(|loc| {
                            json!({
                                "power": loc.power,
                                "output_row": loc.output_row,
                                "index": json::multi_index_to_value(&loc.index),
                                "magnitude": loc.magnitude,
                            })
                        })
                        .unwrap_or(Value::Null),
                );
            }
            Ok(Output::Json(report))
        }
    }
}

fn hermite_command(cmd: &HermiteCmd) -> Result<Output, CliError> {
    match cmd {
        HermiteCmd::Mehler {
            grid,
            s_values,
            terms,
        } => {
            let points = grid_points(grid.grid);
            if points.len() > 1001 {
                return Err(CliError::usage(
                    "mehler grids support at most 1001 points per axis",
                ));
            }
            let s_list: Vec<Complex64> = s_values
                .split(',')
                .map(|tok| expr::parse_complex(tok.trim()))
                .collect::<Result<_, _>>()?;
            let mut csv = String::from("u,v,s_re,s_im,lhs_re,lhs_im,rhs_re,rhs_im,abs_err\n");
            for &s in &s_list {
                for &u in &points {
                    for &v in &points {
                        let cmp = hermite::mehler_check(
                            Complex64::new(u, 0.0),
                            Complex64::new(v, 0.0),
                            s,
                            *terms,
                        )?;
                        csv.push_str(&format!(
                            "{u},{v},{},{},{},{},{},{},{}\n",
                            s.re, s.im, cmp.lhs.re, cmp.lhs.im, cmp.rhs.re, cmp.rhs.im, cmp.abs_err
                        ));
                    }
                }
            }
            Ok(Output::Csv(csv))
        }
        HermiteCmd::GpNorm {
            coeffs,
            p,
            rel_tolerance,
            max_levels,
        } => {
            let coeffs: Vec<Complex64> = coeffs
                .split(',')
                .map(|tok| expr::parse_complex(tok.trim()))
                .collect::<Result<_, _>>()?;
            let quad = QuadratureSpec {
                rel_tolerance: *rel_tolerance,
                max_levels: *max_levels,
                ..QuadratureSpec::default()
            };
            let integral = hermite::gp_integral_norm(&coeffs, *p, &quad)?;
            let coefficient_norm = hermite::gp_coefficient_norm(&coeffs, *p);
            let rel_err = (integral - coefficient_norm).abs() / coefficient_norm.max(1e-300);
            Ok(Output::Json(json!({
                "p": p,
                "coeffs": coeffs.iter().map(|&c| complex_value(c)).collect::<Vec<_>>(),
                "integral": integral,
                "coefficient_norm": coefficient_norm,
                "rel_err": rel_err,
            })))
        }
        HermiteCmd::Strip {
            decay,
            nmax,
            rate,
            cap,
        } => {
            if *nmax < 8 {
                return Err(CliError::usage("--nmax must be at least 8"));
            }
            if *nmax > 100_000_000 {
                return Err(CliError::usage("--nmax must be at most 1e8"));
            }
            let rate = match decay {
                DecayKind::Custom => rate.ok_or_else(|| {
                    CliError::usage("--decay custom needs --rate R (log|F_n| = -R sqrt(2n+1))")
                })?,
                _ => rate.unwrap_or(1.0),
            };
            let name = match decay {
                DecayKind::ExpSqrt => "exp-sqrt",
                DecayKind::Geometric => "geometric",
                DecayKind::Custom => "custom",
            };
            let estimate = match decay {
                DecayKind::Geometric => hermite::strip_radius(
                    |n| -(n as f64) * 0.5 * core::f64::consts::LN_2,
                    *nmax,
                    *cap,
                ),
                _ => hermite::strip_radius(
                    move |n| -rate * (2.0 * n as f64 + 1.0).sqrt(),
                    *nmax,
                    *cap,
                ),
            };
            Ok(Output::Json(json!({
                "decay": name,
                "n_max": nmax,
                "cap": cap,
                "tau": match estimate.verdict {
                    StripVerdict::Finite(tau) => json!(tau),
                    StripVerdict::Infinite => json!("infinite"),
                },
                "window": [estimate.window.0, estimate.window.1],
                "growth": estimate.growth,
            })))
        }
        HermiteCmd::Sample { n_max, grid } => {
            let points = grid_points(grid.grid);
            if points.len() > 100_001 {
                return Err(CliError::usage(
                    "sample grids support at most 100001 points",
                ));
            }
            let mut csv = String::from("n,x,xi\n");
            for &x in &points {
                let seq = hermite::hermite_fn_sequence(*n_max, Complex64::new(x, 0.0))?;
                for (n, value) in seq.iter().enumerate() {
                    csv.push_str(&format!("{n},{x},{}\n", value.re));
                }
            }
            Ok(Output::Csv(csv))
        }
    }
}

/// Parses and executes; returns (exit code, stdout text, stderr text).
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    (0, e.to_string(), String::new())
                }
                _ => (2, String::new(), e.to_string()),
            }
        }
    };
    match execute(&cli.command) {
        Ok(output) => {
            let text = output.to_text();
            match &cli.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => (0, String::new(), String::new()),
                    Err(e) => (2, String::new(), format!("cannot write {path:?}: {e}\n")),
                },
                None => (0, text, String::new()),
            }
        }
        Err(err) => (err.exit_code, String::new(), format!("error: {err}\n")),
    }
}
