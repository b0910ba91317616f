//! Command-line front end: `algser fit|predict|sweep|oracle`.
//!
//! Coefficients travel in plain text files — one decimal per line, `#`
//! comments and blank lines ignored — so runs are diffable and trivially
//! scriptable. `fit` prints the fitted polynomial set, `predict` the
//! prediction table (with error columns when a truth file is supplied),
//! `sweep` the one-step-ahead error of each known prefix, and `oracle`
//! generates coefficient files for the bundled examples or any combinator
//! expression.
//!
//! Output formats: `text` (aligned table, values rounded to `--digits`),
//! `csv` and `json` (full precision, stable field names `j`, `f_j`, `a_j`,
//! `abs_err`, `rel_err_pct`). Exit codes: 0 success, 2 insufficient input,
//! 3 singular system, 4 zero denominator, 5 usage error, 1 anything else.

use crate::hermite_pade::{solve_hpp, verify_order, DegreeSpec, FitError, PolynomialSet};
use crate::oracle::{self, reference_errors, OracleError, ReportRow};
use crate::predictor::{predict_k, PredictError, PredictionState};
use crate::series::PowerSeries;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::error::Error;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "algser",
    version,
    about = "Fit Hermite-Padé polynomials to a truncated power series and predict further coefficients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the polynomial set and report the order residuals
    Fit {
        /// Coefficient file (one decimal per line, # comments)
        #[arg(long)]
        input: PathBuf,
        /// Algebraic degree N of the approximant family
        #[arg(long = "N")]
        n: usize,
        /// Polynomial degrees p_0..p_N, comma-separated
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Decimal places for values in text output
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Fit once, then predict coefficients beyond the fitted prefix
    Predict {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        /// How many coefficients to predict
        #[arg(long = "predict")]
        predict: usize,
        /// Optional file of true coefficients for the error columns
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// One-step-ahead prediction error for every known prefix
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Emit coefficients of a bundled example or combinator expression
    Oracle {
        /// ex1 | ex2 | ex3, or an expression like
        /// "sum(binomial(2,-3,1/2), rational(5,-1,one))"
        #[arg(value_name = "EXAMPLE")]
        name: Option<String>,
        /// Alternative to the positional example name
        #[arg(long)]
        example: Option<String>,
        /// How many coefficients to emit
        #[arg(long)]
        count: usize,
    },
}

/// Anything a command can fail with, tagged with the process exit code the
/// binary maps it to.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or malformed input data (exit 5).
    Usage(String),
    /// Filesystem or stream failure (exit 1).
    Io(String),
    Fit { spec: String, source: FitError },
    Predict { spec: String, source: PredictError },
    Oracle(OracleError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{}", msg),
            CliError::Io(msg) => write!(f, "{}", msg),
            CliError::Fit { spec, source } => write!(f, "fit for {}: {}", spec, source),
            CliError::Predict { spec, source } => {
                write!(f, "prediction for {}: {}", spec, source)
            }
            CliError::Oracle(e) => write!(f, "{}", e),
        }
    }
}

impl Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 5,
            CliError::Io(_) => 1,
            CliError::Fit { source, .. } => match source {
                FitError::InsufficientCoefficients { .. } => 2,
                FitError::SingularSystem => 3,
                FitError::InvalidSpec(_) => 5,
            },
            CliError::Predict { source, .. } => match source {
                PredictError::ZeroDenominator => 4,
                PredictError::InsufficientSeeds { .. } => 2,
                PredictError::Overflow { .. } | PredictError::SpecMismatch => 1,
            },
            CliError::Oracle(source) => match source {
                OracleError::InvalidSpec(_) | OracleError::Parse(_) => 5,
                OracleError::InsufficientTruth { .. } => 2,
            },
        }
    }
}

fn spec_label(spec: &DegreeSpec) -> String {
    let degrees: Vec<String> = spec.degrees().iter().map(|d| d.to_string()).collect();
    format!("N={} degrees ({})", spec.n(), degrees.join(","))
}

/// Read a coefficient file: one decimal per line, `#` comments and blank
/// lines skipped, every value finite.
pub fn read_coefficients(path: &Path) -> Result<PowerSeries, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {}", path.display(), e)))?;
    let mut coeffs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            CliError::Usage(format!(
                "{}:{}: not a decimal coefficient: {:?}",
                path.display(),
                lineno + 1,
                line
            ))
        })?;
        if !value.is_finite() {
            return Err(CliError::Usage(format!(
                "{}:{}: coefficient must be finite",
                path.display(),
                lineno + 1
            )));
        }
        coeffs.push(value);
    }
    PowerSeries::new(coeffs).map_err(|e| {
        CliError::Usage(format!("{}: {}", path.display(), e))
    })
}

fn build_spec(n: usize, degrees: &[usize]) -> Result<DegreeSpec, CliError> {
    DegreeSpec::new(n, degrees.to_vec()).map_err(|e| CliError::Usage(e.to_string()))
}

// Shortest representation that round-trips; used everywhere full precision
// is promised (CSV, JSON, oracle files, fit coefficients).
fn full(x: f64) -> String {
    format!("{}", x)
}

fn fixed(x: f64, digits: usize) -> String {
    format!("{:.*}", digits, x)
}

fn write_aligned(out: &mut dyn Write, rows: &[Vec<String>]) -> Result<(), CliError> {
    let columns = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:>width$}", cell, width = widths[i]));
        }
        writeln!(out, "{}", line.trim_end()).map_err(stream_error)?;
    }
    Ok(())
}

fn stream_error(e: std::io::Error) -> CliError {
    CliError::Io(format!("cannot write output: {}", e))
}

/// Execute a parsed command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Fit { input, n, degrees, format, digits } => {
            cmd_fit(&input, n, &degrees, format, digits, out)
        }
        Command::Predict { input, n, degrees, predict, truth, format, digits } => {
            cmd_predict(&input, n, &degrees, predict, truth.as_deref(), format, digits, out)
        }
        Command::Sweep { input, n, degrees, format, digits } => {
            cmd_sweep(&input, n, &degrees, format, digits, out)
        }
        Command::Oracle { name, example, count } => cmd_oracle(name, example, count, out),
    }
}

fn fit_pipeline(
    input: &Path,
    n: usize,
    degrees: &[usize],
) -> Result<(PowerSeries, DegreeSpec, PolynomialSet), CliError> {
    let f = read_coefficients(input)?;
    let spec = build_spec(n, degrees)?;
    let set = solve_hpp(&f, &spec).map_err(|source| CliError::Fit {
        spec: spec_label(&spec),
        source,
    })?;
    Ok((f, spec, set))
}

#[derive(Serialize)]
struct FitReport<'a> {
    normalization: Normalization,
    polynomials: &'a [Vec<f64>],
    max_order_residual: f64,
}

#[derive(Serialize)]
struct Normalization {
    n: usize,
    j: usize,
}

fn cmd_fit(
    input: &Path,
    n: usize,
    degrees: &[usize],
    format: Format,
    _digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (f, spec, set) = fit_pipeline(input, n, degrees)?;
    let residuals = verify_order(&f, &set, &spec);
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let (norm_n, norm_j) = set.normalization.expect("fitted sets are normalized");

    match format {
        Format::Text => {
            writeln!(out, "normalization: p[{}][{}] = 1", norm_n, norm_j)
                .map_err(stream_error)?;
            for (idx, poly) in set.polys.iter().enumerate() {
                let coeffs: Vec<String> = poly.iter().map(|&c| full(c)).collect();
                writeln!(out, "P_{}: {}", idx, coeffs.join(" ")).map_err(stream_error)?;
            }
            writeln!(out, "max order residual: {:e}", max_residual).map_err(stream_error)?;
        }
        Format::Csv => {
            writeln!(out, "field,n,j,value").map_err(stream_error)?;
            for (idx, poly) in set.polys.iter().enumerate() {
                for (j, &c) in poly.iter().enumerate() {
                    writeln!(out, "coefficient,{},{},{}", idx, j, full(c))
                        .map_err(stream_error)?;
                }
            }
            writeln!(out, "normalization,{},{},1", norm_n, norm_j).map_err(stream_error)?;
            writeln!(out, "max_order_residual,,,{}", full(max_residual))
                .map_err(stream_error)?;
        }
        Format::Json => {
            let report = FitReport {
                normalization: Normalization { n: norm_n, j: norm_j },
                polynomials: &set.polys,
                max_order_residual: max_residual,
            };
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Io(format!("cannot encode JSON: {}", e)))?;
            writeln!(out, "{}", text).map_err(stream_error)?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_predict(
    input: &Path,
    n: usize,
    degrees: &[usize],
    predict: usize,
    truth: Option<&Path>,
    format: Format,
    digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if predict == 0 {
        return Err(CliError::Usage("--predict must be at least 1".into()));
    }
    let (f, spec, set) = fit_pipeline(input, n, degrees)?;
    let m = spec.required_input_length();
    let predictions = predict_k(&f, &spec, &set, predict).map_err(|source| {
        CliError::Predict { spec: spec_label(&spec), source }
    })?;

    let rows: Vec<ReportRow> = match truth {
        Some(path) => {
            let truth_series = read_coefficients(path)?;
            reference_errors(&truth_series, &predictions, m).map_err(CliError::Oracle)?
        }
        None => predictions
            .iter()
            .enumerate()
            .map(|(i, &a)| ReportRow {
                j: m + i,
                truth: None,
                predicted: a,
                abs_err: None,
                rel_err_pct: None,
            })
            .collect(),
    };
    render_prediction_rows(&rows, truth.is_some(), format, digits, out)
}

fn render_prediction_rows(
    rows: &[ReportRow],
    with_truth: bool,
    format: Format,
    digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Text => {
            let mut table: Vec<Vec<String>> = Vec::with_capacity(rows.len() + 1);
            if with_truth {
                table.push(
                    ["j", "f_j", "a_j", "abs_err", "rel_err_pct"]
                        .map(String::from)
                        .to_vec(),
                );
            } else {
                table.push(["j", "a_j"].map(String::from).to_vec());
            }
            for row in rows {
                let mut cells = vec![row.j.to_string()];
                if with_truth {
                    cells.push(opt_fixed(row.truth, digits));
                    cells.push(fixed(row.predicted, digits));
                    cells.push(opt_fixed(row.abs_err, digits));
                    cells.push(opt_fixed_or(row.rel_err_pct, 2, "-"));
                } else {
                    cells.push(fixed(row.predicted, digits));
                }
                table.push(cells);
            }
            write_aligned(out, &table)
        }
        Format::Csv => {
            if with_truth {
                writeln!(out, "j,f_j,a_j,abs_err,rel_err_pct").map_err(stream_error)?;
            } else {
                writeln!(out, "j,a_j").map_err(stream_error)?;
            }
            for row in rows {
                if with_truth {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        row.j,
                        opt_full(row.truth),
                        full(row.predicted),
                        opt_full(row.abs_err),
                        opt_full(row.rel_err_pct),
                    )
                    .map_err(stream_error)?;
                } else {
                    writeln!(out, "{},{}", row.j, full(row.predicted)).map_err(stream_error)?;
                }
            }
            Ok(())
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&serde_json::json!({ "rows": rows }))
                .map_err(|e| CliError::Io(format!("cannot encode JSON: {}", e)))?;
            writeln!(out, "{}", text).map_err(stream_error)
        }
    }
}

fn opt_full(v: Option<f64>) -> String {
    v.map(full).unwrap_or_default()
}

fn opt_fixed(v: Option<f64>, digits: usize) -> String {
    v.map(|x| fixed(x, digits)).unwrap_or_else(|| "-".into())
}

fn opt_fixed_or(v: Option<f64>, digits: usize, fallback: &str) -> String {
    v.map(|x| fixed(x, digits)).unwrap_or_else(|| fallback.into())
}

/// One row of the sweep report: prediction of `a_j` from the prefix
/// `a_0..a_{j-1}`, compared against the known value when there is one.
#[derive(Debug, Serialize)]
struct SweepRow {
    j: usize,
    #[serde(rename = "a_j")]
    predicted: Option<f64>,
    #[serde(rename = "f_j")]
    truth: Option<f64>,
    abs_err: Option<f64>,
    rel_err_pct: Option<f64>,
    status: String,
}

fn cmd_sweep(
    input: &Path,
    n: usize,
    degrees: &[usize],
    format: Format,
    digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (f, spec, set) = fit_pipeline(input, n, degrees)?;
    let m = spec.required_input_length();

    // The degree spec is fixed, and a fit consumes exactly the first M
    // coefficients no matter how long the prefix — so the refit per prefix
    // is the one fit above, and only the seeding grows. Prediction failures
    // mark their row and the sweep keeps going.
    let last = if f.len() == m { m } else { f.len() - 1 };
    let mut rows = Vec::new();
    for prefix in m..=last {
        let row = match PredictionState::with_seed_len(&f, &spec, &set, prefix)
            .and_then(|mut st| st.predict_next())
        {
            Ok(a) => {
                let truth = if prefix < f.len() { Some(f.get(prefix)) } else { None };
                let abs = truth.map(|t| (t - a).abs());
                let rel = match (truth, abs) {
                    (Some(t), Some(e)) if t != 0.0 => Some(100.0 * e / t.abs()),
                    _ => None,
                };
                SweepRow {
                    j: prefix,
                    predicted: Some(a),
                    truth,
                    abs_err: abs,
                    rel_err_pct: rel,
                    status: "ok".into(),
                }
            }
            Err(e) => SweepRow {
                j: prefix,
                predicted: None,
                truth: if prefix < f.len() { Some(f.get(prefix)) } else { None },
                abs_err: None,
                rel_err_pct: None,
                status: e.to_string(),
            },
        };
        rows.push(row);
    }

    match format {
        Format::Text => {
            let mut table = vec![
                ["j", "a_j", "f_j", "abs_err", "rel_err_pct", "status"]
                    .map(String::from)
                    .to_vec(),
            ];
            for row in &rows {
                table.push(vec![
                    row.j.to_string(),
                    opt_fixed(row.predicted, digits),
                    opt_fixed(row.truth, digits),
                    opt_fixed(row.abs_err, digits),
                    opt_fixed_or(row.rel_err_pct, 2, "-"),
                    row.status.clone(),
                ]);
            }
            write_aligned(out, &table)
        }
        Format::Csv => {
            writeln!(out, "j,a_j,f_j,abs_err,rel_err_pct,status").map_err(stream_error)?;
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    row.j,
                    opt_full(row.predicted),
                    opt_full(row.truth),
                    opt_full(row.abs_err),
                    opt_full(row.rel_err_pct),
                    row.status,
                )
                .map_err(stream_error)?;
            }
            Ok(())
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&serde_json::json!({ "rows": rows }))
                .map_err(|e| CliError::Io(format!("cannot encode JSON: {}", e)))?;
            writeln!(out, "{}", text).map_err(stream_error)
        }
    }
}

fn cmd_oracle(
    name: Option<String>,
    example: Option<String>,
    count: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let name = match (name, example) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Usage(
                "positional example and --example disagree; give only one".into(),
            ))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(CliError::Usage(
                "an example name (ex1|ex2|ex3) or combinator expression is required".into(),
            ))
        }
    };
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let spec = match oracle::by_name(&name) {
        Some(s) => s,
        None if name.contains('(') => oracle::parse(&name).map_err(CliError::Oracle)?,
        None => {
            return Err(CliError::Usage(format!(
                "unknown example {:?}; expected ex1, ex2, ex3 or a combinator expression",
                name
            )))
        }
    };
    let series = oracle::taylor(&spec, count).map_err(CliError::Oracle)?;
    for &c in series.coeffs() {
        writeln!(out, "{}", full(c)).map_err(stream_error)?;
    }
    Ok(())
}
