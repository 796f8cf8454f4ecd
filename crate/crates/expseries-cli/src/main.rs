//! Command-line front end for the expseries library.
//!
//! Every subcommand prints exactly one output record — a `command` name,
//! the parsed `inputs` echoed back, the computed `outputs`, and numeric
//! `diagnostics` — as pretty JSON (default) or as `field,value` CSV rows.
//! The `figures` subcommand instead emits a CSV data table (to stdout, or
//! to a file under `--out` with a summary record on stdout).
//!
//! Exit codes: 0 success; 2 usage errors (malformed flags or literals);
//! 3 domain errors (odd order where even is required, endpoints outside a
//! convergence domain, missing moments, …); 4 non-convergence (a series
//! that exhausted its term budget, or quadrature that exhausted depth —
//! the record is still printed with `converged = false` diagnostics).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand, ValueEnum};

use expseries::gennormal::{generalized_shape, GenNormal, MultivariateGenNormal};
use expseries::gennormal::{empirical_central_moments, rect_limit, RectOrder};
use expseries::ode::{
    pairing_audit, residual, residual_max_on_grid, OdeEquation, SeriesHalf, SolutionSpec,
};
use expseries::series::{
    antiderivative, bracket_series, definite_integral, maclaurin_antiderivative, odd_reflection,
    Sign, TruncationPolicy, WORKING_EXPONENT_MAX,
};
use expseries::stirling::{double_factorial, factorial, stirling_report, wallis};
use expseries::Error;

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "expseries",
    version,
    about = "Series antiderivatives of e^(±x^n), the even-order plateau \
             distribution family, series ODE residual checks, and factorial \
             asymptotics",
    propagate_version = true
)]
struct Cli {
    /// Relative tolerance of the series truncation policy.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Term budget before an evaluation reports non-convergence.
    #[arg(long, global = true, default_value_t = 200)]
    max_terms: usize,

    /// Shape of the printed record.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SignArg {
    /// The growing kernel e^(x^n).
    Pos,
    /// The decaying kernel e^(−x^n).
    Neg,
}

impl SignArg {
    fn to_sign(self) -> Sign {
        match self {
            SignArg::Pos => Sign::Pos,
            SignArg::Neg => Sign::Neg,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormArg {
    /// e^(±x^n) times the bracket series (the native product form).
    Product,
    /// The bracket series alone, without the exponential prefactor.
    Bracket,
    /// The direct power series Σ (±1)^m x^(nm+1)/(m!(nm+1)).
    Maclaurin,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Closed gamma-function form, any even order.
    Gamma,
    /// Descending order-reduction recurrence, terminal value by gamma.
    Recurrence,
    /// Closed product form at multiples of n.
    Kn,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SeriesArg {
    /// Use the half that solves the selected equation.
    Auto,
    /// The odd-index half f (vanishing slope at 0 for n > 1).
    F,
    /// The even-index half g (unit slope at 0).
    G,
}

#[derive(Subcommand)]
enum Command {
    /// Definite integral of e^(±x^n); endpoints may be inf or -inf.
    Integrate(IntegrateArgs),
    /// Antiderivative of e^(±x^n) at a point, by one of three series forms.
    Antideriv(AntiderivArgs),
    /// Density of the even-order family at a point, with derivatives.
    Pdf(PointArgs),
    /// Cumulative distribution at a point through the decaying series.
    Cdf(PointArgs),
    /// Central moments by the gamma, recurrence, or product-form route.
    Moments(MomentsArgs),
    /// Generalized kurtosis, excess, and skewness from supplied moments.
    Shape(ShapeArgs),
    /// Product density of independent standardized components.
    Mvpdf(MvpdfArgs),
    /// Residual verification of the two series-solved equations.
    OdeCheck(OdeCheckArgs),
    /// Factorial approximations, their errors, and the Wallis partial.
    Stirling(StirlingArgs),
    /// Data tables behind the three reference figures.
    Figures(FiguresArgs),
}

#[derive(Args)]
struct IntegrateArgs {
    /// Power index n ≥ 1 in the exponent.
    #[arg(long)]
    n: u32,
    /// Sign of the exponent.
    #[arg(long, value_enum)]
    sign: SignArg,
    /// Lower endpoint: a number, inf, or -inf.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    /// Upper endpoint: a number, inf, or -inf.
    #[arg(long, allow_hyphen_values = true)]
    to: String,
}

#[derive(Args)]
struct AntiderivArgs {
    /// Evaluation abscissa.
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    /// Power index n ≥ 1 in the exponent.
    #[arg(long)]
    n: u32,
    /// Sign of the exponent.
    #[arg(long, value_enum)]
    sign: SignArg,
    /// Which series realization to evaluate.
    #[arg(long, value_enum, default_value_t = FormArg::Product)]
    form: FormArg,
}

#[derive(Args)]
struct PointArgs {
    /// Evaluation abscissa (cdf also accepts inf / -inf).
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    /// Even order of the family.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Location parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mean: f64,
    /// Scale parameter (> 0).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
}

#[derive(Args)]
struct MomentsArgs {
    /// Even order of the family.
    #[arg(long)]
    n: u32,
    /// Scale parameter (> 0).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Moment route.
    #[arg(long, value_enum, default_value_t = MethodArg::Gamma)]
    method: MethodArg,
    /// Moment order, for the gamma and recurrence routes.
    #[arg(long, conflicts_with = "k")]
    order: Option<u32>,
    /// Multiplier k for the product route (moment order k·n).
    #[arg(long)]
    k: Option<u32>,
    /// Also list the fundamental moments m_0, m_2, …, m_(n−2).
    #[arg(long)]
    fundamental: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["data", "moments"])))]
struct ShapeArgs {
    /// Reference even order n of the shape statistics.
    #[arg(long)]
    n: u32,
    /// File of whitespace-separated sample values; central moments are
    /// estimated from it.
    #[arg(long, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Central moments as a list like m4=1,m5=0,m8=5 (orders n, n+1, and
    /// 2n are required).
    #[arg(long, value_name = "LIST")]
    moments: Option<String>,
}

#[derive(Args)]
struct MvpdfArgs {
    /// Comma-separated even orders, one per coordinate.
    #[arg(long, value_delimiter = ',', required = true)]
    orders: Vec<u32>,
    /// Comma-separated standardized coordinates.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    z: Vec<f64>,
}

#[derive(Args)]
struct OdeCheckArgs {
    /// Equation selector: 13 (power forcing) or 14 (reciprocal forcing).
    #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u32).range(13..=14))]
    eq: u32,
    /// Series half to test against the equation.
    #[arg(long, value_enum, default_value_t = SeriesArg::Auto)]
    series: SeriesArg,
    /// Power index n ≥ 1 of the equation family.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Lower grid endpoint (the grid must not contain 0).
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    from: f64,
    /// Upper grid endpoint.
    #[arg(long, default_value_t = 1.2, allow_negative_numbers = true)]
    to: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 12)]
    points: usize,
    /// Coefficient of the growing homogeneous solution e^(x^n).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k1: f64,
    /// Coefficient of the decaying homogeneous solution e^(−x^n).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k2: f64,
}

#[derive(Args)]
struct StirlingArgs {
    /// Half-order n ≥ 1; the report concerns (2n)! and the n-th Wallis
    /// partial product.
    #[arg(long)]
    n: u32,
}

#[derive(Args)]
struct FiguresArgs {
    /// Which table: 1 = kernel family e^(−x^n) for n ∈ {2,4,6};
    /// 2 = one plateau kernel; 3 = inflexion loci over even n ∈ [2,40].
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    which: u8,
    /// Plateau order for table 2: an even integer, or inf for the exact
    /// rectangular limit.
    #[arg(long, default_value = "100")]
    n: String,
    /// Write the table to this file; the summary record goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Output record
// ---------------------------------------------------------------------------

/// One typed cell of the record: JSON keeps native numbers and booleans,
/// CSV renders reals with 17 significant digits so they re-parse to the
/// same bits.
enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Flag(bool),
    RealList(Vec<f64>),
    IntList(Vec<i64>),
}

impl Cell {
    fn to_json(&self) -> serde_json::Value {
        fn real(v: f64) -> serde_json::Value {
            match serde_json::Number::from_f64(v) {
                Some(num) => serde_json::Value::Number(num),
                // JSON has no non-finite numbers; fall back to the literal.
                None => serde_json::Value::String(format!("{v}")),
            }
        }
        match self {
            Cell::Real(v) => real(*v),
            Cell::Int(v) => serde_json::Value::Number((*v).into()),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Flag(b) => serde_json::Value::Bool(*b),
            Cell::RealList(vs) => serde_json::Value::Array(vs.iter().map(|&v| real(v)).collect()),
            Cell::IntList(vs) => {
                serde_json::Value::Array(vs.iter().map(|&v| serde_json::Value::Number(v.into())).collect())
            }
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Real(v) => csv_real(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => csv_quote(s),
            Cell::Flag(b) => b.to_string(),
            Cell::RealList(vs) => {
                csv_quote(&vs.iter().map(|&v| csv_real(v)).collect::<Vec<_>>().join(";"))
            }
            Cell::IntList(vs) => {
                csv_quote(&vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"))
            }
        }
    }
}

fn csv_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// An endpoint-style echo: finite values stay numeric, infinities echo the
/// flag literals inf / -inf.
fn endpoint_cell(v: f64) -> Cell {
    if v.is_finite() {
        Cell::Real(v)
    } else if v > 0.0 {
        Cell::Text("inf".into())
    } else {
        Cell::Text("-inf".into())
    }
}

struct Record {
    command: &'static str,
    inputs: BTreeMap<&'static str, Cell>,
    outputs: BTreeMap<&'static str, Cell>,
    diagnostics: BTreeMap<&'static str, Cell>,
}

impl Record {
    fn new(command: &'static str) -> Self {
        Record {
            command,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let section = |map: &BTreeMap<&'static str, Cell>| {
                    serde_json::Value::Object(
                        map.iter().map(|(k, v)| ((*k).to_string(), v.to_json())).collect(),
                    )
                };
                let mut top = serde_json::Map::new();
                top.insert("command".into(), serde_json::Value::String(self.command.into()));
                top.insert("inputs".into(), section(&self.inputs));
                top.insert("outputs".into(), section(&self.outputs));
                top.insert("diagnostics".into(), section(&self.diagnostics));
                let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(top))
                    .expect("record serialization cannot fail");
                text.push('\n');
                text
            }
            Format::Csv => {
                let mut text = String::from("field,value\n");
                let _ = writeln!(text, "command,{}", csv_quote(self.command));
                for (label, map) in
                    [("inputs", &self.inputs), ("outputs", &self.outputs), ("diagnostics", &self.diagnostics)]
                {
                    for (key, cell) in map.iter() {
                        let _ = writeln!(text, "{label}.{key},{}", cell.to_csv());
                    }
                }
                text
            }
        }
    }
}

/// What a successful subcommand hands back to main: the record, plus the
/// reason string when some evaluation failed to converge (exit 4).
struct Outcome {
    record: Record,
    non_converged: Option<String>,
}

impl Outcome {
    fn converged(record: Record) -> Self {
        Outcome { record, non_converged: None }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn build_policy(cli: &Cli) -> Result<TruncationPolicy, Error> {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(Error::Domain(format!(
            "--tol must be a positive finite number, got {}",
            cli.tol
        )));
    }
    if cli.max_terms == 0 {
        return Err(Error::Domain("--max-terms must be at least 1".into()));
    }
    Ok(TruncationPolicy { max_terms: cli.max_terms, rel_tol: cli.tol, abs_tol: cli.tol * 1e-3 })
}

fn common_inputs(cli: &Cli, inputs: &mut BTreeMap<&'static str, Cell>) {
    inputs.insert("tol", Cell::Real(cli.tol));
    inputs.insert("max_terms", Cell::Int(cli.max_terms as i64));
}

/// Exits with a clap usage error (code 2) for values that violate the flag
/// grammar rather than a mathematical precondition.
fn usage_error(message: &str) -> ! {
    Cli::command().error(clap::error::ErrorKind::InvalidValue, message).exit()
}

fn parse_endpoint(raw: &str) -> f64 {
    match raw.trim() {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        text => match text.parse::<f64>() {
            Ok(v) => v,
            Err(_) => usage_error(&format!(
                "endpoint {raw:?} is neither a number nor an inf/-inf literal"
            )),
        },
    }
}

fn series_diagnostics(
    diagnostics: &mut BTreeMap<&'static str, Cell>,
    eval: &expseries::series::SeriesEval,
) {
    diagnostics.insert("terms_used", Cell::Int(eval.terms_used as i64));
    diagnostics.insert("converged", Cell::Flag(eval.converged));
    diagnostics.insert("cancellation_index", Cell::Real(eval.cancellation_index));
}

fn non_converged_reason(terms: usize, budget: usize) -> Option<String> {
    Some(format!("series used all {terms} of {budget} allowed terms without meeting the tolerance"))
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

fn run_integrate(cli: &Cli, args: &IntegrateArgs) -> Result<Outcome, Error> {
    let policy = build_policy(cli)?;
    let a = parse_endpoint(&args.from);
    let b = parse_endpoint(&args.to);
    let eval = definite_integral(a, b, args.n, args.sign.to_sign(), &policy)?;

    let mut record = Record::new("integrate");
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("n", Cell::Int(args.n.into()));
    record.inputs.insert("sign", Cell::Text(args.sign.to_sign().to_string()));
    record.inputs.insert("from", endpoint_cell(a));
    record.inputs.insert("to", endpoint_cell(b));
    record.outputs.insert("value", Cell::Real(eval.value));
    series_diagnostics(&mut record.diagnostics, &eval);

    Ok(Outcome {
        non_converged: if eval.converged {
            None
        } else {
            non_converged_reason(eval.terms_used, policy.max_terms)
        },
        record,
    })
}

fn run_antideriv(cli: &Cli, args: &AntiderivArgs) -> Result<Outcome, Error> {
    let policy = build_policy(cli)?;
    let sign = args.sign.to_sign();
    let eval = match args.form {
        FormArg::Product => antiderivative(args.x, args.n, sign, &policy)?,
        FormArg::Bracket => bracket_series(args.x, args.n, sign, &policy)?,
        FormArg::Maclaurin => maclaurin_antiderivative(args.x, args.n, sign, &policy)?,
    };

    let mut record = Record::new("antideriv");
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("x", Cell::Real(args.x));
    record.inputs.insert("n", Cell::Int(args.n.into()));
    record.inputs.insert("sign", Cell::Text(sign.to_string()));
    record.inputs.insert(
        "form",
        Cell::Text(
            match args.form {
                FormArg::Product => "product",
                FormArg::Bracket => "bracket",
                FormArg::Maclaurin => "maclaurin",
            }
            .into(),
        ),
    );
    record.outputs.insert("value", Cell::Real(eval.value));
    series_diagnostics(&mut record.diagnostics, &eval);

    // For odd powers the two signs are mirror images; report how well the
    // computed values honor that when both sides are representable.
    if args.n % 2 == 1 {
        if let Ok(check) = odd_reflection(args.x, args.n, sign, &policy) {
            record.diagnostics.insert("reflection_defect", Cell::Real(check.defect));
            record
                .diagnostics
                .insert("reflection_within_tolerance", Cell::Flag(check.within_tolerance));
        }
    }

    Ok(Outcome {
        non_converged: if eval.converged {
            None
        } else {
            non_converged_reason(eval.terms_used, policy.max_terms)
        },
        record,
    })
}

fn point_inputs(cli: &Cli, args: &PointArgs, record: &mut Record) {
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("x", endpoint_cell(args.x));
    record.inputs.insert("n", Cell::Int(args.n.into()));
    record.inputs.insert("mean", Cell::Real(args.mean));
    record.inputs.insert("sigma", Cell::Real(args.sigma));
}

fn run_pdf(cli: &Cli, args: &PointArgs) -> Result<Outcome, Error> {
    let dist = GenNormal::new(args.n, args.mean, args.sigma)?;
    let derivs = dist.pdf_derivatives(args.x);
    let norm = dist.normalization();

    let mut record = Record::new("pdf");
    point_inputs(cli, args, &mut record);
    record.outputs.insert("value", Cell::Real(derivs.value));
    record.outputs.insert("d1", Cell::Real(derivs.d1));
    record.outputs.insert("d2", Cell::Real(derivs.d2));
    record.diagnostics.insert("p_n", Cell::Real(norm.p_n));
    record.diagnostics.insert("mode_value", Cell::Real(norm.coefficient / args.sigma));
    Ok(Outcome::converged(record))
}

fn run_cdf(cli: &Cli, args: &PointArgs) -> Result<Outcome, Error> {
    let policy = build_policy(cli)?;
    let dist = GenNormal::new(args.n, args.mean, args.sigma)?;
    let value = dist.cdf(args.x, &policy)?;

    let mut record = Record::new("cdf");
    point_inputs(cli, args, &mut record);
    record.outputs.insert("value", Cell::Real(value));

    // Mirror the evaluation route: inside the working band the value came
    // from the decaying series at the rescaled argument, and its truncation
    // metadata is worth reporting; beyond it the tail mass is below one ulp
    // of 1 and the value snapped.
    let nf = f64::from(args.n);
    let w = (args.x - args.mean) / (args.sigma * nf.powf(1.0 / nf));
    let snapped = !w.is_finite() || w.abs().powf(nf) > WORKING_EXPONENT_MAX;
    record.diagnostics.insert("snapped", Cell::Flag(snapped));
    let mut non_converged = None;
    if !snapped {
        let tail = antiderivative(w, args.n, Sign::Neg, &policy)?;
        series_diagnostics(&mut record.diagnostics, &tail);
        if !tail.converged {
            non_converged = non_converged_reason(tail.terms_used, policy.max_terms);
        }
    }
    Ok(Outcome { record, non_converged })
}

fn run_moments(cli: &Cli, args: &MomentsArgs) -> Result<Outcome, Error> {
    let dist = GenNormal::new(args.n, 0.0, args.sigma)?;

    let mut record = Record::new("moments");
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("n", Cell::Int(args.n.into()));
    record.inputs.insert("sigma", Cell::Real(args.sigma));
    record.inputs.insert(
        "method",
        Cell::Text(
            match args.method {
                MethodArg::Gamma => "gamma",
                MethodArg::Recurrence => "recurrence",
                MethodArg::Kn => "kn",
            }
            .into(),
        ),
    );

    match args.method {
        MethodArg::Gamma => {
            let Some(order) = args.order else {
                usage_error("--method gamma requires --order");
            };
            record.inputs.insert("order", Cell::Int(order.into()));
            record.outputs.insert("value", Cell::Real(dist.central_moment(order)?));
        }
        MethodArg::Recurrence => {
            let Some(order) = args.order else {
                usage_error("--method recurrence requires --order");
            };
            record.inputs.insert("order", Cell::Int(order.into()));
            let reduced = dist.central_moment_recurrence(order)?;
            record.outputs.insert("value", Cell::Real(reduced.value));
            record
                .diagnostics
                .insert("fundamental_order", Cell::Int(reduced.fundamental_order.into()));
            record.diagnostics.insert("steps", Cell::Int(reduced.steps.into()));
        }
        MethodArg::Kn => {
            let Some(k) = args.k else {
                usage_error("--method kn requires --k");
            };
            record.inputs.insert("k", Cell::Int(k.into()));
            record.outputs.insert("order", Cell::Int(i64::from(k) * i64::from(args.n)));
            record.outputs.insert("value", Cell::Real(dist.moment_kn(k)));
        }
    }

    if args.fundamental {
        let fundamentals = dist.fundamental_moments()?;
        record.outputs.insert(
            "fundamental_orders",
            Cell::IntList(fundamentals.iter().map(|&(order, _)| i64::from(order)).collect()),
        );
        record.outputs.insert(
            "fundamental_values",
            Cell::RealList(fundamentals.iter().map(|&(_, value)| value).collect()),
        );
    }
    Ok(Outcome::converged(record))
}

fn parse_moment_list(raw: &str) -> BTreeMap<u32, f64> {
    let mut moments = BTreeMap::new();
    for item in raw.split(',') {
        let item = item.trim();
        let parsed = item
            .strip_prefix('m')
            .and_then(|rest| rest.split_once('='))
            .and_then(|(order, value)| {
                Some((order.parse::<u32>().ok()?, value.trim().parse::<f64>().ok()?))
            });
        match parsed {
            Some((order, value)) => {
                moments.insert(order, value);
            }
            None => usage_error(&format!(
                "moment entry {item:?} is not of the form m<order>=<value>"
            )),
        }
    }
    moments
}

fn run_shape(cli: &Cli, args: &ShapeArgs) -> Result<Outcome, Error> {
    let mut record = Record::new("shape");
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("n", Cell::Int(args.n.into()));
    let n = args.n;

    let (m_n, m_n1, m_2n) = if let Some(list) = &args.moments {
        record.inputs.insert("moments", Cell::Text(list.clone()));
        record.diagnostics.insert("source", Cell::Text("moments".into()));
        let supplied = parse_moment_list(list);
        let need = |order: u32| {
            supplied.get(&order).copied().ok_or(Error::MissingMoment { order })
        };
        (need(n)?, need(n + 1)?, need(2 * n)?)
    } else {
        let path = args.data.as_ref().expect("clap enforces the data/moments group");
        record.inputs.insert("data", Cell::Text(path.display().to_string()));
        record.diagnostics.insert("source", Cell::Text("data".into()));
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        let sample = text
            .split_whitespace()
            .map(|token| {
                token.parse::<f64>().map_err(|_| {
                    Error::Domain(format!("{}: unreadable sample value {token:?}", path.display()))
                })
            })
            .collect::<Result<Vec<f64>, Error>>()?;
        let moments = empirical_central_moments(&sample, 2 * n)?;
        record.diagnostics.insert("sample_size", Cell::Int(sample.len() as i64));
        (moments[n as usize], moments[n as usize + 1], moments[2 * n as usize])
    };

    record.diagnostics.insert("m_n", Cell::Real(m_n));
    record.diagnostics.insert("m_n_plus_1", Cell::Real(m_n1));
    record.diagnostics.insert("m_2n", Cell::Real(m_2n));

    let stats = generalized_shape(n, m_n, m_n1, m_2n)?;
    record.outputs.insert("generalized_kurtosis", Cell::Real(stats.generalized_kurtosis));
    record.outputs.insert("excess", Cell::Real(stats.excess));
    record.outputs.insert("skewness", Cell::Real(stats.skewness));
    record.outputs.insert("skew_sign", Cell::Int(stats.skew_sign.into()));
    Ok(Outcome::converged(record))
}

fn run_mvpdf(cli: &Cli, args: &MvpdfArgs) -> Result<Outcome, Error> {
    let mv = MultivariateGenNormal::new(&args.orders)?;
    let value = mv.pdf_standardized(&args.z)?;

    let mut record = Record::new("mvpdf");
    common_inputs(cli, &mut record.inputs);
    record
        .inputs
        .insert("orders", Cell::IntList(args.orders.iter().map(|&n| i64::from(n)).collect()));
    record.inputs.insert("z", Cell::RealList(args.z.clone()));
    record.outputs.insert("value", Cell::Real(value));
    record.diagnostics.insert("dimension", Cell::Int(mv.dimension() as i64));
    Ok(Outcome::converged(record))
}

fn run_ode_check(cli: &Cli, args: &OdeCheckArgs) -> Result<Outcome, Error> {
    let policy = build_policy(cli)?;
    let equation = OdeEquation::from_selector(args.eq)?;
    let half = match args.series {
        SeriesArg::Auto => equation.matched_half(),
        SeriesArg::F => SeriesHalf::Odd,
        SeriesArg::G => SeriesHalf::Even,
    };
    let spec = SolutionSpec { k1: args.k1, k2: args.k2, particular: Some(half) };
    let max_residual =
        residual_max_on_grid(equation, &spec, args.from, args.to, args.points, args.n, &policy)?;

    // Probe the hardest grid point (largest |x| converges slowest) for the
    // truncation metadata behind that maximum.
    let probe_x = if args.from.abs() >= args.to.abs() { args.from } else { args.to };
    let probe = residual(equation, &spec, probe_x, args.n, &policy)?;
    let audit = pairing_audit(args.n, &policy)?;

    let mut record = Record::new("ode-check");
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("eq", Cell::Int(args.eq.into()));
    record.inputs.insert(
        "series",
        Cell::Text(
            match args.series {
                SeriesArg::Auto => "auto",
                SeriesArg::F => "f",
                SeriesArg::G => "g",
            }
            .into(),
        ),
    );
    record.inputs.insert("n", Cell::Int(args.n.into()));
    record.inputs.insert("from", Cell::Real(args.from));
    record.inputs.insert("to", Cell::Real(args.to));
    record.inputs.insert("points", Cell::Int(args.points as i64));
    record.inputs.insert("k1", Cell::Real(args.k1));
    record.inputs.insert("k2", Cell::Real(args.k2));

    record.outputs.insert("max_residual", Cell::Real(max_residual));
    record.outputs.insert("series_used", Cell::Text(half.letter().to_string()));
    record.outputs.insert("matched", Cell::Flag(half == equation.matched_half()));

    record.diagnostics.insert("terms_used", Cell::Int(probe.terms_used as i64));
    record.diagnostics.insert("converged", Cell::Flag(probe.converged));
    record.diagnostics.insert("audit_consistent", Cell::Flag(audit.consistent));
    record.diagnostics.insert("audit_odd_with_power", Cell::Real(audit.odd_with_power));
    record
        .diagnostics
        .insert("audit_even_with_reciprocal", Cell::Real(audit.even_with_reciprocal));
    record.diagnostics.insert("audit_odd_with_reciprocal", Cell::Real(audit.odd_with_reciprocal));
    record.diagnostics.insert("audit_even_with_power", Cell::Real(audit.even_with_power));

    Ok(Outcome {
        non_converged: if probe.converged {
            None
        } else {
            non_converged_reason(probe.terms_used, policy.max_terms)
        },
        record,
    })
}

fn run_stirling(cli: &Cli, args: &StirlingArgs) -> Result<Outcome, Error> {
    let report = stirling_report(args.n)?;
    let partial = wallis(args.n)?;

    let mut record = Record::new("stirling");
    common_inputs(cli, &mut record.inputs);
    record.inputs.insert("n", Cell::Int(args.n.into()));

    record.outputs.insert("log_exact", Cell::Real(report.log_exact));
    record.outputs.insert("log_linear_prefactor", Cell::Real(report.log_linear_prefactor));
    record.outputs.insert("log_sqrt_prefactor", Cell::Real(report.log_sqrt_prefactor));
    record.outputs.insert("rel_err_linear", Cell::Real(report.rel_err_linear));
    record.outputs.insert("rel_err_sqrt", Cell::Real(report.rel_err_sqrt));
    record.outputs.insert("prefactor_ratio", Cell::Real(report.prefactor_ratio));
    record.outputs.insert("wallis_raw", Cell::Real(partial.raw));
    record.outputs.insert("wallis_corrected", Cell::Real(partial.corrected));
    record.diagnostics.insert("wallis_ratio", Cell::Real(partial.ratio()));

    // Exact integer forms stay readable up to 2n = 170 (the same span the
    // factorial table covers in double precision); print them as decimal
    // strings there.
    if args.n <= 85 {
        let two_n = 2 * args.n;
        record.diagnostics.insert("factorial_2n", Cell::Text(factorial(two_n).to_string()));
        record
            .diagnostics
            .insert("double_factorial_even", Cell::Text(double_factorial(two_n).to_string()));
        record
            .diagnostics
            .insert("double_factorial_odd", Cell::Text(double_factorial(two_n - 1).to_string()));
    }
    Ok(Outcome::converged(record))
}

// ---------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------

/// The shared abscissa grid x = −2.00, −1.99, …, 2.00: integer stepping
/// keeps every value (and hence every emitted row) bit-reproducible.
fn figure_grid() -> impl Iterator<Item = f64> {
    (-200..=200).map(|i| f64::from(i) / 100.0)
}

fn figure_table(args: &FiguresArgs) -> Result<String, Error> {
    let mut table = String::new();
    match args.which {
        1 => {
            table.push_str("x,n2,n4,n6\n");
            for x in figure_grid() {
                let _ = write!(table, "{}", csv_real(x));
                for n in [2u32, 4, 6] {
                    let _ = write!(table, ",{}", csv_real(rect_limit(RectOrder::Finite(n), x)?));
                }
                table.push('\n');
            }
        }
        2 => {
            let order = match args.n.trim() {
                "inf" => RectOrder::Infinite,
                text => match text.parse::<u32>() {
                    Ok(n) => RectOrder::Finite(n),
                    Err(_) => usage_error(&format!(
                        "plateau order {text:?} is neither an integer nor inf"
                    )),
                },
            };
            table.push_str("x,y\n");
            for x in figure_grid() {
                let _ = writeln!(table, "{},{}", csv_real(x), csv_real(rect_limit(order, x)?));
            }
        }
        3 => {
            table.push_str("n,abscissa,ordinate\n");
            for n in (2..=40).step_by(2) {
                let point = GenNormal::standard(n)?.inflexion();
                let _ = writeln!(
                    table,
                    "{n},{},{}",
                    csv_real(point.standardized_abscissa),
                    csv_real(point.relative_ordinate)
                );
            }
        }
        _ => unreachable!("clap restricts --which to 1..=3"),
    }
    Ok(table)
}

enum FigureOutput {
    /// Table written to a file; print this summary record.
    Summary(Box<Outcome>),
    /// No --out: the table itself is the stdout payload.
    Table(String),
}

fn run_figures(cli: &Cli, args: &FiguresArgs) -> Result<FigureOutput, Error> {
    let table = figure_table(args)?;
    let rows = table.lines().count() - 1;
    match &args.out {
        Some(path) => {
            std::fs::write(path, &table)
                .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
            let mut record = Record::new("figures");
            common_inputs(cli, &mut record.inputs);
            record.inputs.insert("which", Cell::Int(args.which.into()));
            record.inputs.insert("n", Cell::Text(args.n.clone()));
            record.inputs.insert("out", Cell::Text(path.display().to_string()));
            record.outputs.insert("rows", Cell::Int(rows as i64));
            record.outputs.insert("bytes", Cell::Int(table.len() as i64));
            Ok(FigureOutput::Summary(Box::new(Outcome::converged(record))))
        }
        None => Ok(FigureOutput::Table(table)),
    }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn exit_code_for(error: &Error) -> ExitCode {
    match error {
        // Quadrature that ran out of subdivision depth is a convergence
        // failure, not a precondition violation.
        Error::DepthExceeded { .. } => ExitCode::from(4),
        _ => ExitCode::from(3),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let result = match &cli.command {
        Command::Integrate(args) => run_integrate(&cli, args),
        Command::Antideriv(args) => run_antideriv(&cli, args),
        Command::Pdf(args) => run_pdf(&cli, args),
        Command::Cdf(args) => run_cdf(&cli, args),
        Command::Moments(args) => run_moments(&cli, args),
        Command::Shape(args) => run_shape(&cli, args),
        Command::Mvpdf(args) => run_mvpdf(&cli, args),
        Command::OdeCheck(args) => run_ode_check(&cli, args),
        Command::Stirling(args) => run_stirling(&cli, args),
        Command::Figures(args) => {
            return match run_figures(&cli, args) {
                Ok(FigureOutput::Table(table)) => {
                    print!("{table}");
                    ExitCode::SUCCESS
                }
                Ok(FigureOutput::Summary(outcome)) => {
                    print!("{}", outcome.record.render(cli.format));
                    ExitCode::SUCCESS
                }
                Err(error) => {
                    eprintln!("error: {error}");
                    exit_code_for(&error)
                }
            };
        }
    };

    match result {
        Ok(outcome) => {
            print!("{}", outcome.record.render(cli.format));
            match outcome.non_converged {
                None => ExitCode::SUCCESS,
                Some(reason) => {
                    eprintln!("error: non-converged: {reason}");
                    ExitCode::from(4)
                }
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            exit_code_for(&error)
        }
    }
}
