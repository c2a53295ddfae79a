//! `pipcir` command-line front end.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a FAILED identity, 2 on
//! usage or input errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pipcir::approx::{self, Backend, Coefficients, ExpansionTarget, NamedFunction};
use pipcir::moebius::{gram_matrix, MoebiusMap, RFamily, TransformedSystem};
use pipcir::rational::{fmt_rational, parse_rational, to_f64};
use pipcir::verify::{self, IdentityReport};
use pipcir::{quad, Family, LegendreTable, PolyExact, Rational};

const TABLE_LIMIT: usize = 64;

#[derive(Parser)]
#[command(name = "pipcir", version, about = "Integrated Legendre polynomials: tables, identity checks, extremal problems, expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest degree for `verify`.
    #[arg(long, global = true, default_value_t = 40)]
    max_degree: usize,

    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "r", alias = "R")]
    R,
}

#[derive(Subcommand)]
enum Command {
    /// Exact coefficient table (ascending powers) with optional evaluations.
    Table {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Inclusive range `a..b`, or a single degree.
        #[arg(long)]
        degrees: String,
        /// Comma-separated evaluation points.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
    },
    /// Check every registered identity and write the errata report.
    Verify,
    /// Solve the constrained extremal problem of degree n.
    Minimize {
        #[arg(long)]
        n: usize,
    },
    /// Fourier–Q expansion of a polynomial or a built-in function.
    Expand {
        /// Ascending coefficients `c0,c1,...`, or `Q<k>` / `L<k>`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "function")]
        poly: Option<String>,
        /// Built-in function name.
        #[arg(long = "fn", conflicts_with = "poly")]
        function: Option<String>,
        #[arg(long = "N")]
        n_max: usize,
    },
    /// Orthogonal system induced by x ↦ (λx+α)/(μx+β).
    Transform {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long = "N", default_value_t = 4)]
        n_size: usize,
    },
    /// Gauss–Legendre nodes and weights.
    Quad {
        #[arg(long)]
        m: usize,
    },
}

/// Error that maps to an exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<pipcir::Error> for Failure {
    fn from(e: pipcir::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        usage(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        usage(format!("json error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pipcir: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Table {
            family,
            degrees,
            points,
        } => cmd_table(cli, *family, degrees, points.as_deref()),
        Command::Verify => cmd_verify(cli),
        Command::Minimize { n } => cmd_minimize(cli, *n),
        Command::Expand {
            poly,
            function,
            n_max,
        } => cmd_expand(cli, poly.as_deref(), function.as_deref(), *n_max),
        Command::Transform {
            lambda,
            alpha,
            mu,
            beta,
            n_size,
        } => cmd_transform(cli, [lambda, alpha, mu, beta], *n_size),
        Command::Quad { m } => cmd_quad(cli, *m),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(cli, &s)
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| usage(e.to_string()))
}

fn exact_coeffs(p: &PolyExact) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(fmt_rational).collect()
}

fn parse_degrees(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("invalid degree range {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_list(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',')
        .map(|t| parse_rational(t).map_err(Failure::from))
        .collect()
}

#[derive(Serialize)]
struct TableRow {
    family: &'static str,
    degree: usize,
    coefficients: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    values: Vec<PointValue>,
}

#[derive(Serialize)]
struct PointValue {
    x: f64,
    value: f64,
}

fn cmd_table(cli: &Cli, family: FamilyArg, degrees: &str, points: Option<&str>) -> Result<u8, Failure> {
    let (lo, hi) = parse_degrees(degrees)?;
    if hi > TABLE_LIMIT {
        return Err(usage(format!("degree {hi} exceeds table limit {TABLE_LIMIT}")));
    }
    let xs: Vec<f64> = match points {
        Some(p) => parse_list(p)?.iter().map(to_f64).collect(),
        None => Vec::new(),
    };
    let (name, polys): (&'static str, Vec<PolyExact>) = match family {
        FamilyArg::L => {
            let t = LegendreTable::build(hi.max(1))?;
            ("L", (lo..=hi).map(|n| t.get(n).clone()).collect())
        }
        FamilyArg::Q => {
            if lo < 2 {
                return Err(usage("Q_n is defined for n >= 2"));
            }
            let f = Family::new(hi)?;
            ("Q", (lo..=hi).map(|n| f.q.get(n).clone()).collect())
        }
        FamilyArg::R => {
            let r = RFamily::build(hi);
            ("r", (lo..=hi).map(|n| r.get(n).clone()).collect())
        }
    };
    let rows: Vec<TableRow> = polys
        .iter()
        .zip(lo..=hi)
        .map(|(p, degree)| {
            let pf = p.to_float::<f64>();
            TableRow {
                family: name,
                degree,
                coefficients: exact_coeffs(p),
                values: xs.iter().map(|&x| PointValue { x, value: pf.eval(&x) }).collect(),
            }
        })
        .collect();
    match cli.format.unwrap_or(Format::Csv) {
        Format::Json => emit_json(cli, &rows)?,
        Format::Csv => {
            let mut header = vec!["family".to_string(), "degree".into(), "coefficients".into()];
            header.extend(xs.iter().map(|x| format!("p({x})")));
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.family.to_string(), r.degree.to_string(), r.coefficients.join(",")];
                    row.extend(r.values.iter().map(|v| format!("{:e}", v.value)));
                    row
                })
                .collect();
            emit(cli, &csv_text(&header, &body)?)?;
        }
    }
    Ok(0)
}

fn cmd_verify(cli: &Cli) -> Result<u8, Failure> {
    let report: IdentityReport = verify::run_registry(cli.max_degree)?;
    for e in &report.entries {
        println!("{}", e.summary());
    }
    if let Some(path) = &cli.out {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        fs::write(path, s)?;
    }
    Ok(if report.any_failed() { 1 } else { 0 })
}

#[derive(Serialize)]
struct MinimizeOutput {
    n: usize,
    #[serde(rename = "M")]
    m: String,
    coefficients: BTreeMap<usize, String>,
    minimizer_monomial: Vec<String>,
    minimizer: String,
    oracle_agrees: bool,
}

fn cmd_minimize(cli: &Cli, n: usize) -> Result<u8, Failure> {
    if n < 2 {
        return Err(usage("minimize needs n >= 2"));
    }
    let fam = Family::new(n)?;
    let s = approx::minimize_constrained(&fam.q, n)?;
    let out = MinimizeOutput {
        n,
        m: fmt_rational(&s.min_value),
        coefficients: s.q_coeffs.iter().map(|(k, a)| (*k, fmt_rational(a))).collect(),
        minimizer_monomial: exact_coeffs(&s.minimizer),
        minimizer: s.minimizer.to_string(),
        oracle_agrees: s.oracle_agrees(),
    };
    emit_json(cli, &out)?;
    Ok(0)
}

#[derive(Serialize)]
#[serde(untagged)]
enum CoeffValue {
    Exact(String),
    Float(f64),
}

#[derive(Serialize)]
struct ExpandOutput {
    n_max: usize,
    method: &'static str,
    coefficients: BTreeMap<usize, CoeffValue>,
    residual_sup: f64,
    residual_weighted_l2: Option<f64>,
}

fn parse_target(poly: Option<&str>, function: Option<&str>, fam: &Family) -> Result<ExpansionTarget, Failure> {
    match (poly, function) {
        (Some(p), None) => {
            let p = p.trim();
            let indexed = |prefix: char| -> Option<usize> { p.strip_prefix(prefix)?.parse().ok() };
            if let Some(k) = indexed('Q') {
                if !(2..=fam.max_degree()).contains(&k) {
                    return Err(usage(format!("Q{k} outside 2..={}", fam.max_degree())));
                }
                return Ok(ExpansionTarget::Poly(fam.q.get(k).clone()));
            }
            if let Some(k) = indexed('L') {
                if k > fam.max_degree() {
                    return Err(usage(format!("L{k} exceeds {}", fam.max_degree())));
                }
                return Ok(ExpansionTarget::Poly(fam.legendre.get(k).clone()));
            }
            Ok(ExpansionTarget::Poly(PolyExact::from_coeffs(parse_list(p)?)))
        }
        (None, Some(name)) => NamedFunction::from_name(name)
            .map(ExpansionTarget::Named)
            .ok_or_else(|| {
                let known: Vec<_> = NamedFunction::ALL.iter().map(|f| f.name()).collect();
                usage(format!("unknown function {name:?}; known: {}", known.join(", ")))
            }),
        _ => Err(usage("give exactly one of --poly or --fn")),
    }
}

fn cmd_expand(cli: &Cli, poly: Option<&str>, function: Option<&str>, n_max: usize) -> Result<u8, Failure> {
    if n_max < 2 || n_max > TABLE_LIMIT {
        return Err(usage(format!("--N must be in 2..={TABLE_LIMIT}")));
    }
    let fam = Family::new(n_max)?;
    let target = parse_target(poly, function, &fam)?;
    let backend = match cli.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::Float,
    };
    let r = approx::expand(&fam.q, &target, n_max, backend, cli.tol)?;
    let coefficients: BTreeMap<usize, CoeffValue> = match &r.coeffs {
        Coefficients::Exact(m) => m.iter().map(|(k, a)| (*k, CoeffValue::Exact(fmt_rational(a)))).collect(),
        Coefficients::Float(m) => m.iter().map(|(k, a)| (*k, CoeffValue::Float(*a))).collect(),
    };
    let out = ExpandOutput {
        n_max,
        method: r.method.as_str(),
        coefficients,
        residual_sup: r.residual_sup,
        residual_weighted_l2: r.residual_weighted_l2,
    };
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(cli, &out)?,
        Format::Csv => {
            let header: Vec<String> = ["degree", "coefficient", "residual_sup", "residual_weighted_l2"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let l2 = out.residual_weighted_l2.map(|v| format!("{v:e}")).unwrap_or_default();
            let rows: Vec<Vec<String>> = out
                .coefficients
                .iter()
                .map(|(k, v)| {
                    let c = match v {
                        CoeffValue::Exact(s) => s.clone(),
                        CoeffValue::Float(f) => format!("{f:e}"),
                    };
                    vec![k.to_string(), c, format!("{:e}", out.residual_sup), l2.clone()]
                })
                .collect();
            emit(cli, &csv_text(&header, &rows)?)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Interval {
    a: String,
    b: String,
}

#[derive(Serialize)]
struct WeightOutput {
    numerator: Vec<String>,
    denominator: Vec<String>,
    display: String,
}

#[derive(Serialize)]
struct TransformOutput {
    interval: Interval,
    printed_interval: Interval,
    weight: WeightOutput,
    weight_identity_exact: bool,
    gram_matrix: Vec<Vec<f64>>,
    max_offdiag: f64,
    max_offdiag_relative: f64,
}

fn cmd_transform(cli: &Cli, params: [&String; 4], n_size: usize) -> Result<u8, Failure> {
    if n_size == 0 || n_size > 16 {
        return Err(usage("--N must be in 1..=16"));
    }
    let [l, a, m, b] = params;
    let map = MoebiusMap::new(parse_rational(l)?, parse_rational(a)?, parse_rational(m)?, parse_rational(b)?)?;
    let sys = TransformedSystem::new(map, n_size - 1)?;
    let g = gram_matrix(&sys, n_size - 1, cli.tol)?;
    let w = &sys.weight;
    let display = match w.reduced_numerator() {
        Some(p) => p.to_string(),
        None => format!("({})/({})", w.numerator, w.denominator),
    };
    let e = &sys.endpoints;
    let out = TransformOutput {
        interval: Interval {
            a: fmt_rational(&e.a),
            b: fmt_rational(&e.b),
        },
        printed_interval: Interval {
            a: fmt_rational(&e.paper_a),
            b: fmt_rational(&e.paper_b),
        },
        weight: WeightOutput {
            numerator: exact_coeffs(&w.numerator),
            denominator: exact_coeffs(&w.denominator),
            display,
        },
        weight_identity_exact: w.matches_derivative_form(&sys.map),
        gram_matrix: g.entries,
        max_offdiag: g.max_offdiag,
        max_offdiag_relative: g.max_offdiag_relative,
    };
    emit_json(cli, &out)?;
    Ok(0)
}

#[derive(Serialize)]
struct QuadNode {
    index: usize,
    node: f64,
    weight: f64,
}

fn cmd_quad(cli: &Cli, m: usize) -> Result<u8, Failure> {
    let rule = quad::gauss_legendre::<f64>(m)?;
    let nodes: Vec<QuadNode> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .enumerate()
        .map(|(index, (&node, &weight))| QuadNode { index, node, weight })
        .collect();
    match cli.format.unwrap_or(Format::Csv) {
        Format::Json => emit_json(cli, &nodes)?,
        Format::Csv => {
            let header: Vec<String> = ["index", "node", "weight"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = nodes
                .iter()
                .map(|q| vec![q.index.to_string(), format!("{:.17e}", q.node), format!("{:.17e}", q.weight)])
                .collect();
            emit(cli, &csv_text(&header, &rows)?)?;
        }
    }
    Ok(0)
}
