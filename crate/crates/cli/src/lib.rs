//! Command implementations behind the `ameso` binary.
//!
//! Inputs are either a built-in name (`example3`, `example5`, `example6`),
//! a table file (`.json` or `.csv`, see [`ameso::format`]), or, for
//! `verify` only, a domain literal (inline or in a `.txt` file) which is
//! checked with the zero objective. Domain literals follow this grammar,
//! with whitespace allowed between tokens:
//!
//! ```text
//! domain   := interval | box | set
//! interval := "interval" "(" int "," int ")"
//! box      := "box" "(" range { "," range } ")"
//! range    := "[" int "," int "]"
//! set      := "set" "{" elem { "," elem } "}"
//! elem     := int | "(" int { "," int } ")"
//! ```
//!
//! Exit codes: 0 success, 1 other error, 2 domain is not an Ameso set,
//! 3 oracle cap exceeded, 4 start point outside the domain, 5 domain shape
//! not supported by the command, 64 bad command line.

pub mod bench;

use std::collections::BTreeMap;
use std::path::Path;

use ameso::arp::{solve_arp, ArpConfig};
use ameso::format;
use ameso::lattice::Domain;
use ameso::models::{self, KnapsackInstance, TabulatedObjective};
use ameso::objective::Objective;
use ameso::oracle::{self, OracleLimits};
use ameso::solver1d::{solve_1d, Solve1DConfig};
use ameso::Error;
use serde::Serialize;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const NOT_AMESO: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
    pub const START_OUTSIDE: i32 = 4;
    pub const NOT_BOX: i32 = 5;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotAmesoSet { .. } => exit::NOT_AMESO,
            Error::CapExceeded { .. } => exit::CAP_EXCEEDED,
            Error::OutOfDomain(_) => exit::START_OUTSIDE,
            _ => exit::FAILURE,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A command's rendered output and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, code: exit::OK }
    }
}

/// A loaded objective with its domain and any declared constant.
#[derive(Debug, Clone)]
pub struct Problem {
    pub domain: Domain,
    pub objective: Objective,
    pub declared_c: Option<f64>,
}

pub fn builtin(name: &str) -> Option<Problem> {
    Some(match name {
        "example3" => Problem {
            domain: Domain::Interval(models::quartic_domain()),
            objective: models::quartic_objective(),
            declared_c: Some(4.0),
        },
        "example5" => {
            let t = models::example5_table();
            Problem {
                domain: t.domain().clone(),
                objective: t.to_objective(),
                declared_c: Some(7.0),
            }
        }
        "example6" => Problem {
            domain: Domain::Box(models::example6_domain()),
            objective: models::example6_objective(),
            declared_c: Some(1.0),
        },
        _ => return None,
    })
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(exit::FAILURE, format!("cannot read {path}: {e}")))
}

fn from_table(t: TabulatedObjective, c: Option<f64>) -> Problem {
    Problem {
        domain: t.domain().clone().normalize(),
        objective: t.to_objective(),
        declared_c: c,
    }
}

/// Resolves a built-in name or a table file.
pub fn load_problem(input: &str) -> CliResult<Problem> {
    if let Some(p) = builtin(input) {
        return Ok(p);
    }
    let ext = Path::new(input)
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("");
    match ext {
        "json" => {
            let f = format::parse_table_json(&read(input)?)?;
            Ok(from_table(f.table, f.c))
        }
        "csv" => Ok(from_table(format::parse_table_csv(&read(input)?)?, None)),
        _ => Err(CliError::new(
            exit::USAGE,
            format!("'{input}' is neither a built-in (example3, example5, example6) nor a .json/.csv table"),
        )),
    }
}

/// Where the constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CSource {
    Flag,
    Metadata,
    Oracle,
}

/// Flag, then declared metadata, then the oracle.
pub fn resolve_c(flag: Option<f64>, p: &Problem) -> CliResult<(f64, CSource)> {
    if let Some(c) = flag {
        return Ok((c, CSource::Flag));
    }
    if let Some(c) = p.declared_c {
        return Ok((c, CSource::Metadata));
    }
    let cert = oracle::minimal_c_with(&p.domain, &p.objective, &OracleLimits::default()).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("no C given and the oracle could not supply one: {}", err.message);
        err
    })?;
    Ok((cert.minimal_c, CSource::Oracle))
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            CliError::new(
                exit::USAGE,
                format!("cannot parse '{s}' as a comma-separated list"),
            )
        })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub c: Option<f64>,
    pub start: Option<String>,
    pub tolerance: Option<f64>,
    pub axis_order: Option<String>,
    pub no_memoize: bool,
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct Violation<'a> {
    is_ameso_set: bool,
    witness: [&'a ameso::IntPoint; 2],
}

/// Certificate for a built-in, a table, or a bare domain literal.
pub fn cmd_verify(input: &str) -> CliResult<Outcome> {
    let p = match load_problem(input) {
        Ok(p) => p,
        Err(e) if e.code == exit::USAGE => {
            let d = if input.ends_with(".txt") {
                format::parse_domain(&read(input)?)?
            } else {
                format::parse_domain(input).map_err(|_| e)?
            };
            Problem {
                domain: d,
                objective: Objective::new(|_| 0.0).integer_valued(true),
                declared_c: None,
            }
        }
        Err(e) => return Err(e),
    };
    let limits = OracleLimits::default();
    if let Some((x, y)) = oracle::find_midpoint_violation(&p.domain, &limits)? {
        let body = json(&Violation {
            is_ameso_set: false,
            witness: [&x, &y],
        });
        return Ok(Outcome {
            body,
            code: exit::NOT_AMESO,
        });
    }
    let cert = oracle::minimal_c_with(&p.domain, &p.objective, &limits)?;
    Ok(Outcome::ok(json(&cert)))
}

/// One-dimensional sweep.
pub fn cmd_solve(input: &str, o: &SolveOptions) -> CliResult<Outcome> {
    let p = load_problem(input)?;
    let axis = p.domain.as_interval().ok_or_else(|| {
        CliError::new(
            exit::NOT_BOX,
            format!("solve needs a one-dimensional interval, got {}", p.domain),
        )
    })?;
    let (c, source) = resolve_c(o.c, &p)?;
    let mut cfg = Solve1DConfig::new(c);
    if let Some(s) = &o.start {
        match parse_list::<i64>(s)?[..] {
            [l0] => cfg = cfg.start(l0),
            _ => return Err(CliError::new(exit::USAGE, "solve takes a single start value")),
        }
    }
    if let Some(t) = o.tolerance {
        cfg = cfg.tolerance(t);
    }
    let mut report = solve_1d(&axis, &p.objective, &cfg)?;
    if source == CSource::Oracle {
        report.attach_certificate(
            c,
            cfg.tolerance.unwrap_or_else(|| p.objective.default_tolerance()),
        );
    }
    Ok(Outcome::ok(match o.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => report.trace_csv()?,
    }))
}

fn arp_config(c: f64, dim: usize, o: &SolveOptions) -> CliResult<ArpConfig> {
    let mut cfg = ArpConfig::new(c).memoize(!o.no_memoize);
    if let Some(s) = &o.axis_order {
        cfg = cfg.axis_order(parse_list(s)?);
    }
    let top = cfg
        .axis_order
        .as_ref()
        .and_then(|v| v.last().copied())
        .unwrap_or(dim - 1);
    if let Some(s) = &o.start {
        let v: Vec<i64> = parse_list(s)?;
        let starts: BTreeMap<usize, i64> = match v.len() {
            1 => BTreeMap::from([(top, v[0])]),
            n if n == dim => v.into_iter().enumerate().collect(),
            n => {
                return Err(CliError::new(
                    exit::USAGE,
                    format!("--start needs 1 value (top axis) or {dim} values (one per axis), got {n}"),
                ))
            }
        };
        cfg.starts = starts;
    }
    if let Some(t) = o.tolerance {
        cfg = cfg.tolerance(t);
    }
    Ok(cfg)
}

/// Recursive procedure over a box.
pub fn cmd_arp(input: &str, o: &SolveOptions) -> CliResult<Outcome> {
    let p = load_problem(input)?;
    let d = p.domain.as_box().ok_or_else(|| {
        CliError::new(
            exit::NOT_BOX,
            format!("arp needs a product box, got {}", p.domain),
        )
    })?;
    let (c, _) = resolve_c(o.c, &p)?;
    let cfg = arp_config(c, d.dim(), o)?;
    let report = solve_arp(&d, &p.objective, &cfg)?;
    Ok(Outcome::ok(match o.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => report.conditional_csv()?,
    }))
}

#[derive(Serialize)]
struct KnapsackOutput {
    instance: KnapsackInstance,
    domain: String,
    #[serde(rename = "C")]
    c: f64,
    packages: [i64; 3],
    min_cost: i64,
    report: ameso::ArpReport,
}

/// Shipping-cost minimization; `C` defaults to the option-3 cost.
pub fn cmd_knapsack(input: &str, o: &SolveOptions) -> CliResult<Outcome> {
    let text = if input.trim_start().starts_with('{') {
        input.to_string()
    } else {
        read(input)?
    };
    let inst = format::parse_knapsack_json(&text)?;
    let d = inst.domain();
    let c = o.c.unwrap_or(inst.costs()[2] as f64);
    let cfg = arp_config(c, 2, o)?;
    let report = solve_arp(&d, &inst.objective(), &cfg)?;
    let z = report.argmin.coords();
    let (z1, z2) = (z[0], z[1]);
    let w3 = inst.capacities()[2];
    let z3 = (inst.residual(z1, z2) + w3 - 1) / w3;
    Ok(Outcome::ok(match o.format {
        OutputFormat::Json => json(&KnapsackOutput {
            instance: inst,
            domain: d.to_string(),
            c,
            packages: [z1, z2, z3],
            min_cost: inst.cost(z1, z2)?,
            report,
        }),
        OutputFormat::Csv => report.conditional_csv()?,
    }))
}

pub fn cmd_bench(suite: &str, seed: u64, count: Option<usize>, format: OutputFormat) -> CliResult<Outcome> {
    let rows = bench::run_suite(suite, seed, count)?;
    let agree = rows.iter().all(|r| r.agree);
    let body = match format {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => bench::rows_csv(&rows)?,
    };
    Ok(Outcome {
        body,
        code: if agree { exit::OK } else { exit::FAILURE },
    })
}
