//! Command-line front end: function tables, identity suites and operator exports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use idemarith::algebra::json::ElementJson;
use idemarith::algebra::{DiagShape, DiagonalOperator};
use idemarith::analytic::{
    epsilon_table, growth_indicator, iu_star_diagonal, mobius_table, phi_table, theta,
    TruncatedSpace,
};
use idemarith::arith::{
    jordan_totient, lcm_tuple_count, mobius, ramanujan_sum, standard_scalar, totient, ScalarKind,
    ScalarValue, FACTOR_LIMIT,
};
use idemarith::conv::AlgFunction;
use idemarith::idempotent::{IdempotentProvider, IdempotentSystem};
use idemarith::ramanujan::{s_operator, OperatorFamily};
use idemarith::suite::{run_suite, SuiteConfig, SuiteName, DEFAULT_N_MAX, DEFAULT_SEED};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Parser)]
#[command(
    name = "idemarith",
    version,
    about = "Arithmetic functions, idempotent systems and operator-valued Ramanujan sums"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a scalar function: mobius, totient, jordan:r, ramanujan:n, nu:k, tau, omega, lcm-count:s
    Table {
        function: String,
        /// Inclusive range A..B
        #[arg(long, default_value = "1..60")]
        range: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an identity suite: axioms, product-law, ramanujan, transforms, even-identity, analytic, all
    Check {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u64,
        #[arg(long, env = "IDEMARITH_DIM", default_value_t = 2520)]
        dim: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Reports are always JSON
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an operator as JSON: P:j:n, C:j:n, T:r:j:n, S:n, theta, IU*
    Export {
        spec: String,
        #[arg(long, env = "IDEMARITH_DIM", default_value_t = 2520)]
        dim: usize,
        /// Basis offset; defaults to 0, or 1 for theta and IU*
        #[arg(long)]
        offset: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth diagnostic |(ν₀∗α)(m)|^(1/m) as CSV m,root_value: phi, epsilon, mobius, one, pow2
    Growth {
        function: String,
        #[arg(long, default_value_t = 64)]
        prefix: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Output text plus exit status.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub status: u8,
}

pub fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("range {s:?} is not of the form A..B")))?;
    let parse = |t: &str| {
        t.trim().parse::<u64>().map_err(|_| {
            CliError::Usage(format!("range bound {t:?} is not a non-negative integer"))
        })
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a == 0 {
        return usage("range must start at 1 or above");
    }
    if a > b {
        return usage(format!("range {a}..{b} is empty"));
    }
    if b > FACTOR_LIMIT {
        return usage(format!("range end {b} exceeds 10^12"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFunction {
    Mobius,
    Totient,
    Jordan(u32),
    Ramanujan(u64),
    Nu(i32),
    Tau,
    Omega,
    LcmCount(u32),
}

fn parse_param<T: std::str::FromStr>(name: &str, v: Option<&str>) -> Result<T, CliError> {
    let v = v.ok_or_else(|| CliError::Usage(format!("{name} needs a parameter, e.g. {name}:2")))?;
    v.parse()
        .map_err(|_| CliError::Usage(format!("bad parameter {v:?} for {name}")))
}

impl TableFunction {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let plain = |f: TableFunction| match arg {
            None => Ok(f),
            Some(_) => usage(format!("{name} takes no parameter")),
        };
        let f = match name {
            "mobius" => plain(TableFunction::Mobius)?,
            "totient" => plain(TableFunction::Totient)?,
            "tau" => plain(TableFunction::Tau)?,
            "omega" => plain(TableFunction::Omega)?,
            "jordan" => TableFunction::Jordan(parse_param(name, arg)?),
            "ramanujan" => TableFunction::Ramanujan(parse_param(name, arg)?),
            "nu" => TableFunction::Nu(parse_param(name, arg)?),
            "lcm-count" => TableFunction::LcmCount(parse_param(name, arg)?),
            _ => return usage(format!("unknown function {s:?}")),
        };
        match f {
            TableFunction::Jordan(0) | TableFunction::LcmCount(0) | TableFunction::Ramanujan(0) => {
                usage(format!("{name} needs a positive parameter"))
            }
            TableFunction::Ramanujan(n) if n > FACTOR_LIMIT => usage(format!("{n} exceeds 10^12")),
            f => Ok(f),
        }
    }

    /// Rejects ranges whose values would overflow.
    fn check_range(&self, b: u64) -> Result<(), CliError> {
        let fits = match *self {
            TableFunction::Jordan(r) | TableFunction::LcmCount(r) => {
                u128::from(b).checked_pow(r).is_some()
            }
            TableFunction::Nu(k) => i128::from(b).checked_pow(k.unsigned_abs()).is_some(),
            _ => true,
        };
        if fits {
            Ok(())
        } else {
            usage(format!(
                "values over the range up to {b} overflow 128-bit integers"
            ))
        }
    }

    fn eval(&self, n: u64) -> ScalarValue {
        let int = |v: i128| ScalarValue::Integer(v);
        match *self {
            TableFunction::Mobius => int(mobius(n).into()),
            TableFunction::Totient => int(totient(n).into()),
            TableFunction::Jordan(r) => int(jordan_totient(r, n) as i128),
            TableFunction::Ramanujan(m) => int(ramanujan_sum(m, n as i64).into()),
            TableFunction::Nu(k) => standard_scalar(ScalarKind::Nu(k), n),
            TableFunction::Tau => standard_scalar(ScalarKind::Tau, n),
            TableFunction::Omega => standard_scalar(ScalarKind::Omega, n),
            TableFunction::LcmCount(s) => int(lcm_tuple_count(s, n) as i128),
        }
    }
}

#[derive(Serialize)]
struct TableRow {
    n: u64,
    value: serde_json::Value,
}

#[derive(Serialize)]
struct TableJson<'a> {
    function: &'a str,
    values: Vec<TableRow>,
}

pub fn cmd_table(function: &str, range: &str, format: Format) -> Result<Outcome, CliError> {
    let f = TableFunction::parse(function)?;
    let (a, b) = parse_range(range)?;
    f.check_range(b)?;
    let text = match format {
        Format::Csv => {
            let mut s = String::from("n,value\n");
            for n in a..=b {
                writeln!(s, "{n},{}", f.eval(n)).expect("string write");
            }
            s
        }
        Format::Json => {
            let values = (a..=b)
                .map(|n| TableRow {
                    n,
                    value: match f.eval(n) {
                        ScalarValue::Integer(v) => serde_json::json!(v),
                        r => serde_json::json!(r.to_string()),
                    },
                })
                .collect();
            let mut s =
                serde_json::to_string(&TableJson { function, values }).expect("serializable");
            s.push('\n');
            s
        }
    };
    Ok(Outcome {
        text,
        status: EXIT_PASS,
    })
}

pub fn cmd_check(
    suite: &str,
    n_max: u64,
    dim: usize,
    tolerance: f64,
    seed: u64,
    format: Format,
) -> Result<Outcome, CliError> {
    if format != Format::Json {
        return usage("check reports are JSON only");
    }
    let name: SuiteName = suite
        .parse()
        .map_err(|e: idemarith::suite::SuiteError| CliError::Usage(e.to_string()))?;
    let config = SuiteConfig {
        n_max,
        dim,
        tolerance,
        seed,
    };
    let report = run_suite(name, &config).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    Ok(Outcome {
        text,
        status: if report.summary.pass {
            EXIT_PASS
        } else {
            EXIT_FAILURE
        },
    })
}

fn spec_ints<const K: usize>(spec: &str, parts: &[&str]) -> Result<[i64; K], CliError> {
    if parts.len() != K {
        return usage(format!("{spec:?} needs {K} integer fields"));
    }
    let mut out = [0i64; K];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse()
            .map_err(|_| CliError::Usage(format!("bad integer {p:?} in {spec:?}")))?;
    }
    Ok(out)
}

fn level(n: i64, dim: usize) -> Result<u64, CliError> {
    if n < 1 {
        return usage(format!("level {n} must be positive"));
    }
    if n as u64 > dim as u64 {
        return usage(format!("dimension {dim} is smaller than level {n}"));
    }
    Ok(n as u64)
}

pub fn export_operator(
    spec: &str,
    dim: usize,
    offset: Option<u64>,
) -> Result<DiagonalOperator, CliError> {
    if dim == 0 {
        return usage("dimension must be positive");
    }
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, r.split(':').collect::<Vec<_>>()),
        None => (spec, Vec::new()),
    };
    let default_offset = if matches!(head, "theta" | "IU*") {
        1
    } else {
        0
    };
    let offset = offset.unwrap_or(default_offset);
    if offset > 1 {
        return usage("offset must be 0 or 1");
    }
    let shape = DiagShape::new(dim, offset);
    let op = match head {
        "P" => {
            let [j, n] = spec_ints::<2>(spec, &rest)?;
            IdempotentSystem::exact(shape).projection(j, level(n, dim)?)
        }
        "C" => {
            let [j, n] = spec_ints::<2>(spec, &rest)?;
            OperatorFamily::new(shape).c_operator(j, level(n, dim)?)
        }
        "T" => {
            let [r, j, n] = spec_ints::<3>(spec, &rest)?;
            let n = level(n, dim)?;
            if r < 1 {
                return usage(format!("r = {r} must be positive"));
            }
            OperatorFamily::new(shape)
                .t_operator(r as u64, j, n)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        "S" => {
            let [n] = spec_ints::<1>(spec, &rest)?;
            s_operator(level(n, dim)?, shape)
        }
        "theta" | "IU*" if !rest.is_empty() => return usage(format!("{head} takes no fields")),
        "theta" => theta(TruncatedSpace { dim, offset }),
        "IU*" => {
            let diag = iu_star_diagonal(TruncatedSpace { dim, offset });
            DiagonalOperator::from_real(shape, |k| {
                let r = diag[(k - offset) as usize];
                *r.numer() as f64 / *r.denom() as f64
            })
        }
        _ => return usage(format!("unknown operator spec {spec:?}")),
    };
    Ok(op)
}

pub fn cmd_export(spec: &str, dim: usize, offset: Option<u64>) -> Result<Outcome, CliError> {
    let op = export_operator(spec, dim, offset)?;
    let mut text = serde_json::to_string(&ElementJson::from(&op)).expect("serializable");
    text.push('\n');
    Ok(Outcome {
        text,
        status: EXIT_PASS,
    })
}

pub fn cmd_growth(function: &str, prefix: u64) -> Result<Outcome, CliError> {
    if prefix < 4 {
        return usage("prefix must be at least 4");
    }
    if prefix > 120 {
        return usage("prefix above 120 overflows the exact divisor sums of pow2");
    }
    let alpha: AlgFunction<i128> = match function {
        "phi" => phi_table(prefix),
        "epsilon" => epsilon_table(prefix),
        "mobius" => mobius_table(prefix),
        "one" => AlgFunction::tabulate(prefix, |_| 1),
        "pow2" => AlgFunction::tabulate(prefix, |n| 1i128 << n),
        _ => return usage(format!("unknown growth function {function:?}")),
    };
    let g = growth_indicator(&alpha, prefix).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Outcome {
        text: g.to_csv(),
        status: EXIT_PASS,
    })
}

fn emit(outcome: &Outcome, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Runs a parsed command, writes its output and returns the exit status.
pub fn run(cli: Cli) -> u8 {
    let result = match &cli.command {
        Command::Table {
            function,
            range,
            format,
            out,
        } => cmd_table(function, range, *format).map(|o| (o, out)),
        Command::Check {
            suite,
            n_max,
            dim,
            tolerance,
            seed,
            format,
            out,
        } => cmd_check(suite, *n_max, *dim, *tolerance, *seed, *format).map(|o| (o, out)),
        Command::Export {
            spec,
            dim,
            offset,
            out,
        } => cmd_export(spec, *dim, *offset).map(|o| (o, out)),
        Command::Growth {
            function,
            prefix,
            out,
        } => cmd_growth(function, *prefix).map(|o| (o, out)),
    };
    match result.and_then(|(o, out)| emit(&o, out.as_ref()).map(|_| o.status)) {
        Ok(status) => {
            if status == EXIT_FAILURE {
                eprintln!("idemarith: identity failures, see the report");
            }
            status
        }
        Err(e) => {
            eprintln!("idemarith: {e}");
            EXIT_USAGE
        }
    }
}
