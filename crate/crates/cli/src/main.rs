use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use elastoforms::harness::{eval_op, run_suite, EvalOptions, FieldSpec, SuiteConfig, SUITES};
use elastoforms::{Chart, ElasticModuli, Error};

/// Verifies the exterior-calculus elasticity kernel against classical tensor calculus.
#[derive(Parser, Debug)]
#[command(name = "elastoforms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 100)]
        fields: usize,
        /// Replaces every relative tolerance.
        #[arg(long)]
        tol_rel: Option<f64>,
        /// Report path; without it the report goes to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Restrict the sweep to these charts (repeatable).
        #[arg(long = "chart")]
        charts: Vec<String>,
    },
    /// Evaluate one operation for a field at a point.
    Eval {
        #[arg(long)]
        op: String,
        /// JSON field description.
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        chart: String,
        /// Coordinates "q1,q2,q3".
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        /// Unit normal "n1,n2,n3" in the chart's coordinate basis.
        #[arg(long, allow_hyphen_values = true)]
        normal: Option<String>,
    },
    /// List suites and operations.
    List,
}

/// Errors caused by the invocation rather than by a failed check.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

fn parse_triple(text: &str) -> anyhow::Result<[f64; 3]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("cannot parse {text:?} as three numbers"))?;
    <[f64; 3]>::try_from(parts).map_err(|p| anyhow::anyhow!("expected three numbers, got {}", p.len()))
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidSpec(_)
            | Error::UnknownChart(_)
            | Error::UnknownSuite(_)
            | Error::UnknownOp(_)
            | Error::Config(_)
            | Error::InvalidModuli { .. }
    )
}

fn verify(
    suite: String,
    seed: u64,
    points: usize,
    fields: usize,
    tol_rel: Option<f64>,
    report: Option<PathBuf>,
    charts: Vec<String>,
) -> Result<bool, UsageError> {
    let charts = if charts.is_empty() {
        Chart::BUILTIN.to_vec()
    } else {
        charts.iter().map(|c| c.parse()).collect::<Result<Vec<Chart>, _>>()?
    };
    let config = SuiteConfig {
        seed,
        points,
        fields,
        tol_rel,
        charts,
        ..SuiteConfig::default()
    };
    let result = run_suite(&suite, &config)?;
    match report {
        Some(path) => {
            fs::write(&path, result.to_json()).with_context(|| format!("cannot write {}", path.display()))?;
            print!("{}", result.table());
        }
        None => print!("{}", result.to_json()),
    }
    Ok(result.all_passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::List => {
            println!("suites:");
            for s in SUITES {
                println!("  {s}");
            }
            println!("operations:");
            for (name, description) in elastoforms::harness::OPS {
                println!("  {name:<24}{description}");
            }
            ExitCode::SUCCESS
        }
        Command::Verify {
            suite,
            seed,
            points,
            fields,
            tol_rel,
            report,
            charts,
        } => match verify(suite, seed, points, fields, tol_rel, report, charts) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(UsageError(e)) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Command::Eval {
            op,
            field,
            chart,
            at,
            lambda,
            mu,
            normal,
        } => {
            let inputs = (|| -> anyhow::Result<_> {
                let text = fs::read_to_string(&field).with_context(|| format!("cannot read {}", field.display()))?;
                let spec = FieldSpec::from_json(&text)?;
                let chart: Chart = chart.parse()?;
                let q = parse_triple(&at)?;
                let normal = normal.as_deref().map(parse_triple).transpose()?;
                Ok((spec, chart, q, normal))
            })();
            let (spec, chart, q, normal) = match inputs {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            };
            let moduli = ElasticModuli { lambda, mu };
            match eval_op(&op, &spec, chart, q, &moduli, &EvalOptions { normal }) {
                Ok(out) => {
                    print!("{out}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(if is_usage(&e) { 2 } else { 1 })
                }
            }
        }
    }
}
