//! `stableforms`: command-line front end for the stableforms library.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use stableforms::cases::{self, invariant_subspace, InvariantActionGenerator, CASE_IDS};
use stableforms::coframe::Coframe;
use stableforms::exterior::{parse_form, parse_form_json, Form};
use stableforms::hitchin::{lambda, su3_check, su3_system, CheckOptions, Orientation};
use stableforms::scalars::Expr;
use stableforms::Error;

#[derive(Parser)]
#[command(name = "stableforms", version, about = "Stable forms and SU(3)-structure checks on six-dimensional coframes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the SU(3) condition battery on a pair (omega, psi).
    Check(CheckArgs),
    /// Hitchin's quartic invariant of a 3-form, as an exact polynomial.
    Lambda(LambdaArgs),
    /// Exterior derivative of a form on a coframe.
    D(DArgs),
    /// The system of equations expressing d(psi) = 0.
    Closure(ClosureArgs),
    /// Forms invariant under a skew generator.
    Invariants(InvariantsArgs),
    /// Re-run the bundled case reproductions.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Preset name or path to a coframe TOML file.
    #[arg(long)]
    coframe: String,
    /// The 2-form, inline or `@file`.
    #[arg(long)]
    omega: String,
    /// The 3-form, inline or `@file`.
    #[arg(long)]
    psi: Option<String>,
    /// Orientation of the volume form e^{1..6}.
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    orientation: String,
    /// Comma-separated sample points; without it the check is symbolic.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Residual tolerance for equalities.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Parameter values as name=value.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Exit 1 unless the verdict is this classification.
    #[arg(long)]
    expect: Option<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct LambdaArgs {
    /// The 3-form, inline or `@file`.
    #[arg(long)]
    psi: String,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    orientation: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DArgs {
    #[arg(long)]
    coframe: String,
    /// The form, inline or `@file`.
    form: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ClosureArgs {
    #[arg(long)]
    coframe: String,
    /// The form, inline or `@file`.
    #[arg(long)]
    psi: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct InvariantsArgs {
    /// `phi_f1`, `zero`, or a 2-form encoding a skew generator.
    #[arg(long, default_value = "phi_f1")]
    generator: String,
    #[arg(long)]
    degree: usize,
    /// Print only the dimension.
    #[arg(long)]
    count: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Case id.
    case: Option<String>,
    /// Run every case.
    #[arg(long, conflicts_with = "case")]
    all: bool,
    #[command(flatten)]
    out: Output,
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Bad input or a library error: exit 2.
    Usage(String),
    /// Ran cleanly but an expectation failed: exit 1.
    Expectation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Lambda(a) => cmd_lambda(a),
        Command::D(a) => cmd_d(a),
        Command::Closure(a) => closure(a),
        Command::Invariants(a) => invariants(a),
        Command::Reproduce(a) => reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Expectation(msg)) => {
            eprintln!("stableforms: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("stableforms: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Inline text, or the contents of a file when prefixed with `@`.
fn source(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn form(arg: &str, degree: Option<usize>) -> Result<Form<Expr>, Failure> {
    let text = source(arg)?;
    let text = text.trim();
    Ok(if text.starts_with('{') { parse_form_json(text, degree)? } else { parse_form(text, degree)? })
}

fn coframe(arg: &str) -> Result<Coframe, Failure> {
    let path = Path::new(arg);
    if arg.ends_with(".toml") || path.is_file() {
        let src = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        Ok(Coframe::from_toml(&src)?)
    } else {
        Ok(Coframe::preset(arg)?)
    }
}

fn orientation(arg: &str) -> Result<Orientation, Failure> {
    arg.parse().map_err(|_| Failure::Usage(format!("orientation must be +1 or -1, got `{arg}`")))
}

fn samples(arg: &str) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = arg
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("bad sample point `{s}`"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(Failure::Usage("--at needs at least one sample".into()));
    }
    Ok(values)
}

fn params(list: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    list.iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Failure::Usage(format!("expected NAME=VALUE, got `{p}`")))?;
            let v = v.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("bad value in `{p}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Round every float to 17 significant digits so output is stable.
fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(x) if x.is_finite() => format!("{x:.16e}").parse().map(Value::Number).unwrap_or(Value::Null),
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

fn emit_json(command: &str, body: Value) {
    let mut doc = json!({ "schema": 1, "command": command });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    println!("{}", serde_json::to_string_pretty(&canonical(doc)).expect("serializable"));
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn check(a: CheckArgs) -> Outcome {
    let cf = coframe(&a.coframe)?;
    let omega = form(&a.omega, Some(2))?;
    let Some(psi_arg) = &a.psi else {
        let degenerate = omega.to_poly().ok().and_then(|w| w.power(3).ok()).is_some_and(|w3| w3.is_zero());
        return Err(Failure::Usage(if degenerate {
            "omega is degenerate: omega^3 = 0".into()
        } else {
            "--psi is required".into()
        }));
    };
    let psi = form(psi_arg, Some(3))?;
    let orientation = orientation(&a.orientation)?;
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }

    let Some(at) = &a.at else {
        if a.expect.is_some() {
            return Err(Failure::Usage("--expect needs numeric samples (--at)".into()));
        }
        let system = su3_system(&cf, &omega.to_poly()?, &psi.to_poly()?, orientation)?;
        if a.out.json {
            emit_json("check", json!({ "mode": "symbolic", "conditions": to_value(&system) }));
        } else {
            for c in &system {
                println!("{} ({})", c.condition, c.detail);
                for e in &c.equations {
                    println!("  {e} = 0");
                }
            }
        }
        return Ok(());
    };

    let opts = CheckOptions {
        orientation,
        samples: samples(at)?,
        params: params(&a.params)?,
        tol: a.tol,
        ..Default::default()
    };
    let report = su3_check(&cf, &omega, &psi, &opts)?;
    if a.out.json {
        emit_json("check", json!({ "mode": "numeric", "report": to_value(&report) }));
    } else {
        for s in &report.samples {
            println!("t = {}: {}", s.t, s.verdict.as_str());
            for c in &s.conditions {
                println!("  {:<20} {:<13} {:.3e}  {}", c.condition, to_value(&c.verdict).as_str().unwrap_or(""), c.residual, c.detail);
            }
        }
        println!("verdict: {}", report.verdict.as_str());
    }
    match a.expect {
        Some(want) if want != report.verdict.as_str() => {
            Err(Failure::Expectation(format!("expected {want}, got {}", report.verdict.as_str())))
        }
        _ => Ok(()),
    }
}

fn cmd_lambda(a: LambdaArgs) -> Outcome {
    let psi = form(&a.psi, Some(3))?.to_poly()?;
    let vol = orientation(&a.orientation)?.volume();
    let lam = lambda(&psi, &vol)?;
    if a.out.json {
        emit_json("lambda", json!({ "lambda": lam.display_factored(), "expanded": lam.to_string() }));
    } else {
        println!("{}", lam.display_factored());
    }
    Ok(())
}

fn terms_json<S: std::fmt::Display>(f: &Form<S>) -> Value {
    Value::Object(f.terms().map(|(i, c)| (i.to_string(), Value::String(c.to_string()))).collect())
}

fn cmd_d(a: DArgs) -> Outcome {
    let cf = coframe(&a.coframe)?;
    let f = form(&a.form, None)?.to_poly()?;
    let df = cf.d(&f)?;
    if a.out.json {
        emit_json("d", json!({ "degree": df.degree(), "terms": terms_json(&df) }));
    } else {
        println!("{df}");
    }
    Ok(())
}

fn closure(a: ClosureArgs) -> Outcome {
    let cf = coframe(&a.coframe)?;
    let psi = form(&a.psi, None)?.to_poly()?;
    let sys = cf.closure_system(&psi)?;
    let equations: Vec<String> = sys.equations().iter().map(ToString::to_string).collect();
    if a.out.json {
        emit_json("closure", json!({ "equations": equations }));
    } else {
        for e in equations {
            println!("{e} = 0");
        }
    }
    Ok(())
}

fn invariants(a: InvariantsArgs) -> Outcome {
    let gen = InvariantActionGenerator::named(&a.generator)?;
    let basis = invariant_subspace(&gen, a.degree)?;
    if a.out.json {
        let forms: Vec<Value> = basis.iter().map(|f| Value::String(f.to_string())).collect();
        emit_json("invariants", json!({ "degree": a.degree, "dimension": basis.len(), "basis": forms }));
    } else if a.count {
        println!("{}", basis.len());
    } else {
        for f in &basis {
            println!("{f}");
        }
    }
    Ok(())
}

fn reproduce(a: ReproduceArgs) -> Outcome {
    let reports = match (&a.case, a.all) {
        (_, true) => cases::reproduce_all()?,
        (Some(c), false) => vec![cases::reproduce(c)?],
        (None, false) => {
            return Err(Failure::Usage(format!("give a case ({}) or --all", CASE_IDS.join(", "))));
        }
    };
    let passed = reports.iter().all(|r| r.passed());
    if a.out.json {
        emit_json("reproduce", json!({ "passed": passed, "reports": to_value(&reports) }));
    } else {
        for r in &reports {
            println!("{}", r.case);
            for x in &r.assertions {
                let status = to_value(&x.status);
                let factor = x.factor.as_deref().map(|f| format!(" (factor {f})")).unwrap_or_default();
                let optional = if x.required { "" } else { " [informational]" };
                println!("  {:<12} {}{factor}{optional}", status.as_str().unwrap_or(""), x.name);
            }
        }
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.case.as_str()).collect();
        Err(Failure::Expectation(format!("required assertions failed in: {}", failed.join(", "))))
    }
}
