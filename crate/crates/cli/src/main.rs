//! `logspace`: file-driven front end for the `logspace-core` library.
//!
//! Every verb reads JSON inputs, writes one JSON report to stdout or to
//! `--out`, and exits with 0 for success or a positive answer, 1 for a sound
//! negative answer and 2 for unusable input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use logspace_core::schema::{self, DecisionReport, IsometryFile, LinearMapFile};
use logspace_core::{
    decide_isometric, decompose, selftest, separating_lambda, verify_separation, Candidate, Error,
    LinearMapTable, LogFunction, LogIsometry, MeasureAlgebra, REL_TOL,
};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "logspace", version, about = "Norms, isometries and isometry decisions for L_log spaces")]
struct Cli {
    /// Deviation allowed when sampling norm preservation.
    #[arg(long, global = true, default_value_t = REL_TOL)]
    tolerance: f64,
    /// Random functions drawn by `verify` and `build-iso`.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of stdout. The file is replaced
    /// atomically and left untouched on error.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// F-norm of a function.
    Norm { function: PathBuf },
    /// Distance between two functions on spaces of the same shape.
    Dist { f: PathBuf, g: PathBuf },
    /// Passport and atom multiset of a space.
    Passport { space: PathBuf },
    /// Decide whether two spaces carry isometric L_log spaces.
    Decide { first: PathBuf, second: PathBuf },
    /// Build the isometry described by a file and check it.
    BuildIso { source: PathBuf, target: PathBuf, isometry: PathBuf },
    /// Apply an isometry to a function on its source.
    Apply {
        source: PathBuf,
        target: PathBuf,
        isometry: PathBuf,
        function: PathBuf,
    },
    /// Sample norm preservation of an isometry.
    Verify { source: PathBuf, target: PathBuf, isometry: PathBuf },
    /// Recover multiplier and homomorphism from the matrix of a linear map.
    Decompose { source: PathBuf, target: PathBuf, map: PathBuf },
    /// Separate the norms of two spaces with different total measure.
    Separate {
        /// The space `μ` receiving the candidate's values.
        mu: PathBuf,
        /// The space `ν` on which constants are measured.
        nu: PathBuf,
        /// Matrix of a candidate map from `ν` to `μ`; defaults to the
        /// identity for equally shaped spaces.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Use this λ instead of 2λ* + 1.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long, hide = true)]
        fault: Option<String>,
    },
}

/// A finished report and its exit status.
struct Outcome {
    report: Value,
    status: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, status: 0 }
    }

    fn answer(report: Value, positive: bool) -> Self {
        Outcome {
            report,
            status: if positive { 0 } else { 1 },
        }
    }
}

fn error_report(e: &Error) -> Value {
    let mut v = json!({ "error": e.name(), "message": e.to_string() });
    if let Some(theorem) = e.violated_property() {
        v["violated_theorem"] = json!(theorem);
    }
    v
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn space(path: &Path) -> Result<Arc<MeasureAlgebra>, Error> {
    schema::load_space(path).map(Arc::new)
}

fn isometry(source: &Path, target: &Path, iso: &Path) -> Result<LogIsometry, Error> {
    schema::read::<IsometryFile>(iso)?.build(space(source)?, space(target)?)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Norm { function } => {
            let f = schema::load_function(function)?;
            Ok(Outcome::ok(json!({ "fnorm": f.fnorm().value() })))
        }
        Command::Dist { f, g } => {
            let f = schema::load_function(f)?;
            let g = schema::load_function(g)?.rebase(f.space().clone())?;
            Ok(Outcome::ok(json!({ "distance": f.distance(&g)? })))
        }
        Command::Passport { space: path } => {
            let s = space(path)?;
            let p = s.passport()?;
            Ok(Outcome::ok(json!({
                "total_measure": s.total_measure()?,
                "rows": value(&p.rows),
                "atom_weights": p.atom_weights,
            })))
        }
        Command::Decide { first, second } => {
            let d = decide_isometric(&space(first)?, &space(second)?)?;
            Ok(Outcome::answer(value(&DecisionReport::from(&d)), d.isometric))
        }
        Command::BuildIso {
            source,
            target,
            isometry: iso,
        } => {
            let u = isometry(source, target, iso)?;
            let report = u.verify_with_tolerance(cli.trials, cli.seed, cli.tolerance);
            let pass = report.pass;
            Ok(Outcome::answer(
                json!({
                    "isometry": value(&IsometryFile::from_isometry(&u)?),
                    "multiplier": value(&schema::FunctionFile::from_function(u.multiplier())),
                    "formula_residual": u.formula_residual(),
                    "verification": value(&report),
                }),
                pass,
            ))
        }
        Command::Apply {
            source,
            target,
            isometry: iso,
            function,
        } => {
            let u = isometry(source, target, iso)?;
            let f = schema::load_function(function)?.rebase(u.source().clone())?;
            let image = u.apply(&f)?;
            Ok(Outcome::ok(value(&schema::FunctionFile::from_function(&image))))
        }
        Command::Verify {
            source,
            target,
            isometry: iso,
        } => {
            let u = isometry(source, target, iso)?;
            let report = u.verify_with_tolerance(cli.trials, cli.seed, cli.tolerance);
            let pass = report.pass;
            Ok(Outcome::answer(value(&report), pass))
        }
        Command::Decompose { source, target, map } => {
            let table = schema::read::<LinearMapFile>(map)?.build(space(source)?, space(target)?)?;
            match decompose(&table) {
                Ok(u) => Ok(Outcome::ok(json!({
                    // Absent when an atom is spread over several target atoms.
                    "isometry": IsometryFile::from_isometry(&u).ok().map(|f| value(&f)),
                    "atom_images": u.homomorphism().atom_images(),
                    "multiplier": u.multiplier().atom_values(),
                    "lambda_density": u.lambda_density().atom_ratios(),
                    "formula_residual": u.formula_residual(),
                }))),
                Err(e) => Err(e),
            }
        }
        Command::Separate { mu, nu, map, lambda } => {
            let (mu, nu) = (space(mu)?, space(nu)?);
            let table = match map {
                Some(path) => Some(schema::read::<LinearMapFile>(path)?.build(nu.clone(), mu.clone())?),
                None => None,
            };
            separate(&mu, &nu, table.as_ref(), *lambda)
        }
        Command::Selftest { fault } => {
            let report = selftest::run_with_fault(cli.seed, fault.as_deref());
            let pass = report.pass;
            Ok(Outcome::answer(value(&report), pass))
        }
    }
}

fn separate(
    mu: &Arc<MeasureAlgebra>,
    nu: &Arc<MeasureAlgebra>,
    table: Option<&LinearMapTable>,
    lambda: Option<f64>,
) -> Result<Outcome, Error> {
    let candidate = match table {
        Some(t) => Candidate::Matrix(t),
        None if mu.same_structure(nu) => Candidate::Identity,
        None => {
            return Err(Error::StructureMismatch(
                "spaces differ in shape; pass a candidate with --map".into(),
            ))
        }
    };
    let one = LogFunction::constant(nu.clone(), 1.0);
    let norm_u1 = match candidate {
        Candidate::Matrix(t) => t.apply(&one)?.fnorm().value(),
        _ => one.rebase(mu.clone())?.fnorm().value(),
    };
    let threshold = separating_lambda(mu.total_measure()?, nu.total_measure()?, norm_u1)?;
    let lambda = lambda.unwrap_or(2.0 * threshold.lambda_star + 1.0);
    let mut cert = verify_separation(mu, nu, candidate, lambda)?;
    cert.lambda_star = Some(threshold.lambda_star);
    let separates = cert.separates();
    Ok(Outcome::answer(
        json!({
            "threshold": value(&threshold),
            "certificate": value(&cert),
            "separates": separates,
        }),
        separates,
    ))
}

fn emit(out: Option<&Path>, report: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("json values serialize");
    text.push('\n');
    match out {
        None => std::io::stdout().write_all(text.as_bytes()),
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        // A well-formed input that fails a structural property is a negative
        // answer, reported like any other.
        Err(e) if e.is_mathematical() => {
            let mut report = error_report(&e);
            report["pass"] = json!(false);
            Outcome::answer(report, false)
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&error_report(&e)).expect("json values serialize"));
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(cli.out.as_deref(), &outcome.report) {
        eprintln!("{}", json!({ "error": "Io", "message": e.to_string() }));
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.status)
}
