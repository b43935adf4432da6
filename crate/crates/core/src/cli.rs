//! Command-line front end. Every command produces one report; the process
//! exits with status 0 when every check in the report passes, 1 when one
//! fails, and 2 on a usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::density;
use crate::error::{Error, Result};
use crate::factor::primes_up_to;
use crate::surface::{self, SurfacePoint};
use crate::torsor;
use crate::verify::{self, FitOptions, Split, Suite};
use crate::ExactRational;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// Short human-readable summary.
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Direct,
    Torsor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Arith,
    Inter,
    Sum7,
    Sum6,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Arith => Suite::Arith,
            SuiteArg::Inter => Suite::Inter,
            SuiteArg::Sum7 => Suite::Sum7,
            SuiteArg::Sum6 => Suite::Sum6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Calibration,
    Validation,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Split {
        match s {
            SplitArg::Calibration => Split::Calibration,
            SplitArg::Validation => Split::Validation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum Command {
    /// Count points of height at most B in the counting region.
    Count {
        #[arg(long, conflicts_with = "torsor", required_unless_present = "torsor")]
        direct: bool,
        #[arg(long)]
        torsor: bool,
        #[arg(value_name = "B")]
        bound: u64,
    },
    /// Lift a point to the torsor and map it back.
    Lift {
        #[arg(num_args = 5, value_names = ["X0", "X1", "X2", "X3", "X4"], allow_negative_numbers = true)]
        coords: Vec<BigInt>,
    },
    /// The leading constant with its ingredients and Monte Carlo cross-checks.
    Peyre {
        #[arg(long, default_value_t = 100_000)]
        pmax: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run an instance suite against its frozen gate.
    Lemmas {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value = "validation")]
        split: SplitArg,
    },
    /// Compare counts along a ladder of bounds with the predicted growth.
    Fit {
        #[arg(long, value_delimiter = ',', required = true)]
        ladder: Vec<u64>,
        /// Rungs up to this bound are also counted directly.
        #[arg(long, default_value_t = 10_000)]
        direct_limit: u64,
        #[arg(long, default_value_t = 100_000)]
        pmax: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Local factor identities for every prime up to P.
    LocalFactors {
        #[arg(long, default_value_t = 100)]
        pmax: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Parser)]
#[command(name = "quartic-a3", version, about = "Rational points of bounded height on an A3 quartic del Pezzo surface")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    pub samples: u64,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == Some(0) {
            return Err(Error::Config("--workers must be positive".into()));
        }
        if self.samples < 2 {
            return Err(Error::Config("--samples must be at least 2".into()));
        }
        match &self.command {
            Command::Peyre { tol, .. } | Command::Fit { tol, .. } if !(*tol > 0.0) => {
                Err(Error::Config(format!("--tol must be positive, got {tol}")))
            }
            Command::Fit { ladder, .. } if ladder.windows(2).any(|w| w[0] >= w[1]) => Err(
                Error::Config(format!("--ladder must be strictly increasing: {ladder:?}")),
            ),
            _ => Ok(()),
        }
    }
}

/// A finished run: the rendered report and the exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub rendered: String,
}

struct Report {
    command: &'static str,
    args: Value,
    result: Value,
    /// Key of the array in `result` that becomes the CSV rows.
    table: Option<&'static str>,
    failures: Vec<String>,
    text: String,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn check(failures: &mut Vec<String>, ok: bool, what: &str) {
    if !ok {
        failures.push(what.to_string());
    }
}

fn usage_like(e: &Error) -> bool {
    matches!(
        e,
        Error::ZeroBound
            | Error::BoundTooLarge { .. }
            | Error::NonPositive(_)
            | Error::NotPrime(_)
            | Error::OutsideDomain(_)
            | Error::NotLiftable(_)
            | Error::Config(_)
    )
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => Outcome {
            status: if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS },
            rendered: e.to_string(),
        },
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return Outcome {
            status: EXIT_USAGE,
            rendered: format!("error: {e}\n"),
        };
    }
    let start = Instant::now();
    let report = match cfg.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cfg)),
            Err(e) => Err(Error::Config(e.to_string())),
        },
        None => dispatch(cfg),
    };
    let elapsed = cfg.timing.then(|| start.elapsed().as_secs_f64());
    match report {
        Ok(r) => {
            let status = if r.failures.is_empty() { EXIT_PASS } else { EXIT_FAIL };
            Outcome {
                status,
                rendered: render(cfg, &r, elapsed),
            }
        }
        Err(e) => Outcome {
            status: if usage_like(&e) { EXIT_USAGE } else { EXIT_FAIL },
            rendered: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Report> {
    match &cfg.command {
        Command::Count {
            direct, bound, ..
        } => count(*direct, *bound),
        Command::Lift { coords } => lift(coords),
        Command::Peyre { pmax, tol } => peyre(*pmax, *tol, cfg.samples, cfg.seed),
        Command::Lemmas { suite, split } => lemmas((*suite).into(), (*split).into()),
        Command::Fit {
            ladder,
            direct_limit,
            pmax,
            tol,
        } => fit(
            ladder,
            FitOptions {
                direct_limit: *direct_limit,
                pmax: *pmax,
                quad_tol: *tol,
            },
        ),
        Command::LocalFactors { pmax } => local_factors(*pmax),
    }
}

fn count(direct: bool, bound: u64) -> Result<Report> {
    let (method, n) = if direct {
        ("direct", surface::count_direct(bound)?.count)
    } else {
        ("torsor", 2 * torsor::count(bound)?)
    };
    Ok(Report {
        command: "count",
        args: json!({ "method": method, "B": bound }),
        result: json!({ "B": bound, "method": method, "count": n }),
        table: None,
        failures: vec![],
        text: format!("{n}\n"),
    })
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn lift(coords: &[BigInt]) -> Result<Report> {
    let arr: [BigInt; 5] = coords
        .to_vec()
        .try_into()
        .map_err(|_| Error::Config("lift takes exactly five coordinates".into()))?;
    let x = SurfacePoint::normalized(arr)?;
    if !surface::in_counting_region(&x) {
        return Err(Error::OutsideDomain(
            "point lies outside the counting region x₀x₁x₂x₃ ≠ 0".into(),
        ));
    }
    let t = torsor::lift(&x)?;
    let mut failures = vec![];
    let back = torsor::to_point(&t);
    check(&mut failures, back.as_ref() == Ok(&x), "to_point(lift(x)) = x");
    check(&mut failures, torsor::check_equations(&t), "torsor equations");
    check(&mut failures, torsor::check_coprimality(&t), "coprimality conditions");
    let text = format!("η=({}) α=({})\n", join(&t.eta), join(&t.alpha));
    Ok(Report {
        command: "lift",
        args: json!({ "x": coords.iter().map(|c| c.to_string()).collect::<Vec<_>>() }),
        result: json!({ "point": to_value(&x), "torsor": to_value(&t) }),
        table: None,
        failures,
        text,
    })
}

fn peyre(pmax: u64, tol: f64, samples: u64, seed: u64) -> Result<Report> {
    let b = density::peyre_constant(pmax, tol)?;
    let mc_omega = density::omega_infty_monte_carlo(samples, seed);
    let mc_polytope = density::polytope_alpha_monte_carlo(samples, seed);
    let z_omega = mc_omega.z_score(b.omega_infty.value);
    let z_polytope = mc_polytope.z_score(b.polytope_alpha.to_f64());
    let mut failures = vec![];
    check(&mut failures, b.assemblies_agree, "both assemblies of the constant agree");
    check(
        &mut failures,
        b.polytope_alpha == b.alpha_tilde.clone() * ExactRational::from_integer(2),
        "polytope volume = 2 α",
    );
    check(&mut failures, z_omega <= 3.0, "ω_∞ Monte Carlo within 3 standard errors");
    check(&mut failures, z_polytope <= 3.0, "polytope Monte Carlo within 3 standard errors");
    let text = format!(
        "c = {:.12e} ± {:.2e}\nω_∞ = {:.12} ± {:.2e} (Monte Carlo {:.6} ± {:.6})\nEuler product = {:.12e} (tail ≤ {:.2e})\nα = {}, polytope volume = {}\n",
        b.c.value,
        b.c.error,
        b.omega_infty.value,
        b.omega_infty.error,
        mc_omega.mean,
        mc_omega.std_error,
        b.euler_product.value,
        b.euler_product.tail_bound,
        b.alpha_tilde,
        b.polytope_alpha,
    );
    let mut result = to_value(&b);
    result["omega_infty_monte_carlo"] = to_value(&mc_omega);
    result["omega_infty_z"] = json!(z_omega);
    result["polytope_monte_carlo"] = to_value(&mc_polytope);
    result["polytope_z"] = json!(z_polytope);
    Ok(Report {
        command: "peyre",
        args: json!({ "pmax": pmax, "quad_tol": tol, "samples": samples, "seed": seed }),
        result,
        table: None,
        failures,
        text,
    })
}

fn lemmas(suite: Suite, split: Split) -> Result<Report> {
    let r = verify::run_suite(suite, split)?;
    let mut failures = vec![];
    for c in suite.required_classes() {
        check(&mut failures, r.classes.contains_key(*c), &format!("class {c} represented"));
    }
    check(
        &mut failures,
        r.max_normalized_residual <= r.gate,
        &format!(
            "normalized residual {:.4} within gate {}",
            r.max_normalized_residual, r.gate
        ),
    );
    let text = format!(
        "{:?} ({:?}): {} instances, max normalized residual {:.4}, gate {}\n",
        suite,
        split,
        r.reports.len(),
        r.max_normalized_residual,
        r.gate
    );
    Ok(Report {
        command: "lemmas",
        args: json!({ "suite": to_value(&suite), "split": to_value(&split) }),
        result: to_value(&r),
        table: Some("reports"),
        failures,
        text,
    })
}

fn fit(ladder: &[u64], opts: FitOptions) -> Result<Report> {
    let h = verify::fit_asymptotic(ladder, opts)?;
    let mut failures = vec![];
    check(&mut failures, h.gate.direct_agrees, "direct count = 2 #T(B)");
    check(
        &mut failures,
        h.gate.shape,
        "N/(B log⁵B) increasing toward c or within [0.3, 3] c",
    );
    check(
        &mut failures,
        h.gate.decreasing_gap,
        "|ratio − 1| non-increasing over the last three rungs",
    );
    let mut text = format!("c = {:.10e}\n{:>10} {:>12} {:>12} {:>10} {:>10}\n", h.c, "B", "N", "c_fit", "ratio", "main");
    for r in &h.rows {
        let _ = writeln!(
            text,
            "{:>10} {:>12} {:>12.4e} {:>10.4} {:>10.4}",
            r.bound, r.n_torsor, r.c_fit, r.ratio, r.main_term_ratio
        );
    }
    Ok(Report {
        command: "fit",
        args: json!({
            "ladder": ladder,
            "direct_limit": opts.direct_limit,
            "pmax": opts.pmax,
            "quad_tol": opts.quad_tol,
        }),
        result: to_value(&h),
        table: Some("rows"),
        failures,
        text,
    })
}

fn local_factors(pmax: u64) -> Result<Report> {
    if pmax < 2 {
        return Err(Error::Config("--pmax must be at least 2".into()));
    }
    let reports = primes_up_to(pmax)
        .into_iter()
        .map(density::local_factor_report)
        .collect::<Result<Vec<_>>>()?;
    let mut failures = vec![];
    for r in &reports {
        check(&mut failures, r.holds(), &format!("local factor identity at p = {}", r.p));
    }
    let held = reports.iter().filter(|r| r.holds()).count();
    Ok(Report {
        command: "local-factors",
        args: json!({ "pmax": pmax }),
        result: json!({ "primes": reports.len(), "reports": to_value(&reports) }),
        table: Some("reports"),
        failures,
        text: format!("{held}/{} primes up to {pmax} satisfy the identity\n", reports.len()),
    })
}

fn envelope(cfg: &RunConfig, r: &Report, elapsed: Option<f64>) -> Value {
    let mut v = json!({
        "provenance": {
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": r.command,
            "args": r.args,
            "seed": cfg.seed,
            "samples": cfg.samples,
        },
        "result": r.result,
        "pass": r.failures.is_empty(),
        "failures": r.failures,
    });
    if let Some(t) = elapsed {
        v["elapsed"] = json!(t);
    }
    v
}

fn render(cfg: &RunConfig, r: &Report, elapsed: Option<f64>) -> String {
    match cfg.format {
        Format::Text => {
            let mut s = r.text.clone();
            for f in &r.failures {
                let _ = writeln!(s, "FAIL: {f}");
            }
            if let Some(t) = elapsed {
                let _ = writeln!(s, "elapsed: {t:.3} s");
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(cfg, r, elapsed)).unwrap();
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&envelope(cfg, r, elapsed), r.table),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), xs.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        x => out.push((prefix.to_string(), scalar(x))),
    }
}

/// One row per element of `result.<table>` (or a single row), each carrying
/// the flattened top-level fields as well.
fn to_csv(v: &Value, table: Option<&str>) -> String {
    let mut outer = v.clone();
    let rows: Vec<Value> = match table {
        Some(t) => match outer["result"].as_object_mut().and_then(|m| m.remove(t)) {
            Some(Value::Array(xs)) => xs,
            _ => vec![],
        },
        None => vec![],
    };
    let mut common = Vec::new();
    flatten("", &outer, &mut common);
    let records: Vec<Vec<(String, String)>> = if rows.is_empty() {
        vec![common]
    } else {
        rows.iter()
            .map(|row| {
                let mut rec = common.clone();
                flatten(table.unwrap_or("row"), row, &mut rec);
                rec
            })
            .collect()
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = records[0].iter().map(|(k, _)| k.as_str()).collect();
    w.write_record(&header).unwrap();
    for rec in &records {
        w.write_record(rec.iter().map(|(_, x)| x.as_str())).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run_from_args(std::iter::once("quartic-a3").chain(args.iter().copied()))
    }

    #[test]
    fn count_direct_one() {
        let o = run_args(&["count", "--direct", "1"]);
        assert_eq!(o, Outcome { status: 0, rendered: "2\n".into() });
        assert_eq!(run_args(&["count", "--torsor", "1"]).rendered, "2\n");
    }

    #[test]
    fn lift_example() {
        let o = run_args(&["lift", "1", "1", "1", "-1", "-1"]);
        assert_eq!(o.status, 0);
        assert_eq!(o.rendered, "η=(1, 1, 1, 1, 1, 1, 1) α=(-1, 0, 1)\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["count", "5"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["count", "--direct", "--torsor", "5"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["count", "--direct", "0"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["fit", "--ladder", "100,10"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["peyre", "--tol", "0"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["lift", "1", "2", "1", "0", "0"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["lift", "1", "1", "1", "0", "0"]).status, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).status, EXIT_USAGE);
    }

    #[test]
    fn json_is_deterministic_and_untimed() {
        let a = run_args(&["--format", "json", "local-factors", "--pmax", "7"]);
        let b = run_args(&["--format", "json", "local-factors", "--pmax", "7"]);
        assert_eq!(a, b);
        assert!(!a.rendered.contains("elapsed"));
        let v: Value = serde_json::from_str(&a.rendered).unwrap();
        assert_eq!(v["pass"], json!(true));
        assert_eq!(v["result"]["primes"], json!(4));
        let t = run_args(&["--format", "json", "--timing", "count", "--torsor", "10"]);
        assert!(t.rendered.contains("elapsed"));
    }

    #[test]
    fn csv_matches_json() {
        let j = run_args(&["--format", "json", "local-factors", "--pmax", "5"]);
        let c = run_args(&["--format", "csv", "local-factors", "--pmax", "5"]);
        let v: Value = serde_json::from_str(&j.rendered).unwrap();
        let mut rd = csv::Reader::from_reader(c.rendered.as_bytes());
        let header = rd.headers().unwrap().clone();
        let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 3);
        for (i, row) in rows.iter().enumerate() {
            let p = header.iter().position(|h| h == "reports.p").unwrap();
            assert_eq!(row[p], v["result"]["reports"][i]["p"].to_string());
            let th = header.iter().position(|h| h == "reports.theta_sum").unwrap();
            assert_eq!(
                &row[th],
                v["result"]["reports"][i]["theta_sum"].as_str().unwrap()
            );
        }
    }
}
