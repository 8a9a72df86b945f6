use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entropic_cover::asymptotics::{binomial_asymptotic_check, leading_correction};
use entropic_cover::fourterm::{
    relation_sum_with_branch, sample_upper_tuple, LatticeForm, LatticeParams,
};
use entropic_cover::modules::regulator;
use entropic_cover::modules::targets::{cases, run_case, PoolSpec, TargetName};
use entropic_cover::{continue_entropy, entropy_cover, CoverPoint, PolyPath};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA: &str = "1";
const THREADS_ENV: &str = "ENTROPIC_COVER_THREADS";

#[derive(Parser)]
#[command(
    name = "entropic-cover",
    version,
    about = "Entropy on the abelian cover of C minus {0, 1}"
)]
struct Cli {
    /// Pass/fail threshold; each command has its own default.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for Xoshiro256PlusPlus.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy at a point of the cover.
    Eval {
        /// {"re":..,"im":..,"side":"none|above|below","p":..,"q":..}
        #[arg(long)]
        point: String,
    },
    /// Continue the entropy along a polygonal path and compare with the
    /// value at the lifted endpoint.
    Continue(ContinueArgs),
    /// Regulator of random extended 4-term relations.
    #[command(name = "verify-4term")]
    Verify4Term(VerifyArgs),
    /// Search for an exact certificate of a named target.
    Certify {
        /// lemma1, eq2t3, lemma2:<p>,<q>, kernel-c, beta2-sym or beta2-inv.
        #[arg(long)]
        target: String,
        /// Pool specification as inline JSON or @file.
        #[arg(long)]
        pool_spec: Option<String>,
    },
    /// Binomial asymptotics against the entropy.
    Asymptotics {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        n: Vec<u64>,
    },
}

#[derive(Args)]
struct ContinueArgs {
    #[arg(long)]
    point: String,
    /// JSON array of [re, im] vertices starting at the point.
    #[arg(long)]
    path: String,
    /// Initial samples per edge.
    #[arg(long, default_value_t = 16)]
    steps: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Lattice parameters are drawn from the even integers in [-R, R].
    #[arg(long, default_value_t = 8)]
    param_range: i64,
    #[arg(long, default_value_t = 200)]
    params_per_sample: usize,
    /// Also report the two alternative sign patterns of the lattice.
    #[arg(long)]
    forms: bool,
}

/// Usage or domain problem: one line on stderr, exit 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

struct Report {
    body: Value,
    pass: bool,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn parse_point(s: &str) -> Result<CoverPoint, Fail> {
    serde_json::from_str(s).map_err(|e| Fail(format!("bad --point: {e}")))
}

fn parse_path(s: &str) -> Result<PolyPath, Fail> {
    let raw: Vec<[f64; 2]> =
        serde_json::from_str(s).map_err(|e| Fail(format!("bad --path: {e}")))?;
    Ok(PolyPath::new(
        raw.into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect(),
    )?)
}

fn eval(point: &str) -> Result<Report, Fail> {
    let pt = parse_point(point)?;
    let phi = entropy_cover(&pt)?;
    Ok(Report {
        body: json!({ "point": pt, "phi": pair(phi) }),
        pass: true,
    })
}

fn continue_cmd(args: &ContinueArgs, tol: f64) -> Result<Report, Fail> {
    let start = parse_point(&args.point)?;
    let path = parse_path(&args.path)?;
    let end = entropic_cover::cover::continue_point(&start, &path)?;
    let continued = continue_entropy(&start, &path, args.steps)?;
    let closed = entropy_cover(&end)?;
    let deviation = (continued - closed).norm();
    let pass = deviation <= tol;
    Ok(Report {
        body: json!({
            "start": start,
            "end": end,
            "continued": pair(continued),
            "closed_form": pair(closed),
            "deviation": deviation,
            "tolerance": tol,
            "pass": pass,
        }),
        pass,
    })
}

#[derive(Serialize)]
struct SampleResult {
    index: usize,
    x0: [f64; 2],
    x1: [f64; 2],
    max_residual: f64,
    worst_params: LatticeParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    forms: Option<Vec<(LatticeForm, f64)>>,
}

fn verify_4term(args: &VerifyArgs, seed: u64, tol: f64) -> Result<Report, Fail> {
    if args.samples == 0 || args.params_per_sample == 0 {
        return Err(Fail(
            "--samples and --params-per-sample must be positive".into(),
        ));
    }
    // Draw everything up front so that results do not depend on scheduling.
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let jobs: Vec<_> = (0..args.samples)
        .map(|i| {
            let t = sample_upper_tuple(&mut rng);
            let params: Vec<_> = (0..args.params_per_sample)
                .map(|_| LatticeParams::sample(&mut rng, args.param_range))
                .collect();
            (i, t, params)
        })
        .collect();
    let forms: &[LatticeForm] = if args.forms {
        &LatticeForm::ALL
    } else {
        &[LatticeForm::PlusPlus]
    };
    let run = || {
        jobs.par_iter()
            .map(|(i, t, params)| -> Result<SampleResult, String> {
                let mut worst = vec![0.0f64; forms.len()];
                let mut worst_params = params[0];
                for lp in params {
                    for (k, form) in forms.iter().enumerate() {
                        let s = relation_sum_with_branch(t, &lp.branch(*form))
                            .map_err(|e| e.to_string())?;
                        let v = regulator(&s).map_err(|e| e.to_string())?.norm();
                        if k == 0 && v > worst[0] {
                            worst_params = *lp;
                        }
                        worst[k] = worst[k].max(v);
                    }
                }
                Ok(SampleResult {
                    index: *i,
                    x0: pair(*t.x0()),
                    x1: pair(*t.x1()),
                    max_residual: worst[0],
                    worst_params,
                    forms: args
                        .forms
                        .then(|| forms.iter().copied().zip(worst.iter().copied()).collect()),
                })
            })
            .collect::<Result<Vec<_>, String>>()
    };
    let results = match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                Fail(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()?
                .install(run)
        }
        Err(_) => run(),
    }
    .map_err(Fail)?;
    let max_residual = results.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let pass = max_residual < tol;
    let mut body = json!({
        "seed": seed,
        "samples": args.samples,
        "params_per_sample": args.params_per_sample,
        "param_range": args.param_range,
        "tolerance": tol,
        "max_residual": max_residual,
        "pass": pass,
        "results": results,
    });
    if args.forms {
        let per_form: serde_json::Map<_, _> = forms
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let m = results
                    .iter()
                    .filter_map(|r| r.forms.as_ref().map(|v| v[k].1))
                    .fold(0.0, f64::max);
                (
                    serde_json::to_value(f)
                        .unwrap()
                        .as_str()
                        .unwrap()
                        .to_string(),
                    json!(m),
                )
            })
            .collect();
        body["forms"] = Value::Object(per_form);
    }
    Ok(Report { body, pass })
}

fn certify(target: &str, pool_spec: Option<&str>) -> Result<Report, Fail> {
    let name: TargetName = target.parse().map_err(Fail)?;
    let pool = match pool_spec {
        None => None,
        Some(s) => {
            let text = match s.strip_prefix('@') {
                Some(path) => fs::read_to_string(path)
                    .map_err(|e| Fail(format!("cannot read {path}: {e}")))?,
                None => s.to_string(),
            };
            Some(
                serde_json::from_str::<PoolSpec>(&text)
                    .map_err(|e| Fail(format!("bad --pool-spec: {e}")))?,
            )
        }
    };
    let reports = cases(name)?
        .iter()
        .map(|c| run_case(c, pool.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.passed());
    Ok(Report {
        body: json!({ "target": name.to_string(), "pass": pass, "cases": reports }),
        pass,
    })
}

fn asymptotics(a: f64, b: f64, n: &[u64], tol: Option<f64>) -> Result<Report, Fail> {
    let rep = binomial_asymptotic_check(a, b, n)?;
    let max = rep.max_scaled_error();
    let pass = tol.is_none_or(|t| max <= t);
    let mut body = serde_json::to_value(&rep)?;
    body["abs_errors"] = json!(rep.abs_errors());
    body["leading_correction"] = json!(leading_correction(a, b));
    body["max_scaled_error"] = json!(max);
    body["pass"] = json!(pass);
    if let Some(t) = tol {
        body["tolerance"] = json!(t);
    }
    Ok(Report { body, pass })
}

fn run(cli: &Cli) -> Result<Report, Fail> {
    let mut report = match &cli.command {
        Command::Eval { point } => eval(point)?,
        Command::Continue(args) => continue_cmd(args, cli.tolerance.unwrap_or(1e-8))?,
        Command::Verify4Term(args) => verify_4term(args, cli.seed, cli.tolerance.unwrap_or(1e-9))?,
        Command::Certify { target, pool_spec } => certify(target, pool_spec.as_deref())?,
        Command::Asymptotics { a, b, n } => asymptotics(*a, *b, n, cli.tolerance)?,
    };
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    if let Value::Object(m) = std::mem::take(&mut report.body) {
        out.extend(m);
    }
    report.body = Value::Object(out);
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Fail(msg)) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or_default());
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&report.body).expect("report is valid JSON") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
