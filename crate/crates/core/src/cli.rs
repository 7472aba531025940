//! Command-line front end.
//!
//! Every subcommand writes one canonical JSON report to stdout or `--out`.
//! Exit codes: 0 success, 2 usage error, 1 computation error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Number, Value};

use crate::concentration::{compare_bounds, compare_csv, confidence_radius, evaluate, BoundKind, BoundQuery, Sidedness};
use crate::distributions::Distribution;
use crate::error::{Result, StatError};
use crate::estimation::{self, Method, ParametricFamily, PriorSpec};
use crate::inference::{ci_mean_clt, p_value_binomial_tail, z_test_proportion, CiInput, CiMode, Side};
use crate::io::{numeric_csv, report, Table};
use crate::linmodels::{
    basis_expand, kernel_ridge_fit, logistic_fit_irls, ols_fit, slope_t_interval, Basis, DesignMatrix, Kernel, KernelSpec,
};
use crate::montecarlo::{clt_experiment, lln_experiment, quantile_sorted, ExperimentPlan, Statistic};
use crate::reproduce;

#[derive(Debug, Parser)]
#[command(name = "statkit", version, about = "Distributions, bounds, simulation, estimation, inference and regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Seed echoed into the report and used by randomized commands.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a distribution: moments, mass or density, cdf, quantiles.
    Dist(DistArgs),
    /// Evaluate a tail bound, or tabulate all bounds with --compare.
    Bound(BoundArgs),
    /// Replicated simulation of a statistic.
    Simulate(SimulateArgs),
    /// Point estimate for a single-parameter family.
    Estimate(EstimateArgs),
    /// CLT confidence interval for a mean or proportion.
    Ci(CiArgs),
    /// Test a proportion against p0.
    Test(TestArgs),
    /// Fit a linear, basis, kernel ridge or logistic model.
    Fit(FitArgs),
    /// Recompute the golden reference values and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DistArgs {
    /// Distribution: JSON object, path to a JSON file, or `name:key=value,...`.
    #[arg(long)]
    pub dist: String,
    /// Points at which to evaluate mass/density and cdf; one vector point for
    /// multivariate families.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub at: Vec<f64>,
    /// Probabilities at which to evaluate the quantile function.
    #[arg(long, value_delimiter = ',')]
    pub quantile: Vec<f64>,
    /// CSV of (x, mass or density, cdf).
    #[arg(long)]
    #[serde(skip)]
    pub plot_data: Option<PathBuf>,
    /// Grid size for continuous plot data.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    /// markov, chebyshev, chernoff or hoeffding.
    #[arg(long, required_unless_present = "compare")]
    pub kind: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub mean: f64,
    #[arg(long, default_value_t = 0.0)]
    pub variance: f64,
    /// Support a,b for Hoeffding.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub range: Option<Vec<f64>>,
    #[arg(long, required_unless_present = "compare")]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    /// Divide two-sided bounds by two (symmetric laws).
    #[arg(long)]
    pub halved: bool,
    /// Also report the deviation radius achieving this failure probability.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Emit a CSV comparing all bounds for the mean of n draws of --dist.
    #[arg(long)]
    pub compare: bool,
    #[arg(long)]
    pub dist: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    /// mean, variance or max.
    #[arg(long, default_value = "mean")]
    pub stat: String,
    /// Deviation thresholds for the law-of-large-numbers table.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01")]
    pub epsilons: Vec<f64>,
    /// CSV of (n, mean, q05, q50, q95) of the statistic.
    #[arg(long)]
    #[serde(skip)]
    pub plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    /// ber, pois, exp, unif or normal:<variance>.
    #[arg(long)]
    pub family: String,
    /// mle, mom or map.
    #[arg(long, default_value = "mle")]
    pub method: String,
    /// Prior JSON file (map only).
    #[arg(long)]
    pub prior: Option<PathBuf>,
    /// Column holding the data; the first column by default.
    #[arg(long)]
    pub column: Option<String>,
    pub data: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct CiArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub successes: Option<u64>,
    /// Accepted for symmetry with `test`; not used by the interval.
    #[arg(long)]
    pub p0: Option<f64>,
    /// CSV with the raw sample, used instead of --n/--successes.
    #[arg(long, conflicts_with_all = ["n", "successes"])]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// plugin or worstcase.
    #[arg(long, default_value = "plugin")]
    pub variance: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct TestArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub successes: u64,
    #[arg(long)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// greater, less or two-sided.
    #[arg(long, default_value = "greater")]
    pub side: String,
    /// exact (binomial tail) or z (normal approximation).
    #[arg(long, default_value = "exact")]
    pub method: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// ols, basis, kernel or logistic.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub target: String,
    /// Feature columns; all non-target columns by default.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,
    /// poly:<degree> or sin:<order>.
    #[arg(long)]
    pub basis: Option<String>,
    /// linear, poly:<degree>[:<offset>] or gaussian:<width>.
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub no_intercept: bool,
    /// Level for coefficient intervals.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// CSV of features, target and fitted values.
    #[arg(long)]
    #[serde(skip)]
    pub plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    /// Run every golden check (the only mode).
    #[arg(long, required = true)]
    pub all: bool,
    /// Exit with status 1 when any check fails.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub common: Common,
}

/// Parses `argv` (including the program name), runs it and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                StatError::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Dist(a) => cmd_dist(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Ci(a) => cmd_ci(a),
        Command::Test(a) => cmd_test(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}

fn emit<A: Serialize, R: Serialize>(artifact: &str, args: &A, common: &Common, result: &R) -> Result<()> {
    let config = json!({ "command": artifact, "args": serde_json::to_value(args)? });
    let text = report(artifact, &config, common.seed, result)?;
    write_out(common.out.as_deref(), &text)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| StatError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn number(s: &str) -> Value {
    if let Ok(i) = s.parse::<i64>() {
        return Value::Number(i.into());
    }
    s.parse::<f64>()
        .ok()
        .and_then(Number::from_f64)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(s.to_string()))
}

/// Reads a distribution from JSON text, a JSON file, or `name:key=value,...`
/// where list values are separated by `;` (e.g. `multinomial:n=12,probs=0.5;0.5`).
pub fn parse_distribution(spec: &str) -> Result<Distribution> {
    let spec = spec.trim();
    let text = if spec.starts_with('{') {
        spec.to_string()
    } else if Path::new(spec).is_file() {
        std::fs::read_to_string(spec)?
    } else {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let name = match name {
            "uniform" | "unif" => "continuous_uniform",
            "negbin" => "negative_binomial",
            other => other,
        };
        let mut params = Map::new();
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| StatError::Usage(format!("parameter `{kv}` must look like key=value")))?;
            let v = if v.contains(';') {
                Value::Array(v.split(';').map(number).collect())
            } else {
                number(v)
            };
            params.insert(k.trim().to_string(), v);
        }
        json!({ "family": name, "params": params }).to_string()
    };
    serde_json::from_str::<Distribution>(&text).map_err(|e| StatError::Usage(format!("bad distribution `{spec}`: {e}")))
}

fn parse_usage<T: std::str::FromStr<Err = StatError>>(s: &str) -> Result<T> {
    s.parse::<T>().map_err(|e| match e {
        StatError::Usage(m) => StatError::Usage(m),
        other => StatError::Usage(other.to_string()),
    })
}

#[derive(Serialize)]
struct Evaluation {
    x: f64,
    mass_or_density: f64,
    cdf: f64,
}

fn cmd_dist(a: DistArgs) -> Result<i32> {
    let d = parse_distribution(&a.dist)?;
    if d.is_multivariate() {
        // --at is read as one vector point
        let at = if a.at.is_empty() { None } else { Some(d.mass_or_density_vec(&a.at)?) };
        let result = json!({
            "distribution": d,
            "name": d.name(),
            "discrete": d.is_discrete(),
            "mean_vector": d.mean_vector()?,
            "point": if a.at.is_empty() { Value::Null } else { json!(a.at) },
            "mass_or_density": at,
        });
        emit("dist", &a, &a.common, &result)?;
        return Ok(0);
    }
    let moments = d.moments().map(|m| json!(m)).unwrap_or_else(|e| json!({ "undefined": e.to_string() }));
    let mode = d.mode().ok();
    let mut evals = Vec::new();
    for &x in &a.at {
        evals.push(Evaluation {
            x,
            mass_or_density: d.mass_or_density(x)?,
            cdf: d.cdf(x)?,
        });
    }
    let quantiles = a
        .quantile
        .iter()
        .map(|&u| Ok(json!({ "u": u, "x": d.quantile(u)? })))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = d.support()?;
    let result = json!({
        "distribution": d,
        "name": d.name(),
        "discrete": d.is_discrete(),
        "support": [finite_or_null(lo), finite_or_null(hi)],
        "moments": moments,
        "mode": mode,
        "evaluations": evals,
        "quantiles": quantiles,
    });
    if let Some(p) = &a.plot_data {
        let rows: Vec<Vec<f64>> = if d.is_discrete() {
            d.pmf_table()?.iter().map(|(x, q)| Ok(vec![x, q, d.cdf(x)?])).collect::<Result<_>>()?
        } else {
            let (l, h) = (d.quantile(0.001)?, d.quantile(0.999)?);
            let k = a.points.max(2);
            (0..k)
                .map(|i| {
                    let x = l + (h - l) * i as f64 / (k - 1) as f64;
                    Ok(vec![x, d.mass_or_density(x)?, d.cdf(x)?])
                })
                .collect::<Result<_>>()?
        };
        write_out(Some(p), &numeric_csv(&["x", "mass_or_density", "cdf"], rows))?;
    }
    emit("dist", &a, &a.common, &result)?;
    Ok(0)
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn cmd_bound(a: BoundArgs) -> Result<i32> {
    if a.compare {
        let d = parse_distribution(a.dist.as_deref().ok_or_else(|| StatError::Usage("--compare needs --dist".into()))?)?;
        if a.epsilons.is_empty() {
            return Err(StatError::Usage("--compare needs --epsilons".into()));
        }
        let rows = compare_bounds(&d, a.n, &a.epsilons)?;
        write_out(a.common.out.as_deref(), &compare_csv(&rows))?;
        return Ok(0);
    }
    let kind: BoundKind = parse_usage(a.kind.as_deref().unwrap_or_default())?;
    let mut q = BoundQuery::new(kind, a.epsilon.unwrap_or_default());
    q.mean = a.mean;
    q.variance = a.variance;
    q.range = match a.range.as_deref() {
        None => None,
        Some(&[lo, hi]) => Some((lo, hi)),
        Some(r) => return Err(StatError::Usage(format!("--range takes two numbers a,b, got {}", r.len()))),
    };
    q.n = a.n;
    q.delta = a.delta;
    if a.halved {
        q.sidedness = Sidedness::HalvedSymmetric;
    }
    let mut r = evaluate(&q)?;
    if let Some(delta) = a.delta {
        r.radius = Some(confidence_radius(&q, delta)?);
    }
    emit("bound", &a, &a.common, &r)?;
    Ok(0)
}

#[derive(Serialize)]
struct StatSummary {
    n: usize,
    mean: f64,
    q05: f64,
    q50: f64,
    q95: f64,
}

fn cmd_simulate(a: SimulateArgs) -> Result<i32> {
    let d = parse_distribution(&a.dist)?;
    let stat: Statistic = parse_usage(&a.stat)?;
    let plan = ExperimentPlan::new(d, a.sizes.clone(), a.replicates, a.common.seed)?.with_statistic(stat);
    let summaries = plan
        .sizes
        .iter()
        .map(|&n| {
            let mut v = plan.map_replicates(n, |xs| stat.apply(xs))?;
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            v.sort_by(f64::total_cmp);
            Ok(StatSummary {
                n,
                mean,
                q05: quantile_sorted(&v, 0.05),
                q50: quantile_sorted(&v, 0.5),
                q95: quantile_sorted(&v, 0.95),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut notes = Vec::new();
    let (lln, clt) = if stat == Statistic::Mean {
        let lln = lln_experiment(&plan, &a.epsilons).map_err(|e| notes.push(format!("no LLN table: {e}"))).ok();
        let clt = clt_experiment(&plan).map_err(|e| notes.push(format!("no CLT table: {e}"))).ok();
        (lln, clt)
    } else {
        (None, None)
    };
    if let Some(p) = &a.plot_data {
        let rows = summaries.iter().map(|s| vec![s.n as f64, s.mean, s.q05, s.q50, s.q95]);
        write_out(Some(p), &numeric_csv(&["n", "mean", "q05", "q50", "q95"], rows))?;
    }
    let result = json!({
        "plan": plan,
        "statistic": summaries,
        "lln": lln,
        "clt": clt,
        "notes": notes,
    });
    emit("simulate", &a, &a.common, &result)?;
    Ok(0)
}

fn data_column(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let t = Table::from_path(path)?;
    Ok(match column {
        Some(c) => t.column(c)?.to_vec(),
        None => t.column_at(0).to_vec(),
    })
}

fn cmd_estimate(a: EstimateArgs) -> Result<i32> {
    let family: ParametricFamily = parse_usage(&a.family)?;
    let method: Method = parse_usage(&a.method)?;
    let data = data_column(&a.data, a.column.as_deref())?;
    let r = match method {
        Method::Mle => estimation::mle(&family, &data)?,
        Method::Mom => estimation::mom(&family, &data)?,
        Method::Map => {
            let path = a.prior.as_ref().ok_or_else(|| StatError::Usage("--method map needs --prior".into()))?;
            let prior: PriorSpec = serde_json::from_str(&std::fs::read_to_string(path)?)
                .map_err(|e| StatError::Usage(format!("bad prior {}: {e}", path.display())))?;
            estimation::map(&family, &data, &prior)?
        }
    };
    emit("estimate", &a, &a.common, &r)?;
    Ok(0)
}

fn cmd_ci(a: CiArgs) -> Result<i32> {
    let mode: CiMode = parse_usage(&a.variance)?;
    let data;
    let input = match (&a.data, a.n, a.successes) {
        (Some(p), _, _) => {
            data = data_column(p, a.column.as_deref())?;
            CiInput::Data(&data)
        }
        (None, Some(n), Some(successes)) => CiInput::Proportion { successes, n },
        _ => return Err(StatError::Usage("give --n and --successes, or --data".into())),
    };
    let r = ci_mean_clt(input, a.alpha, mode)?;
    emit("ci", &a, &a.common, &r)?;
    Ok(0)
}

#[derive(Serialize)]
struct ExactTest {
    method: &'static str,
    null_p: f64,
    alternative: Side,
    n: u64,
    successes: u64,
    p_value: f64,
    alpha: f64,
    reject: bool,
}

fn cmd_test(a: TestArgs) -> Result<i32> {
    let side: Side = parse_usage(&a.side)?;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(StatError::ParameterDomain(format!("alpha must lie in (0, 1), got {}", a.alpha)));
    }
    match a.method.as_str() {
        "exact" => {
            let p = p_value_binomial_tail(a.n, a.p0, a.successes, side)?;
            let r = ExactTest {
                method: "exact-binomial",
                null_p: a.p0,
                alternative: side,
                n: a.n,
                successes: a.successes,
                p_value: p,
                alpha: a.alpha,
                reject: p < a.alpha,
            };
            emit("test", &a, &a.common, &r)?;
        }
        "z" => {
            let r = z_test_proportion(a.n, a.p0, a.successes, side, a.alpha)?;
            emit("test", &a, &a.common, &r)?;
        }
        m => return Err(StatError::Usage(format!("unknown test method `{m}` (exact, z)"))),
    }
    Ok(0)
}

fn cmd_fit(a: FitArgs) -> Result<i32> {
    let t = Table::from_path(&a.data)?;
    let y = t.column(&a.target)?.to_vec();
    let features: Vec<String> = if a.features.is_empty() {
        t.names().iter().filter(|n| **n != a.target).cloned().collect()
    } else {
        a.features.clone()
    };
    let fnames: Vec<&str> = features.iter().map(|s| s.as_str()).collect();
    let rows = t.rows(&fnames)?;
    let (result, fitted) = match a.model.as_str() {
        "ols" | "basis" => {
            let design = if a.model == "basis" {
                let spec = a.basis.as_deref().ok_or_else(|| StatError::Usage("--model basis needs --basis".into()))?;
                let basis: Basis = parse_usage(spec)?;
                if fnames.len() != 1 {
                    return Err(StatError::Usage(format!("basis expansion takes one feature, got {}", fnames.len())));
                }
                basis_expand(t.column(fnames[0])?, basis)?
            } else {
                let cols: Vec<Vec<f64>> = fnames.iter().map(|n| t.column(n).map(<[f64]>::to_vec)).collect::<Result<_>>()?;
                DesignMatrix::from_columns(&cols, &fnames, !a.no_intercept)?
            };
            let fit = ols_fit(&design, &y)?;
            for w in &fit.warnings {
                eprintln!("warning: {w}");
            }
            let intervals = (0..fit.coefficients.len())
                .map(|j| slope_t_interval(&fit, j, a.alpha))
                .collect::<Result<Vec<_>>>()?;
            let fitted = fit.fitted.clone();
            (json!({ "model": a.model, "fit": fit, "intervals": intervals }), fitted)
        }
        "kernel" => {
            let kernel: Kernel = parse_usage(a.kernel.as_deref().unwrap_or("gaussian:1"))?;
            let lambda = a.lambda.ok_or_else(|| StatError::Usage("--model kernel needs --lambda".into()))?;
            let fit = kernel_ridge_fit(&rows, &y, KernelSpec { kernel, lambda })?;
            let fitted: Vec<f64> = rows.iter().map(|r| fit.predict(r)).collect();
            (json!({ "model": "kernel", "fit": { "spec": fit.spec, "alpha": fit.alpha, "jitter": fit.jitter }, "fitted": fitted }), fitted)
        }
        "logistic" => {
            let kernel = a.kernel.as_deref().map(parse_usage::<Kernel>).transpose()?;
            let lambda = a.lambda.unwrap_or(1e-3);
            let design: Vec<Vec<f64>> = if kernel.is_none() && !a.no_intercept {
                rows.iter().map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect()).collect()
            } else {
                rows.clone()
            };
            let fit = logistic_fit_irls(&design, &y, lambda, kernel)?;
            if !fit.converged {
                eprintln!("warning: IRLS stopped after {} iterations without converging", fit.iterations);
            }
            let probs: Vec<f64> = design.iter().map(|r| fit.probability(r)).collect();
            let summary = json!({
                "weights": fit.weights,
                "kernel": fit.kernel,
                "lambda": fit.lambda,
                "converged": fit.converged,
                "iterations": fit.iterations,
                "gradient_norm": fit.gradient_norm,
                "objective_trace": fit.objective_trace,
                "intercept": kernel.is_none() && !a.no_intercept,
            });
            (json!({ "model": "logistic", "fit": summary, "probabilities": probs }), probs)
        }
        m => return Err(StatError::Usage(format!("unknown model `{m}` (ols, basis, kernel, logistic)"))),
    };
    if let Some(p) = &a.plot_data {
        let mut header: Vec<&str> = fnames.clone();
        header.push(&a.target);
        header.push("fitted");
        let out = rows.iter().zip(&y).zip(&fitted).map(|((r, yv), f)| {
            let mut v = r.clone();
            v.push(*yv);
            v.push(*f);
            v
        });
        write_out(Some(p), &numeric_csv(&header, out))?;
    }
    emit("fit", &a, &a.common, &result)?;
    Ok(0)
}

fn cmd_reproduce(a: ReproduceArgs) -> Result<i32> {
    let table = reproduce::run_all(a.common.seed)?;
    eprint!("{}", table.render());
    emit("reproduce", &a, &a.common, &table)?;
    Ok(if a.strict && table.failed > 0 { 1 } else { 0 })
}
