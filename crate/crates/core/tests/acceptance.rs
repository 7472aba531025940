//! Acceptance gate: one PASS/FAIL line per criterion check.
//!
//! A few reference values cannot be reproduced from the fixture data or from
//! a correct formula. Those checks are still computed against the reference
//! value and reported, and are listed in `KNOWN_UNATTAINABLE`; every other
//! check must pass.

mod common;

use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use statkit::concentration::{
    berry_esseen_error, chebyshev_bound, clt_sample_size, evaluate, markov_bound, BoundKind, BoundQuery, Sidedness,
};
use statkit::estimation::{self, ParametricFamily, PriorSpec};
use statkit::inference::{ci_mean_clt, p_value_binomial_tail, z_test_proportion, CiInput, CiMode, Side};
use statkit::io::Table;
use statkit::linmodels::{
    kernel_ridge_fit, logistic_fit_irls, logistic_loss_derivative, mmlm_fit, ols_fit, ridge_primal, sigmoid,
    slope_t_interval, DesignMatrix, Kernel, KernelSpec, LogisticProblem,
};
use statkit::montecarlo::{clt_experiment, estimator_risk, ExperimentPlan};
use statkit::transform::{derived_pmf_of, product_pdf, sum_pdf, Density};
use statkit::{Distribution, PmfTable};

const KNOWN_UNATTAINABLE: &[&str] = &[
    "1.xty_1",
    "2.xtx_11",
    "3.worstcase_ci_lower",
    "3.worstcase_ci_upper",
    "3.voting_z",
];

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

#[derive(Default)]
struct Gate {
    lines: Vec<(String, bool)>,
}

impl Gate {
    fn check(&mut self, criterion: u32, id: &str, pass: bool, detail: String) {
        let key = format!("{criterion}.{id}");
        println!("{} [{key}] {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((key, pass));
    }

    fn near(&mut self, criterion: u32, id: &str, want: f64, got: f64, tol: f64) {
        let pass = (got - want).abs() <= tol;
        self.check(criterion, id, pass, format!("expected {want} ± {tol:e}, got {got:.10}"));
    }

    fn exact(&mut self, criterion: u32, id: &str, want: f64, got: f64) {
        self.check(criterion, id, got == want, format!("expected exactly {want}, got {got}"));
    }

    fn within(&mut self, criterion: u32, id: &str, got: f64, limit: f64) {
        self.check(criterion, id, got < limit, format!("{got:.3e} < {limit:e}"));
    }
}

fn fixture(name: &str) -> Table {
    Table::from_path(std::path::Path::new(&format!("{FIXTURES}/{name}"))).unwrap()
}

fn criterion_1(g: &mut Gate) {
    let t0 = Instant::now();
    let t = fixture("students.csv");
    let d = DesignMatrix::from_columns(&[t.column("x").unwrap().to_vec()], &["x"], true).unwrap();
    let fit = ols_fit(&d, t.column("y").unwrap()).unwrap();
    let ci = slope_t_interval(&fit, 1, 0.05).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    g.exact(1, "xtx_00", 18.0, fit.xtx[0][0]);
    g.exact(1, "xtx_01", 1045.0, fit.xtx[0][1]);
    g.exact(1, "xtx_10", 1045.0, fit.xtx[1][0]);
    g.exact(1, "xtx_11", 80199.0, fit.xtx[1][1]);
    g.exact(1, "xty_0", 1105.0, fit.xty[0]);
    g.exact(1, "xty_1", 8195.0, fit.xty[1]);
    g.near(1, "slope", 0.8726, fit.coefficients[1], 5e-4);
    let b0 = fit.coefficients[0];
    g.check(1, "intercept", (10.70..=10.78).contains(&b0), format!("{b0:.6} in [10.70, 10.78]"));
    g.near(1, "s", 13.8547, fit.s2.sqrt(), 5e-3);
    g.near(1, "t", 8.8025, ci.t, 5e-3);
    g.near(1, "ci_lower", 0.6624, ci.lower, 5e-3);
    g.near(1, "ci_upper", 1.0828, ci.upper, 5e-3);
    g.within(1, "runtime_s", elapsed, 1.0);
}

fn criterion_2(g: &mut Gate) {
    let t0 = Instant::now();
    let t = fixture("bivariate12.csv");
    let cols = [t.column("x1").unwrap().to_vec(), t.column("x2").unwrap().to_vec()];
    let d = DesignMatrix::from_columns(&cols, &["x1", "x2"], true).unwrap();
    let fit = ols_fit(&d, t.column("y").unwrap()).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    let xtx = [[12.0, 52.0, 102.0], [52.0, 395.0, 536.0], [102.0, 536.0, 1004.0]];
    for i in 0..3 {
        for j in 0..3 {
            g.exact(2, &format!("xtx_{i}{j}"), xtx[i][j], fit.xtx[i][j]);
        }
    }
    for (k, want) in [5.3754, 3.0118, -1.2855].into_iter().enumerate() {
        g.near(2, &format!("theta_{k}"), want, fit.coefficients[k], 1e-3);
    }
    g.near(2, "s2", 2.829, fit.s2, 5e-3);
    let inv = [[0.97476, 0.24290, -0.22871], [0.24290, 0.16207, -0.11120], [-0.22871, -0.11120, 0.08360]];
    for i in 0..3 {
        for j in 0..3 {
            g.near(2, &format!("xtx_inv_{i}{j}"), inv[i][j], fit.xtx_inv[i][j], 5e-4);
        }
    }
    g.within(2, "runtime_s", elapsed, 1.0);
}

fn criterion_3(g: &mut Gate) {
    let tail = p_value_binomial_tail(100, 0.5, 99, Side::Greater).unwrap();
    g.near(3, "binomial_tail_99_of_100", 101.0 * 2f64.powi(-100), tail, 1e-31);
    let prop = CiInput::Proportion { successes: 136, n: 400 };
    let plug = ci_mean_clt(prop.clone(), 0.01, CiMode::CltPlugin).unwrap();
    g.near(3, "plugin_ci_lower", 0.28, plug.lower, 5e-3);
    g.near(3, "plugin_ci_upper", 0.40, plug.upper, 5e-3);
    let worst = ci_mean_clt(prop, 0.01, CiMode::CltWorstcaseQuarter).unwrap();
    g.near(3, "worstcase_ci_lower", 0.307, worst.lower, 5e-3);
    g.near(3, "worstcase_ci_upper", 0.372, worst.upper, 5e-3);
    g.exact(3, "sample_size_9604", 9604.0, clt_sample_size(0.01, 0.05, 0.25).unwrap() as f64);
    let vote = z_test_proportion(137, 0.75, 131, Side::Greater, 0.01).unwrap();
    g.near(3, "voting_z", 5.426, vote.statistic, 5e-3);
}

fn criterion_4(g: &mut Gate) {
    g.exact(4, "chebyshev_var1_eps3", 1.0 / 9.0, chebyshev_bound(1.0, 3.0, 1).unwrap());
    let z = Distribution::std_normal();
    g.near(4, "normal_two_sided_tail_3", 0.0026, z.cdf(-3.0).unwrap() + z.sf(3.0).unwrap(), 2e-4);
    let lap = Distribution::laplace(0.0, 1.0).unwrap();
    let lt = lap.cdf(-3.0).unwrap() + lap.sf(3.0).unwrap();
    g.near(4, "laplace_two_sided_tail_3", (-3.0 * 2f64.sqrt()).exp(), lt, 1e-6);
    let a = 1000.0 * 1000f64.ln();
    g.exact(4, "quicksort_markov", 0.1, markov_bound(2.0 * a, 20.0 * a).unwrap());
    let mut q = BoundQuery::new(BoundKind::Markov, 16.0);
    q.mean = 4.0;
    g.exact(4, "weighted_coin_markov", 0.25, evaluate(&q).unwrap().bound);
    let mut q = BoundQuery::new(BoundKind::Chebyshev, 12.0);
    q.variance = 3.2;
    q.sidedness = Sidedness::HalvedSymmetric;
    g.near(4, "weighted_coin_chebyshev_halved", 0.011, evaluate(&q).unwrap().bound, 1e-3);
    let exact = p_value_binomial_tail(20, 0.2, 16, Side::Greater).unwrap();
    g.near(4, "weighted_coin_exact", 1.38e-8, exact, 2e-10);
}

fn criterion_5(g: &mut Gate) {
    let ber = ParametricFamily::Bernoulli;
    let unif = ParametricFamily::UniformZeroTheta;
    let pois = ParametricFamily::Poisson;
    g.exact(5, "mle_hhhht", 0.8, estimation::mle(&ber, &[1.0, 1.0, 1.0, 1.0, 0.0]).unwrap().estimate);
    g.exact(5, "uniform_mle_192", 9.0, estimation::mle(&unif, &[1.0, 9.0, 2.0]).unwrap().estimate);
    g.exact(5, "uniform_mom_192", 8.0, estimation::mom(&unif, &[1.0, 9.0, 2.0]).unwrap().estimate);
    let read_prior = |name: &str| -> PriorSpec {
        serde_json::from_str(&std::fs::read_to_string(format!("{FIXTURES}/{name}")).unwrap()).unwrap()
    };
    let flat = read_prior("prior_uniform.json");
    let skew = read_prior("prior_skewed.json");
    g.exact(5, "map_uniform_prior", 0.5, estimation::map(&ber, &[0.0, 0.0, 1.0, 1.0, 0.0], &flat).unwrap().estimate);
    g.exact(5, "map_skewed_prior", 0.7, estimation::map(&ber, &[0.0, 0.0, 1.0, 0.0], &skew).unwrap().estimate);
    // Var(x̄) = θ/n for Poisson
    g.exact(5, "poisson_efficiency", 1.0, estimation::efficiency(&pois, 3.0 / 25.0, 3.0, 25).unwrap());
    let plan = ExperimentPlan::new(Distribution::uniform(0.0, 1.0).unwrap(), vec![10], 4000, 2024).unwrap();
    let risk = estimator_risk(&plan, |x| x.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0).unwrap();
    let r = &risk[0];
    let z = (r.mean_estimate - 10.0 / 11.0) / r.standard_error;
    g.check(5, "uniform_max_risk", z.abs() <= 3.0, format!("mean {:.5}, {z:.3} SE from 10/11", r.mean_estimate));
}

fn criterion_6(g: &mut Gate) {
    let zoo = common::univariate_zoo();
    let cauchy = Distribution::cauchy();
    for d in &zoo {
        g.within(6, &format!("normalization_{}", d.name()), common::normalization_error(d), if d.is_discrete() { 1e-12 } else { 1e-9 });
    }
    g.within(6, "normalization_cauchy", common::normalization_error(&cauchy), 1e-9);
    for d in zoo.iter().chain(std::iter::once(&cauchy)) {
        if d.is_discrete() {
            let m = common::discrete_quantile_margin(d);
            g.check(6, &format!("cdf_quantile_{}", d.name()), m >= 0.0, format!("min cdf(q(u)) − u = {m:.3e} ≥ 0"));
        } else {
            g.within(6, &format!("quantile_cdf_{}", d.name()), common::quantile_cdf_error(d), 1e-9);
        }
    }
    for (i, d) in zoo.iter().enumerate() {
        let (zm, zv) = common::moment_z_scores(d, 1_000_000, 100 + i as u64);
        let detail = format!("mean {zm:.2} SE, variance {zv:.2} SE (limit 4)");
        g.check(6, &format!("moments_mc_{}", d.name()), zm.abs() < 4.0 && zv.abs() < 4.0, detail);
    }

    let u = Density::from_distribution(&Distribution::uniform(0.0, 1.0).unwrap()).unwrap();
    let tri = sum_pdf(&u, &u).unwrap();
    let err = common::grid(0.0, 2.0, 400)
        .map(|x| (tri.eval(x) - if x <= 1.0 { x } else { 2.0 - x }).abs())
        .fold(0.0, f64::max);
    g.within(6, "triangle_max_error", err, 1e-6);
    let prod = product_pdf(&u, &u).unwrap();
    let err = common::grid(0.01, 1.0, 396).map(|z| (prod.eval(z) + z.ln()).abs()).fold(0.0, f64::max);
    g.within(6, "product_max_error", err, 1e-5);
    let abs = derived_pmf_of(&Distribution::discrete_uniform(-4, 4).unwrap(), |x| Some(x.abs())).unwrap();
    let want = PmfTable::from_pairs((0..=4).map(|k| (k as f64, if k == 0 { 1.0 / 9.0 } else { 2.0 / 9.0 }))).unwrap();
    g.check(6, "abs_uniform_pmf", abs == want, format!("{:?}", abs.probs()));
}

fn normal_rows(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let z = Distribution::std_normal().sample(n * d, seed).unwrap();
    z.values().chunks(d).map(<[f64]>::to_vec).collect()
}

fn criterion_7(g: &mut Gate) {
    let rows = normal_rows(40, 3, 11);
    let y: Vec<f64> = rows.iter().map(|r| r[0] - 2.0 * r[1] + 0.5 * r[2]).collect();
    let lambda = 0.05;
    let w = ridge_primal(&rows, &y, lambda).unwrap();
    let dual = kernel_ridge_fit(&rows, &y, KernelSpec { kernel: Kernel::Linear, lambda }).unwrap();
    let mut err: f64 = 0.0;
    for (j, wj) in w.iter().enumerate() {
        let from_dual: f64 = rows.iter().zip(&dual.alpha).map(|(r, a)| a * r[j]).sum();
        err = err.max((wj - from_dual).abs());
    }
    g.within(7, "primal_dual_ridge", err, 1e-8);

    let labels: Vec<f64> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| if r[0] + 0.7 * r[1] + 0.3 * (i as f64).sin() > 0.0 { 1.0 } else { -1.0 })
        .collect();
    let mut worst: f64 = 0.0;
    for kernel in [None, Some(Kernel::Gaussian { width: 1.5 })] {
        let prob = LogisticProblem::new(&rows, &labels, 0.01, kernel).unwrap();
        let trials = normal_rows(10, prob.dim(), 12);
        for w in trials {
            let grad = prob.gradient(&w);
            let h = 1e-5;
            let fd: Vec<f64> = (0..w.len())
                .map(|k| {
                    let (mut a, mut b) = (w.clone(), w.clone());
                    a[k] += h;
                    b[k] -= h;
                    (prob.objective(&a) - prob.objective(&b)) / (2.0 * h)
                })
                .collect();
            let num: f64 = grad.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let den: f64 = grad.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
            worst = worst.max(num / den);
        }
    }
    g.within(7, "irls_gradient_vs_fd", worst, 1e-6);

    let mut monotone = true;
    for kernel in [None, Some(Kernel::Gaussian { width: 1.5 })] {
        let fit = logistic_fit_irls(&rows, &labels, 0.01, kernel).unwrap();
        monotone &= fit.objective_trace.windows(2).all(|p| p[1] <= p[0]);
    }
    g.check(7, "irls_objective_monotone", monotone, "objective never increases across accepted steps".into());

    let mut sig: f64 = 0.0;
    for u in common::grid(-30.0, 30.0, 6000) {
        let s = sigmoid(u);
        sig = sig
            .max((sigmoid(-u) - (1.0 - s)).abs())
            .max((s * sigmoid(-u) - (sigmoid(u + 1e-6) - sigmoid(u - 1e-6)) / 2e-6).abs().min(
                (s * sigmoid(-u) - s * (1.0 - s)).abs(),
            ))
            .max((logistic_loss_derivative(u) + sigmoid(-u)).abs());
    }
    g.within(7, "sigma_identities", sig, 1e-12);

    let x = DesignMatrix::from_columns(&[rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect()], &["a", "b"], true).unwrap();
    let responses: Vec<Vec<f64>> = (0..3).map(|k| rows.iter().map(|r| r[2] * k as f64 + r[0] - r[1] * r[1]).collect()).collect();
    let cols = mmlm_fit(&x, &responses).unwrap();
    let (n, p, m) = (x.nrows(), x.ncols(), responses.len());
    let mut big = DMatrix::zeros(n * m, p * m);
    for b in 0..m {
        big.view_mut((b * n, b * p), (n, p)).copy_from(x.matrix());
    }
    let stacked = DVector::from_iterator(n * m, responses.iter().flatten().copied());
    let theta = big.clone().svd(true, true).solve(&stacked, 1e-14).unwrap();
    let err = (0..m)
        .flat_map(|b| (0..p).map(move |j| (b, j)))
        .map(|(b, j)| (cols[b][j] - theta[b * p + j]).abs())
        .fold(0.0, f64::max);
    g.within(7, "mmlm_vs_kronecker", err, 1e-10);
}

fn criterion_8(g: &mut Gate) {
    let t0 = Instant::now();
    let plan = ExperimentPlan::new(Distribution::uniform(0.0, 1.0).unwrap(), vec![30], 2000, 8).unwrap();
    let ks = clt_experiment(&plan).unwrap()[0].ks;
    g.within(8, "uniform_n30_ks", ks, 0.05);
    let r = 2000usize;
    let plan = ExperimentPlan::new(Distribution::bernoulli(0.5).unwrap(), vec![5, 20, 80], r, 8).unwrap();
    for row in clt_experiment(&plan).unwrap() {
        // Bernoulli(1/2): E|X − μ|³ = 1/8, σ² = 1/4
        let be = berry_esseen_error(0.125, 0.25, row.n as u64).unwrap();
        let slack = 3.0 / (r as f64).sqrt();
        g.check(
            8,
            &format!("berry_esseen_n{}", row.n),
            row.ks <= be + slack,
            format!("ks {:.4} ≤ bound {be:.4} + slack {slack:.4}", row.ks),
        );
    }
    g.within(8, "runtime_s", t0.elapsed().as_secs_f64(), 30.0);
}

fn criterion_9(g: &mut Gate) {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_statkit"))
            .args(["reproduce", "--all", "--seed", "0"])
            .output()
            .unwrap();
        out.stdout
    };
    let (a, b) = (run(), run());
    g.check(9, "reproduce_byte_identical", !a.is_empty() && a == b, format!("{} bytes", a.len()));
}

#[test]
fn acceptance() {
    let mut g = Gate::default();
    criterion_1(&mut g);
    criterion_2(&mut g);
    criterion_3(&mut g);
    criterion_4(&mut g);
    criterion_5(&mut g);
    criterion_6(&mut g);
    criterion_7(&mut g);
    criterion_8(&mut g);
    criterion_9(&mut g);

    let failed: Vec<&str> = g.lines.iter().filter(|(_, p)| !p).map(|(k, _)| k.as_str()).collect();
    let unexpected: Vec<&str> = failed.iter().copied().filter(|k| !KNOWN_UNATTAINABLE.contains(k)).collect();
    println!(
        "acceptance: {} checks, {} passed, {} failed ({} known unattainable)",
        g.lines.len(),
        g.lines.len() - failed.len(),
        failed.len(),
        failed.len() - unexpected.len()
    );
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}
