//! Golden reference values recomputed end to end, for `reproduce --all`.
//!
//! Each check compares an observed number with a reference value under an
//! absolute tolerance. A few reference values are inconsistent with their own
//! inputs; those rows fail by design and carry a note saying why.

use serde::{Deserialize, Serialize};

use crate::concentration::{chebyshev_bound, clt_sample_size, markov_bound};
use crate::distributions::Distribution;
use crate::error::Result;
use crate::estimation::{self, ParametricFamily, PriorSpec};
use crate::inference::{ci_mean_clt, p_value_binomial_tail, z_test_proportion, CiInput, CiMode, Side};
use crate::io::Table;
use crate::joint::{bayes_update, build_joint_from_conditional, total_probability, Axis, BivariateNormalStd, JointPmfTable};
use crate::linmodels::{
    basis_expand, logistic_fit_irls, ols_fit, sigmoid, sinusoidal_synthetic, slope_t_interval, sulm_moment_form, Basis,
    DesignMatrix, SulmMoments,
};
use crate::montecarlo::{estimator_risk, sample_mean, sample_stddev, sample_variance, ExperimentPlan, VarianceDivisor};
use crate::pmf::PmfTable;
use crate::special::{std_normal_quantile, std_normal_sf};
use crate::transform::{derived_pdf, derived_pmf_of, max_cdf, product_pdf, sum_pdf, Density, MonotonePiece};

pub const STUDENTS_CSV: &str = include_str!("../../../fixtures/students.csv");
pub const BIVARIATE12_CSV: &str = include_str!("../../../fixtures/bivariate12.csv");
pub const SALARY10_CSV: &str = include_str!("../../../fixtures/salary10.csv");
pub const DICE_PAIR_CSV: &str = include_str!("../../../fixtures/dice_pair.csv");
pub const DICE_X_TOTAL_CSV: &str = include_str!("../../../fixtures/dice_x_total.csv");
pub const PRIOR_UNIFORM_JSON: &str = include_str!("../../../fixtures/prior_uniform.json");
pub const PRIOR_SKEWED_JSON: &str = include_str!("../../../fixtures/prior_skewed.json");

/// Sample size of the seeded sinusoidal example.
pub const SINUSOIDAL_N: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub id: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<GoldenCheck>,
}

impl GoldenTable {
    /// Fixed-width text table, one line per check.
    pub fn render(&self) -> String {
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(5);
        let mut out = format!("{:<w$}  {:>22}  {:>22}  {:>9}  result\n", "check", "expected", "observed", "tol");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<w$}  {:>22.12e}  {:>22.12e}  {:>9.1e}  {}{}\n",
                c.id,
                c.expected,
                c.observed,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" },
                c.note.as_ref().map(|n| format!("  ({n})")).unwrap_or_default()
            ));
        }
        out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
        out
    }
}

#[derive(Default)]
struct Checks(Vec<GoldenCheck>);

impl Checks {
    fn add(&mut self, id: &str, expected: f64, observed: f64, tolerance: f64) -> &mut Self {
        let pass = (observed - expected).abs() <= tolerance || (tolerance == 0.0 && observed == expected);
        self.0.push(GoldenCheck {
            id: id.to_string(),
            expected,
            observed,
            tolerance,
            pass,
            note: None,
        });
        self
    }

    fn note(&mut self, text: &str) {
        if let Some(c) = self.0.last_mut() {
            c.note = Some(text.to_string());
        }
    }
}

/// Runs every golden check. `seed` drives the randomized ones.
pub fn run_all(seed: u64) -> Result<GoldenTable> {
    let mut c = Checks::default();
    distributions(&mut c)?;
    transforms(&mut c)?;
    joint(&mut c)?;
    bounds(&mut c)?;
    simulation(&mut c, seed)?;
    estimation(&mut c)?;
    inference(&mut c)?;
    regression(&mut c, seed)?;
    let passed = c.0.iter().filter(|g| g.pass).count();
    Ok(GoldenTable {
        seed,
        passed,
        failed: c.0.len() - passed,
        checks: c.0,
    })
}

fn distributions(c: &mut Checks) -> Result<()> {
    c.add("bernoulli_0.25_pmf_at_1", 0.25, Distribution::bernoulli(0.25)?.mass_or_density(1.0)?, 0.0);
    let geo = Distribution::geometric(1.0 / 6.0)?;
    let t = geo.pmf_table()?;
    c.add("geometric_1/6_mean_by_pmf_sum", 6.0, t.mean(), 1e-8);
    let m = geo.moments()?;
    c.add("geometric_1/6_mean", 6.0, m.mean, 1e-12);
    c.add("geometric_1/6_variance", 30.0, m.variance, 1e-10);
    let b = Distribution::bernoulli(0.3)?.moments()?;
    c.add("bernoulli_0.3_variance", 0.3 * 0.7, b.variance, 1e-15);
    let multi = Distribution::multinomial(12, vec![1.0 / 6.0; 6])?;
    c.add("twelve_dice_each_face_twice", 0.0034, multi.mass_or_density_vec(&[2.0; 6])?, 5e-5);
    let z = Distribution::std_normal();
    c.add("normal_two_sided_tail_3", 0.0026, 2.0 * z.sf(3.0)?, 2e-4);
    let lap = Distribution::laplace(0.0, 1.0)?;
    c.add("laplace_two_sided_tail_3", 0.0144, lap.cdf(-3.0)? + lap.sf(3.0)?, 5e-5);
    c.add("exponential_0.01_survival_100", 0.367, Distribution::exponential(0.01)?.sf(100.0)?, 1e-3);
    c.add("normal_quantile_0.975", 1.96, z.quantile(0.975)?, 5e-4);
    c.add("normal_quantile_0.995", 2.576, z.quantile(0.995)?, 5e-4);
    Ok(())
}

fn transforms(c: &mut Checks) -> Result<()> {
    let abs = derived_pmf_of(&Distribution::discrete_uniform(-4, 4)?, |x| Some(x.abs()))?;
    c.add("abs_uniform_-4..4_p0", 1.0 / 9.0, abs.prob(0.0), 1e-15);
    c.add("abs_uniform_-4..4_p3", 2.0 / 9.0, abs.prob(3.0), 1e-15);
    let sq = derived_pmf_of(&Distribution::discrete_uniform(-2, 2)?, |x| Some(x * x))?;
    c.add("square_uniform_-2..2_p4", 0.4, sq.prob(4.0), 1e-15);

    let inf = f64::INFINITY;
    let chi = derived_pdf(
        &Distribution::std_normal(),
        vec![
            MonotonePiece::new((-inf, 0.0), (0.0, inf), |y: f64| -y.sqrt(), |y: f64| -0.5 / y.sqrt())?,
            MonotonePiece::new((0.0, inf), (0.0, inf), |y: f64| y.sqrt(), |y: f64| 0.5 / y.sqrt())?,
        ],
    )?;
    let pi2 = 2.0 * std::f64::consts::PI;
    c.add("normal_squared_density_at_1", (-0.5f64).exp() / pi2.sqrt(), chi.eval(1.0), 1e-12);
    let lognormal = derived_pdf(
        &Distribution::std_normal(),
        vec![MonotonePiece::new((-inf, inf), (0.0, inf), |y: f64| y.ln(), |y: f64| 1.0 / y)?],
    )?;
    let y = 2.0f64;
    c.add("exp_normal_density_at_2", (-(y.ln().powi(2)) / 2.0).exp() / (pi2.sqrt() * y), lognormal.eval(y), 1e-12);
    let root = derived_pdf(
        &Distribution::uniform(0.0, 1.0)?,
        vec![MonotonePiece::new((0.0, 1.0), (0.0, 1.0), |y: f64| y * y, |y: f64| 2.0 * y)?],
    )?;
    c.add("sqrt_uniform_density_at_0.7", 1.4, root.eval(0.7), 1e-12);

    let u = Density::from_distribution(&Distribution::uniform(0.0, 1.0)?)?;
    let tri = sum_pdf(&u, &u)?;
    c.add("uniform_sum_density_at_0.5", 0.5, tri.eval(0.5), 1e-6);
    c.add("uniform_sum_density_at_1.5", 0.5, tri.eval(1.5), 1e-6);
    let prod = product_pdf(&u, &u)?;
    c.add("uniform_product_density_at_0.3", -(0.3f64.ln()), prod.eval(0.3), 1e-5);
    let mx = max_cdf(&Distribution::uniform(0.0, 1.0)?, 10)?;
    c.add("uniform_max_of_10_mean", 10.0 / 11.0, mx.mean()?, 1e-8);
    Ok(())
}

fn joint(c: &mut Checks) -> Result<()> {
    let dice = JointPmfTable::from_triples_csv(DICE_PAIR_CSV.as_bytes())?;
    c.add("dice_marginal_x_at_4", 1.0 / 6.0, dice.marginal(Axis::X)?.prob(4.0), 1e-12);
    c.add("dice_y_minus_x_at_least_2", 5.0 / 18.0, dice.event_probability(|x, y| y - x >= 2.0), 1e-12);
    c.add("dice_same_face", 1.0 / 6.0, dice.event_probability(|x, y| x == y), 1e-12);

    let xt = JointPmfTable::from_dense_csv(DICE_X_TOTAL_CSV.as_bytes())?;
    let pt = xt.marginal(Axis::Y)?;
    c.add("dice_total_marginal_at_7", 6.0 / 36.0, pt.prob(7.0), 1e-12);
    c.add("dice_total_marginal_at_11", 2.0 / 36.0, pt.prob(11.0), 1e-12);

    // (total, parity) with parity 0 for even totals
    let parity = build_joint_from_conditional(&pt, |t| Ok(PmfTable::point_mass(t % 2.0)))?;
    let even = parity.conditional(Axis::Y, 0.0)?;
    let odd = parity.conditional(Axis::Y, 1.0)?;
    c.add("dice_total_given_even_at_2", 1.0 / 18.0, even.prob(2.0), 1e-12);
    c.add("dice_total_given_even_at_6", 5.0 / 18.0, even.prob(6.0), 1e-12);
    c.add("dice_total_given_odd_at_7", 6.0 / 18.0, odd.prob(7.0), 1e-12);

    let may_prior = PmfTable::uniform(&[0.0, 1.0, 2.0])?;
    let may = build_joint_from_conditional(&may_prior, |x| Distribution::binomial(x as u64, 0.25)?.pmf_table())?;
    c.add("may_p_0_0", 1.0 / 3.0, may.prob(0.0, 0.0), 1e-15);
    c.add("may_p_2_2", 1.0 / 48.0, may.prob(2.0, 2.0), 1e-15);

    let geo = Distribution::geometric(0.25)?.pmf_table()?;
    let coin = build_joint_from_conditional(&geo, |x| Distribution::binomial(x as u64, 0.25)?.pmf_table())?;
    let want = 3.0 * 0.25 * 0.75f64.powi(2) * 0.75f64.powi(2) * 0.25;
    c.add("geometric_then_binomial_p_3_1", want, coin.prob(3.0, 1.0), 1e-15);

    let drug = bayes_update(&PmfTable::from_pairs([(1.0, 0.02), (0.0, 0.98)])?, |d| if d == 1.0 { 0.95 } else { 0.01 })?;
    c.add("drug_test_posterior", 0.66, drug.posterior.prob(1.0), 5e-3);
    let airport = bayes_update(&PmfTable::from_pairs([(1.0, 1e-5), (0.0, 1.0 - 1e-5)])?, |d| if d == 1.0 { 0.98 } else { 0.001 })?;
    c.add("airport_posterior", 0.01, airport.posterior.prob(1.0), 5e-3);
    let exam = bayes_update(&PmfTable::from_pairs([(0.0, 0.3), (1.0, 0.2), (2.0, 0.5)])?, |g| [0.9, 0.2, 0.6][g as usize])?;
    c.add("oral_exam_evidence", 0.61, exam.evidence, 1e-12);
    c.add("oral_exam_posterior_a", 0.442, exam.posterior.prob(0.0), 1e-3);
    c.note("reference value is rounded; exact 27/61");
    c.add("three_machines_defect", 0.117, total_probability(&[0.6, 0.3, 0.1], &[0.07, 0.15, 0.30])?, 1e-12);
    let chained: f64 = (0..3).map(|k| (95.0 - k as f64) / (100.0 - k as f64)).product();
    c.add("factory_no_defect_chain", 0.8560, chained, 5e-5);
    c.add(
        "factory_no_defect_hypergeometric",
        chained,
        Distribution::hypergeometric(100, 5, 3)?.mass_or_density(0.0)?,
        1e-12,
    );

    let sq = JointPmfTable::from_fn(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0], |x, y| if x * x == y { 1.0 / 3.0 } else { 0.0 })?;
    c.add("cov_x_x_squared", 0.0, sq.expectation_ops().covariance, 1e-15);

    // two-block partition {X = 1}, {X > 1}
    let p = 1.0 / 6.0;
    let g = Distribution::geometric(p)?.pmf_table()?;
    let rest = 1.0 - p;
    let tail1: f64 = g.iter().filter(|(x, _)| *x > 1.0).map(|(x, q)| x * q).sum::<f64>() / rest;
    let tail2: f64 = g.iter().filter(|(x, _)| *x > 1.0).map(|(x, q)| x * x * q).sum::<f64>() / rest;
    c.add("geometric_two_block_mean", 6.0, p * 1.0 + rest * tail1, 1e-8);
    c.add("geometric_two_block_second_moment", 66.0, p * 1.0 + rest * tail2, 1e-7);

    c.add("spaghetti_loops_3", 1.0 + 1.0 / 3.0 + 1.0 / 5.0, spaghetti_loops(3)?.mean(), 1e-12);
    c.add("stick_breaking_mean", 0.25, stick_breaking_mean(1.0, 1e-3)?, 1e-3);

    let cond = BivariateNormalStd::new(0.3)?.conditional_rescaled(2.5, 69.0, 2.0)?;
    let m = cond.moments()?;
    c.add("father_son_conditional_mean", 70.5, m.mean, 1e-12);
    c.add("father_son_conditional_variance", 3.64, m.variance, 1e-12);
    Ok(())
}

/// Law of the loop count after tying the ends of `n` strands.
///
/// With k strands left, the first end joins its own strand with probability
/// 1/(2k − 1), closing a loop; the count is built as a chain of joint tables.
pub fn spaghetti_loops(n: u64) -> Result<PmfTable> {
    let mut law = PmfTable::point_mass(0.0);
    for k in 1..=n {
        let q = 1.0 / (2 * k - 1) as f64;
        let step = build_joint_from_conditional(&law, |l| {
            if q == 1.0 {
                Ok(PmfTable::point_mass(l + 1.0))
            } else {
                PmfTable::from_pairs([(l, 1.0 - q), (l + 1.0, q)])
            }
        })?;
        law = step.marginal(Axis::Y)?;
    }
    Ok(law)
}

/// E(X) for Y ~ Unif(0, ℓ) and X | Y ~ Unif(0, Y), both on a midpoint grid of step h.
pub fn stick_breaking_mean(length: f64, h: f64) -> Result<f64> {
    let k = (length / h).round() as usize;
    let grid: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) * h).collect();
    let prior = PmfTable::uniform(&grid)?;
    let joint = build_joint_from_conditional(&prior, |y| {
        let m = ((y / h) as usize).min(k - 1) + 1;
        PmfTable::uniform(&grid[..m])
    })?;
    Ok(joint.marginal(Axis::Y)?.mean())
}

fn bounds(c: &mut Checks) -> Result<()> {
    let n = 1000f64;
    let a = n * n.ln();
    c.add("quicksort_markov", 0.1, markov_bound(2.0 * a, 20.0 * a)?, 0.0);
    c.add("weighted_coin_markov", 0.25, markov_bound(4.0, 16.0)?, 0.0);
    c.add("chebyshev_unit_variance_eps_3", 1.0 / 9.0, chebyshev_bound(1.0, 3.0, 1)?, 0.0);
    c.add("weighted_coin_chebyshev_halved", 0.011, chebyshev_bound(3.2, 12.0, 1)? / 2.0, 1e-3);
    c.add("weighted_coin_exact_tail", 1.38e-8, p_value_binomial_tail(20, 0.2, 16, Side::Greater)?, 2e-10);

    // 100 bags, each Unif[5, 50], total above 3000
    let bag = Distribution::uniform(5.0, 50.0)?.moments()?;
    let (mean, var) = (100.0 * bag.mean, 100.0 * bag.variance);
    let eps = 3000.0 - mean;
    c.add("bags_chebyshev_halved", 0.13, chebyshev_bound(var, eps, 1)? / 2.0, 1e-2);
    c.note("reference value is the halved bound 0.135 truncated");
    c.add("bags_clt_tail", 0.027, std_normal_sf(eps / var.sqrt()), 5e-4);
    c.add("sample_size_eps_0.01_alpha_0.05", 9604.0, clt_sample_size(0.01, 0.05, 0.25)? as f64, 0.0);
    Ok(())
}

fn simulation(c: &mut Checks, seed: u64) -> Result<()> {
    let xs = [18.0, 21.0, 17.0, 16.0, 24.0, 20.0];
    c.add("six_sample_mean", 19.33, sample_mean(&xs)?, 5e-3);
    c.add("six_sample_variance", 8.67, sample_variance(&xs, VarianceDivisor::Unbiased)?, 5e-3);
    c.add("six_sample_stddev", 2.94, sample_stddev(&xs)?, 5e-3);

    let plan = ExperimentPlan::new(Distribution::uniform(0.0, 1.0)?, vec![10], 4000, seed)?;
    let max = estimator_risk(&plan, |x| x.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0)?;
    let r = &max[0];
    c.add("uniform_max_risk_mean_in_se", 0.0, (r.mean_estimate - 10.0 / 11.0) / r.standard_error, 3.0);
    let mom = estimator_risk(&plan, |x| 2.0 * x.iter().sum::<f64>() / x.len() as f64, 1.0)?;
    let r = &mom[0];
    c.add("uniform_mom_bias_in_se", 0.0, r.bias / r.standard_error, 3.0);
    Ok(())
}

fn estimation(c: &mut Checks) -> Result<()> {
    let ber = ParametricFamily::Bernoulli;
    let pois = ParametricFamily::Poisson;
    let unif = ParametricFamily::UniformZeroTheta;
    c.add("bernoulli_log_likelihood_101", 0.125f64.ln(), estimation::log_likelihood(&ber, 0.5, &[1.0, 0.0, 1.0])?, 1e-15);
    let data = [3.0, 0.0, 2.0, 7.0];
    let closed = (-8.0f64).exp() * 2f64.powi(12) / (2.0 * 6.0 * 5040.0);
    c.add("poisson_likelihood_at_2", closed, estimation::log_likelihood(&pois, 2.0, &data)?.exp(), 1e-15);
    c.add("mle_hhhht", 0.8, estimation::mle(&ber, &[1.0, 1.0, 1.0, 1.0, 0.0])?.estimate, 0.0);
    c.add("uniform_mle_192", 9.0, estimation::mle(&unif, &[1.0, 9.0, 2.0])?.estimate, 0.0);
    c.add("uniform_mom_192", 8.0, estimation::mom(&unif, &[1.0, 9.0, 2.0])?.estimate, 0.0);
    c.add("poisson_mom_equals_mle", estimation::mle(&pois, &data)?.estimate, estimation::mom(&pois, &data)?.estimate, 0.0);
    let flat: PriorSpec = serde_json::from_str(PRIOR_UNIFORM_JSON)?;
    let skew: PriorSpec = serde_json::from_str(PRIOR_SKEWED_JSON)?;
    c.add("map_uniform_prior_00110", 0.5, estimation::map(&ber, &[0.0, 0.0, 1.0, 1.0, 0.0], &flat)?.estimate, 0.0);
    c.add("map_skewed_prior_0010", 0.7, estimation::map(&ber, &[0.0, 0.0, 1.0, 0.0], &skew)?.estimate, 0.0);
    let beta = PriorSpec::Beta { alpha: 9.0, beta: 3.0 };
    c.add("map_beta_9_3_no_data", 0.8, estimation::map(&ber, &[], &beta)?.estimate, 1e-15);
    c.add("poisson_fisher_theta_2_n_10", 5.0, estimation::fisher_information(&pois, 2.0, 10)?, 0.0);
    c.add("poisson_mean_efficiency", 1.0, estimation::efficiency(&pois, 2.0 / 10.0, 2.0, 10)?, 0.0);
    c.add("uniform_sufficient_statistic", 9.0, estimation::sufficient_statistic(&unif, &[1.0, 9.0, 2.0])?, 0.0);
    Ok(())
}

fn inference(c: &mut Checks) -> Result<()> {
    let prop = CiInput::Proportion { successes: 136, n: 400 };
    let plug = ci_mean_clt(prop.clone(), 0.01, CiMode::CltPlugin)?;
    c.add("plugin_ci_lower", 0.28, plug.lower, 5e-3);
    c.add("plugin_ci_upper", 0.40, plug.upper, 5e-3);
    let worst = ci_mean_clt(prop, 0.01, CiMode::CltWorstcaseQuarter)?;
    let why = "reference half-width 2.576·(1/4)/20 uses 1/4 for the standard deviation 1/2";
    c.add("worstcase_ci_lower", 0.307, worst.lower, 5e-3);
    c.note(why);
    c.add("worstcase_ci_upper", 0.372, worst.upper, 5e-3);
    c.note(why);
    c.add("binomial_tail_99_of_100", 101.0 * 2f64.powi(-100), p_value_binomial_tail(100, 0.5, 99, Side::Greater)?, 1e-31);
    let vote = z_test_proportion(137, 0.75, 131, Side::Greater, 0.01)?;
    c.add("voting_z_statistic", 5.42643, vote.statistic, 5e-3);
    c.note("reference z divides by a rounded standard error 0.038 instead of 0.0370");
    c.add("voting_rejects", 1.0, if vote.reject { 1.0 } else { 0.0 }, 0.0);
    c.add("normal_quantile_at_0.995_for_ci", 2.576, std_normal_quantile(0.995)?, 5e-4);
    Ok(())
}

fn regression(c: &mut Checks, seed: u64) -> Result<()> {
    let (ss, se) = (4.0, 1.0);
    let (_, slope) = sulm_moment_form(&SulmMoments { mean_x: 0.0, mean_y: 0.0, var_x: ss + se, cov_xy: ss })?;
    c.add("signal_plus_noise_slope", ss / (ss + se), slope, 1e-15);

    let t = Table::from_reader(STUDENTS_CSV.as_bytes())?;
    let d = DesignMatrix::from_columns(&[t.column("x")?.to_vec()], &["x"], true)?;
    let fit = ols_fit(&d, t.column("y")?)?;
    for (id, want, got) in [
        ("students_xtx_00", 18.0, fit.xtx[0][0]),
        ("students_xtx_01", 1045.0, fit.xtx[0][1]),
        ("students_xtx_11", 80199.0, fit.xtx[1][1]),
        ("students_xty_0", 1105.0, fit.xty[0]),
    ] {
        c.add(id, want, got, 0.0);
    }
    c.add("students_xty_1", 8195.0, fit.xty[1], 0.0);
    c.note("the fixture data give 81195; the reference drops a digit");
    c.add("students_slope", 0.8726, fit.coefficients[1], 5e-4);
    c.add("students_intercept", 10.74, fit.coefficients[0], 0.04);
    c.add("students_s", 13.8547, fit.s2.sqrt(), 5e-3);
    let ci = slope_t_interval(&fit, 1, 0.05)?;
    c.add("students_slope_t", 8.8025, ci.t, 5e-3);
    c.add("students_t_critical_16", 2.120, ci.t_critical, 5e-4);
    c.add("students_slope_ci_lower", 0.6624, ci.lower, 5e-3);
    c.add("students_slope_ci_upper", 1.0828, ci.upper, 5e-3);

    let t = Table::from_reader(BIVARIATE12_CSV.as_bytes())?;
    let d = DesignMatrix::from_columns(&[t.column("x1")?.to_vec(), t.column("x2")?.to_vec()], &["x1", "x2"], true)?;
    let fit = ols_fit(&d, t.column("y")?)?;
    let xtx = [[12.0, 52.0, 102.0], [52.0, 395.0, 536.0], [102.0, 536.0, 1004.0]];
    for i in 0..3 {
        for j in i..3 {
            c.add(&format!("bivariate_xtx_{i}{j}"), xtx[i][j], fit.xtx[i][j], 0.0);
            if (i, j) == (1, 1) {
                c.note("the fixture data give Σx1² = 296");
            }
        }
    }
    for (k, want) in [5.3754, 3.0118, -1.2855].into_iter().enumerate() {
        c.add(&format!("bivariate_theta_{k}"), want, fit.coefficients[k], 1e-3);
    }
    c.add("bivariate_s2", 2.829, fit.s2, 5e-3);
    let inv = [[0.97476, 0.24290, -0.22871], [0.24290, 0.16207, -0.11120], [-0.22871, -0.11120, 0.08360]];
    for i in 0..3 {
        for j in i..3 {
            c.add(&format!("bivariate_xtx_inv_{i}{j}"), inv[i][j], fit.xtx_inv[i][j], 5e-4);
        }
    }

    let (x, y) = sinusoidal_synthetic(SINUSOIDAL_N, seed)?;
    let fit = ols_fit(&basis_expand(&x, Basis::Sinusoidal(2))?, &y)?;
    let worst = fit.coefficients.iter().map(|b| (b - 1.0).abs()).fold(0.0, f64::max);
    c.add("sinusoidal_max_coefficient_error", 0.0, worst, 0.25);

    let t = Table::from_reader(SALARY10_CSV.as_bytes())?;
    let (pos, sal) = (t.column("position")?, t.column("salary")?);
    let why = "reference models are not the least-squares fits of the fixture";
    for (deg, want) in [
        (2u32, vec![2.25e5, -1.40e5, 2.09e4]),
        (4, vec![1.35e5, -1.43e5, 6.82e4, -1.16e4, 7.09e2]),
    ] {
        let fit = ols_fit(&basis_expand(pos, Basis::Polynomial(deg))?, sal)?;
        let rel = fit
            .coefficients
            .iter()
            .zip(&want)
            .map(|(b, w)| ((b - w) / w).abs())
            .fold(0.0, f64::max);
        c.add(&format!("salary_degree_{deg}_max_relative_error"), 0.0, rel, 0.01);
        c.note(why);
    }

    let rows: Vec<Vec<f64>> = [-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0].iter().map(|&v| vec![1.0, v]).collect();
    let labels: Vec<f64> = rows.iter().map(|r| r[1].signum()).collect();
    let lf = logistic_fit_irls(&rows, &labels, 0.1, None)?;
    c.add("logistic_boundary_in_gap", 0.0, -lf.weights[0] / lf.weights[1], 0.5);
    c.add("logistic_sigmoid_at_0", 0.5, sigmoid(0.0), 0.0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaghetti_three_strands() {
        let l = spaghetti_loops(3).unwrap();
        assert!((l.total() - 1.0).abs() < 1e-15);
        assert!((l.mean() - 23.0 / 15.0).abs() < 1e-15);
    }
}
