use proptest::prelude::*;
use statkit::inference::{ci_mean_clt, p_value_binomial_tail, z_test_proportion, CiInput, CiMode, Side};
use statkit::montecarlo::ExperimentPlan;
use statkit::special::std_normal_quantile;
use statkit::Distribution;

#[test]
fn plugin_interval_covers_at_nominal_rate() {
    let n = 400;
    let plan = ExperimentPlan::new(Distribution::bernoulli(0.3).unwrap(), vec![n], 2000, 77).unwrap();
    let hits = plan
        .map_replicates(n, |xs| {
            let r = ci_mean_clt(CiInput::Data(xs), 0.05, CiMode::CltPlugin)?;
            Ok(if r.lower <= 0.3 && 0.3 <= r.upper { 1.0 } else { 0.0 })
        })
        .unwrap();
    let coverage = hits.iter().sum::<f64>() / hits.len() as f64;
    assert!((0.93..=0.97).contains(&coverage), "coverage {coverage}");
}

#[test]
fn z_quantiles_to_three_decimals() {
    assert!((std_normal_quantile(0.975).unwrap() - 1.960).abs() < 5e-4);
    assert!((std_normal_quantile(0.995).unwrap() - 2.576).abs() < 5e-4);
}

#[test]
fn null_at_the_estimate() {
    let r = z_test_proportion(400, 0.34, 136, Side::TwoSided, 0.05).unwrap();
    assert!(r.statistic.abs() < 1e-12);
    assert_eq!(r.p_value, 1.0);
    assert!(!r.reject);
    assert_eq!(p_value_binomial_tail(30, 0.4, 0, Side::Greater).unwrap(), 1.0);
}

#[test]
fn worst_case_interval_is_wider() {
    let p = CiInput::Proportion { successes: 136, n: 400 };
    let a = ci_mean_clt(p.clone(), 0.01, CiMode::CltPlugin).unwrap();
    let b = ci_mean_clt(p, 0.01, CiMode::CltWorstcaseQuarter).unwrap();
    assert!(b.half_width > a.half_width);
    assert!((b.half_width - 2.5758293035489 * 0.5 / 20.0).abs() < 1e-9);
}

#[test]
fn two_sided_doubles_the_smaller_tail() {
    let up = p_value_binomial_tail(40, 0.5, 27, Side::Greater).unwrap();
    let two = p_value_binomial_tail(40, 0.5, 27, Side::TwoSided).unwrap();
    assert!((two - 2.0 * up).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn upper_tail_decreases_in_k(n in 1u64..300, p0 in 0.01f64..0.99) {
        let ps: Vec<f64> = (0..=n).map(|k| p_value_binomial_tail(n, p0, k, Side::Greater).unwrap()).collect();
        prop_assert!(ps.windows(2).all(|w| w[1] <= w[0]));
        let qs: Vec<f64> = (0..=n).map(|k| p_value_binomial_tail(n, p0, k, Side::Less).unwrap()).collect();
        prop_assert!(qs.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn width_scales_as_inverse_root_n(n in 1u64..100_000, var in 0.01f64..10.0, alpha in 0.001f64..0.5) {
        let w = |n: u64| ci_mean_clt(CiInput::Summary { mean: 0.0, variance: var, n }, alpha, CiMode::CltPlugin).unwrap().half_width;
        prop_assert!((w(n) / w(4 * n) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_and_z_agree_roughly_for_large_n(k in 400u64..600) {
        let n = 1000;
        let exact = p_value_binomial_tail(n, 0.5, k, Side::Greater).unwrap();
        let z = z_test_proportion(n, 0.5, k, Side::Greater, 0.05).unwrap().p_value;
        prop_assert!((exact - z).abs() < 0.02);
    }
}
