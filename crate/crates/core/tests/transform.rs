mod common;

use proptest::prelude::*;
use statkit::transform::{
    derived_pdf, derived_pmf_of, max_cdf, product_pdf, ratio_pdf, sum_law, sum_pdf, sum_pmf, Density, Law,
    MonotonePiece,
};
use statkit::{Distribution, PmfTable};

fn density(d: Distribution) -> Density {
    Density::from_distribution(&d).unwrap()
}

#[test]
fn exponential_sum_is_erlang_two() {
    let e = density(Distribution::exponential(1.3).unwrap());
    let s = sum_pdf(&e, &e).unwrap();
    let erlang = Distribution::erlang(2, 1.3).unwrap();
    for x in common::grid(0.01, 8.0, 160) {
        assert!((s.eval(x) - erlang.mass_or_density(x).unwrap()).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn normal_ratio_is_cauchy() {
    let z = density(Distribution::std_normal());
    let r = ratio_pdf(&z, &z).unwrap();
    let c = Distribution::cauchy();
    for x in common::grid(-5.0, 5.0, 100) {
        assert!((r.eval(x) - c.mass_or_density(x).unwrap()).abs() < 1e-4, "x = {x}");
    }
}

#[test]
fn uniform_sum_and_product_shapes() {
    let u = density(Distribution::uniform(0.0, 1.0).unwrap());
    let tri = sum_pdf(&u, &u).unwrap();
    let prod = product_pdf(&u, &u).unwrap();
    for x in common::grid(0.0, 2.0, 200) {
        let want = if x <= 1.0 { x } else { 2.0 - x };
        assert!((tri.eval(x) - want).abs() < 1e-6);
    }
    for z in common::grid(0.01, 1.0, 99) {
        assert!((prod.eval(z) + z.ln()).abs() < 1e-5);
    }
    assert!((tri.total() - 1.0).abs() < 1e-8);
}

#[test]
fn max_of_two_exponentials() {
    let m = max_cdf(&Distribution::exponential(1.0).unwrap(), 2).unwrap();
    let want = (1.0 - (-1.0f64).exp()).powi(2);
    assert!((m.cdf(1.0).unwrap() - want).abs() < 1e-15);
    // E[max] = 1 + 1/2
    assert!((m.mean().unwrap() - 1.5).abs() < 1e-8);
}

#[test]
fn max_of_two_dice() {
    let m = max_cdf(&Distribution::discrete_uniform(1, 6).unwrap(), 2).unwrap();
    for k in 1..=6 {
        let want = (2 * k - 1) as f64 / 36.0;
        assert!((m.mass_or_density(k as f64).unwrap() - want).abs() < 1e-15);
    }
    assert!(m.mass_or_density(2.5).is_err());
    assert_eq!(m.mass_or_density(7.0).unwrap(), 0.0);
}

#[test]
fn poisson_parity_matches_series() {
    for lambda in [0.3, 2.0, 7.5] {
        let parity = derived_pmf_of(&Distribution::poisson(lambda).unwrap(), |x| Some(x % 2.0)).unwrap();
        let even = 0.5 * (1.0 + (-2.0 * lambda).exp());
        assert!((parity.prob(0.0) - even).abs() < 1e-12, "lambda {lambda}");
    }
}

#[test]
fn dice_total_matches_brute_force() {
    let die = Distribution::discrete_uniform(1, 6).unwrap().pmf_table().unwrap();
    let total = sum_pmf(&die, &die).unwrap();
    for t in 2..=12 {
        let ways = (1..=6).flat_map(|a| (1..=6).map(move |b| a + b)).filter(|&s| s == t).count();
        assert!((total.prob(t as f64) - ways as f64 / 36.0).abs() < 1e-15);
    }
}

#[test]
fn abs_of_symmetric_uniform_is_exact() {
    let t = derived_pmf_of(&Distribution::discrete_uniform(-4, 4).unwrap(), |x| Some(x.abs())).unwrap();
    assert_eq!(t.values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
    assert_eq!(t.prob(0.0), 1.0 / 9.0);
    for k in 1..=4 {
        assert_eq!(t.prob(k as f64), 2.0 / 9.0);
    }
}

#[test]
fn square_of_normal_is_chi_square_one() {
    let inf = f64::INFINITY;
    let y = derived_pdf(
        &Distribution::std_normal(),
        vec![
            MonotonePiece::new((-inf, 0.0), (0.0, inf), |y: f64| -y.sqrt(), |y: f64| -0.5 / y.sqrt()).unwrap(),
            MonotonePiece::new((0.0, inf), (0.0, inf), |y: f64| y.sqrt(), |y: f64| 0.5 / y.sqrt()).unwrap(),
        ],
    )
    .unwrap();
    let chi = Distribution::chi_square(1.0).unwrap();
    for x in common::grid(0.05, 6.0, 60) {
        assert!((y.eval(x) - chi.mass_or_density(x).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn adding_a_constant_shifts_exactly() {
    let u = Law::Density(density(Distribution::uniform(0.0, 1.0).unwrap()));
    let Law::Density(shifted) = sum_law(&u, &Law::constant(2.0)).unwrap() else { panic!("expected a density") };
    assert_eq!(shifted.support(), (2.0, 3.0));
    assert_eq!(shifted.eval(2.5), 1.0);
    let Law::Atoms(a) = sum_law(&Law::constant(1.0), &Law::constant(2.5)).unwrap() else { panic!("expected atoms") };
    assert_eq!(a, PmfTable::point_mass(3.5));
}

fn small_pmf() -> impl Strategy<Value = PmfTable> {
    prop::collection::vec((-5i32..6, 0.01f64..1.0), 1..6)
        .prop_map(|v| PmfTable::from_pairs(v.into_iter().map(|(x, p)| (x as f64, p))).unwrap().normalized().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_pmf_is_commutative_and_normalized(a in small_pmf(), b in small_pmf()) {
        let ab = sum_pmf(&a, &b).unwrap();
        let ba = sum_pmf(&b, &a).unwrap();
        prop_assert_eq!(ab.values(), ba.values());
        for (p, q) in ab.probs().iter().zip(ba.probs()) {
            prop_assert!((p - q).abs() < 1e-15);
        }
        prop_assert!((ab.total() - 1.0).abs() < 1e-12);
        prop_assert!((ab.mean() - a.mean() - b.mean()).abs() < 1e-12);
        prop_assert!((ab.variance() - a.variance() - b.variance()).abs() < 1e-10);
    }

    #[test]
    fn point_mass_zero_is_identity(a in small_pmf()) {
        prop_assert_eq!(sum_pmf(&a, &PmfTable::point_mass(0.0)).unwrap(), a);
    }

    #[test]
    fn derived_pmf_preserves_mass(a in small_pmf(), k in 1i32..4) {
        let t = statkit::transform::derived_pmf(
            &a,
            &statkit::transform::DiscreteMap::from_fn(a.values(), |x| Some((x * x) % k as f64)).unwrap(),
        )
        .unwrap();
        prop_assert!((t.total() - 1.0).abs() < 1e-12);
        prop_assert!(t.values().iter().all(|v| *v >= 0.0 && *v < k as f64));
    }
}
