use proptest::prelude::*;
use statkit::joint::{build_joint_from_conditional, Axis, BivariateNormalStd, JointPmfTable};
use statkit::reproduce::spaghetti_loops;
use statkit::rng::StreamKey;
use statkit::{Distribution, PmfTable, StatError};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn joint_strategy() -> impl Strategy<Value = JointPmfTable> {
    (2usize..5, 2usize..5)
        .prop_flat_map(|(nx, ny)| (Just(nx), Just(ny), prop::collection::vec(0.0f64..1.0, nx * ny)))
        .prop_filter("needs positive mass", |(_, _, w)| w.iter().sum::<f64>() > 0.1)
        .prop_map(|(nx, ny, w)| {
            let total: f64 = w.iter().sum();
            let xs = (0..nx).map(|i| i as f64 - 1.0).collect();
            let ys = (0..ny).map(|j| 2.0 * j as f64).collect();
            JointPmfTable::new(xs, ys, w.iter().map(|v| v / total).collect()).unwrap()
        })
}

#[test]
fn dice_fixtures_agree() {
    let pair = JointPmfTable::from_triples_csv(std::fs::File::open(format!("{FIXTURES}/dice_pair.csv")).unwrap()).unwrap();
    let total = JointPmfTable::from_dense_csv(std::fs::File::open(format!("{FIXTURES}/dice_x_total.csv")).unwrap()).unwrap();
    let via_pair = build_joint_from_conditional(&pair.marginal(Axis::X).unwrap(), |x| {
        Ok(PmfTable::from_pairs((1..=6).map(|y| (x + y as f64, 1.0 / 6.0))).unwrap())
    })
    .unwrap();
    for (x, t, p) in total.cells() {
        assert!((via_pair.prob(x, t) - p).abs() < 1e-15);
    }
}

#[test]
fn geometric_then_binomial_matches_formula() {
    let (p, q) = (0.25, 0.4);
    let geo = Distribution::geometric(p).unwrap().pmf_table().unwrap();
    let j = build_joint_from_conditional(&geo, |x| Distribution::binomial(x as u64, q)?.pmf_table()).unwrap();
    for x in 1..=6u32 {
        for y in 0..=x {
            let c = (0..y).fold(1.0, |a, i| a * (x - i) as f64 / (i + 1) as f64);
            let want = (1.0 - p).powi(x as i32 - 1) * p * c * q.powi(y as i32) * (1.0 - q).powi((x - y) as i32);
            assert!((j.prob(x as f64, y as f64) - want).abs() < 1e-15, "({x}, {y})");
        }
    }
}

#[test]
fn spaghetti_matches_simulation() {
    let exact = spaghetti_loops(3).unwrap();
    let trials = 1_000_000u64;
    let mut counts = [0u64; 4];
    let mut us = StreamKey::new(17, 0).uniforms();
    for _ in 0..trials {
        let mut loops = 0;
        for k in (1..=3u32).rev() {
            // a free end is tied to one of the 2k − 1 other ends; one of them closes a loop
            if us.next_open01() < 1.0 / (2 * k - 1) as f64 {
                loops += 1;
            }
        }
        counts[loops] += 1;
    }
    for (loops, &c) in counts.iter().enumerate().skip(1) {
        let p = exact.prob(loops as f64);
        let freq = c as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * se, "{loops} loops: {freq} vs {p}");
    }
    assert!((exact.mean() - (1.0 + 1.0 / 3.0 + 1.0 / 5.0)).abs() < 1e-12);
}

#[test]
fn bivariate_normal_conditional() {
    let c = BivariateNormalStd::new(0.9).unwrap().conditional(-1.0).unwrap();
    let m = c.moments().unwrap();
    assert!((m.mean + 0.9).abs() < 1e-15);
    assert!((m.variance - 0.19).abs() < 1e-12);
    assert!(BivariateNormalStd::new(1.0).is_err());
}

#[test]
fn zero_mass_slice_is_an_error() {
    let j = JointPmfTable::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![0.5, 0.5, 0.0, 0.0]).unwrap();
    assert!(matches!(j.conditional(Axis::X, 1.0), Err(StatError::Conditioning(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn iterated_expectation(j in joint_strategy()) {
        let ex = j.marginal(Axis::X).unwrap().mean();
        let rows = j.conditional_expectation(Axis::Y).unwrap();
        let tower: f64 = rows.iter().map(|r| r.prob * r.mean).sum();
        prop_assert!((ex - tower).abs() < 1e-12);
    }

    #[test]
    fn total_variance(j in joint_strategy()) {
        let t = j.total_variance_check().unwrap();
        prop_assert!((t.var_x - t.var_of_conditional_mean - t.mean_of_conditional_variance).abs() < 1e-12);
    }

    #[test]
    fn marginal_times_conditional_rebuilds_joint(j in joint_strategy()) {
        let px = j.marginal(Axis::X).unwrap();
        for (x, p) in px.iter().filter(|c| c.1 > 0.0) {
            let cond = j.conditional(Axis::X, x).unwrap();
            for &y in j.ys() {
                prop_assert!((p * cond.prob(y) - j.prob(x, y)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn covariance_is_bilinear(j in joint_strategy(), a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let base = j.expectation_ops();
        let xs: Vec<f64> = j.xs().iter().map(|x| a * x + c).collect();
        let ys: Vec<f64> = j.ys().iter().map(|y| b * y - c).collect();
        // a, b may collapse the grid; only compare when the affine maps are injective
        prop_assume!(a.abs() > 1e-3 && b.abs() > 1e-3);
        let probs: Vec<f64> = j.xs().iter().flat_map(|&x| j.ys().iter().map(move |&y| (x, y))).map(|(x, y)| j.prob(x, y)).collect();
        let (mut xs_sorted, mut ys_sorted) = (xs.clone(), ys.clone());
        let flip_x = a < 0.0;
        let flip_y = b < 0.0;
        if flip_x { xs_sorted.reverse(); }
        if flip_y { ys_sorted.reverse(); }
        let (nx, ny) = (xs.len(), ys.len());
        let reordered: Vec<f64> = (0..nx)
            .flat_map(|i| (0..ny).map(move |k| (i, k)))
            .map(|(i, k)| {
                let ii = if flip_x { nx - 1 - i } else { i };
                let kk = if flip_y { ny - 1 - k } else { k };
                probs[ii * ny + kk]
            })
            .collect();
        let t = JointPmfTable::new(xs_sorted, ys_sorted, reordered).unwrap();
        prop_assert!((t.expectation_ops().covariance - a * b * base.covariance).abs() < 1e-10);
    }

    #[test]
    fn transpose_swaps_marginals(j in joint_strategy()) {
        let t = j.transpose();
        prop_assert_eq!(t.marginal(Axis::X).unwrap(), j.marginal(Axis::Y).unwrap());
        prop_assert_eq!(t.marginal(Axis::Y).unwrap(), j.marginal(Axis::X).unwrap());
    }
}
