//! Joint PMF tables: marginals, conditionals, Bayes updates and the tower rule.
//!
//! Reads the dice tables shipped under `fixtures/`.

use statkit::joint::{bayes_update, build_joint_from_conditional, total_probability, Axis, JointPmfTable};
use statkit::{Distribution, PmfTable, Result};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn main() -> Result<()> {
    let pair = JointPmfTable::from_triples_csv(std::fs::File::open(format!("{FIXTURES}/dice_pair.csv"))?)?;
    println!("P(Y - X >= 2) = {:.6}", pair.event_probability(|x, y| y - x >= 2.0));

    let total = JointPmfTable::from_dense_csv(std::fs::File::open(format!("{FIXTURES}/dice_x_total.csv"))?)?;
    let given = total.conditional(Axis::Y, 7.0)?;
    println!("first die given total 7: {:?}", given.probs());

    // X ~ Geometric(1/4) tosses, then Y ~ Binomial(X, 1/4) heads among them
    let geo = Distribution::geometric(0.25)?.pmf_table()?;
    let coin = build_joint_from_conditional(&geo, |x| Distribution::binomial(x as u64, 0.25)?.pmf_table())?;
    let tv = coin.total_variance_check()?;
    println!(
        "Var(X) = {:.4} = Var(E[X|Y]) {:.4} + E[Var(X|Y)] {:.4}",
        tv.var_x, tv.var_of_conditional_mean, tv.mean_of_conditional_variance
    );
    let m = coin.expectation_ops();
    println!("Cov(X, Y) = {:.4}, correlation {:.4}", m.covariance, m.correlation);

    let prior = PmfTable::from_pairs([(1.0, 0.02), (0.0, 0.98)])?;
    let post = bayes_update(&prior, |d| if d == 1.0 { 0.95 } else { 0.01 })?;
    println!("P(user | positive test) = {:.4}", post.posterior.prob(1.0));
    println!("P(defect) = {:.4}", total_probability(&[0.6, 0.3, 0.1], &[0.07, 0.15, 0.30])?);
    Ok(())
}
