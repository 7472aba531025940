//! Intervals and tests for a proportion.

use statkit::inference::{ci_mean_clt, p_value_binomial_tail, z_test_proportion, CiInput, CiMode, Side};
use statkit::Result;

fn main() -> Result<()> {
    let votes = CiInput::Proportion { successes: 136, n: 400 };
    for mode in [CiMode::CltPlugin, CiMode::CltWorstcaseQuarter] {
        let r = ci_mean_clt(votes.clone(), 0.01, mode)?;
        println!("{mode:?}: [{:.4}, {:.4}]", r.lower, r.upper);
    }
    println!("99 heads of 100: p = {:.3e}", p_value_binomial_tail(100, 0.5, 99, Side::Greater)?);
    println!("16 heads of 20 at p0=0.2: p = {:.3e}", p_value_binomial_tail(20, 0.2, 16, Side::Greater)?);
    let t = z_test_proportion(137, 0.75, 131, Side::Greater, 0.01)?;
    println!("z = {:.4}, p = {:.2e}, reject: {}", t.statistic, t.p_value, t.reject);
    Ok(())
}
