//! Seeded simulation: LLN tables, CLT distances and estimator risk.
//!
//! Every replicate has its own stream, so results do not depend on the
//! number of worker threads and adding replicates keeps earlier ones.

use statkit::concentration::berry_esseen_error;
use statkit::montecarlo::{clt_experiment, estimator_risk, lln_experiment, ExperimentPlan};
use statkit::{Distribution, Result};

fn main() -> Result<()> {
    let plan = ExperimentPlan::new(Distribution::bernoulli(0.5)?, vec![5, 20, 80, 320], 2000, 42)?;
    for row in lln_experiment(&plan, &[0.05])? {
        println!("n={:4} median |mean - 1/2| = {:.4}, P(> 0.05) = {:.3}", row.n, row.median, row.exceedance[0].1);
    }
    for row in clt_experiment(&plan)? {
        let be = berry_esseen_error(0.125, 0.25, row.n as u64)?;
        println!("n={:4} KS = {:.4} (Berry-Esseen {:.4})", row.n, row.ks, be);
    }

    let unif = ExperimentPlan::new(Distribution::uniform(0.0, 1.0)?, vec![10, 100], 4000, 7)?;
    let max = estimator_risk(&unif, |x| x.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0)?;
    let mom = estimator_risk(&unif, |x| 2.0 * x.iter().sum::<f64>() / x.len() as f64, 1.0)?;
    for (a, b) in max.iter().zip(&mom) {
        println!("n={:3} max: bias {:+.4} mse {:.5} | 2*mean: bias {:+.4} mse {:.5}", a.n, a.bias, a.mse, b.bias, b.mse);
    }
    Ok(())
}
