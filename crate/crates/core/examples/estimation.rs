//! Point estimates with likelihood diagnostics.

use statkit::estimation::{self, fisher_information, mle_numeric, ParametricFamily, PriorSpec};
use statkit::{PmfTable, Result};

fn main() -> Result<()> {
    let ber = ParametricFamily::Bernoulli;
    let r = estimation::mle(&ber, &[1.0, 1.0, 1.0, 1.0, 0.0])?;
    println!("HHHHT: MLE {} (se {:.4})", r.estimate, r.standard_error.unwrap_or(f64::NAN));

    let unif = ParametricFamily::UniformZeroTheta;
    let data = [1.0, 9.0, 2.0];
    println!("Unif(0, theta) on {data:?}: MLE {}, MoM {}", estimation::mle(&unif, &data)?.estimate, estimation::mom(&unif, &data)?.estimate);
    for note in estimation::mom(&unif, &data)?.notes {
        println!("  note: {note}");
    }

    let prior = PriorSpec::Discrete { table: PmfTable::from_pairs([(0.2, 0.10), (0.5, 0.01), (0.7, 0.89)])? };
    println!("MAP with skewed prior on 0010: {}", estimation::map(&ber, &[0.0, 0.0, 1.0, 0.0], &prior)?.estimate);
    let beta = PriorSpec::Beta { alpha: 9.0, beta: 3.0 };
    println!("MAP with Beta(9, 3) and no data: {}", estimation::map(&ber, &[], &beta)?.estimate);

    let pois = ParametricFamily::Poisson;
    let counts = [3.0, 0.0, 2.0, 7.0];
    let closed = estimation::mle(&pois, &counts)?.estimate;
    let numeric = mle_numeric(&pois, &counts)?.argmax;
    println!("Poisson MLE: closed {closed}, golden-section {numeric:.10}");
    println!("I(theta=2) for n=10: {}", fisher_information(&pois, 2.0, 10)?);
    Ok(())
}
