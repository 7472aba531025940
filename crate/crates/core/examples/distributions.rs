//! Evaluating, inverting and sampling distribution families.
//!
//! Run with `cargo run --example distributions`.

use statkit::distributions::{multivariate_hypergeometric_pmf, poisson_approx_binomial, total_variation};
use statkit::{Distribution, Result};

fn main() -> Result<()> {
    let z = Distribution::std_normal();
    println!("P(|Z| >= 3)        = {:.6}", z.cdf(-3.0)? + z.sf(3.0)?);
    println!("z_0.975            = {:.6}", z.quantile(0.975)?);

    let geo = Distribution::geometric(1.0 / 6.0)?;
    let m = geo.moments()?;
    println!("rolls until a six: mean {}, variance {}", m.mean, m.variance);

    // families round-trip through JSON
    let text = serde_json::to_string(&Distribution::gamma(2.5, 1.5)?)?;
    let back: Distribution = serde_json::from_str(&text)?;
    println!("{text} -> mean {:.4}", back.moments()?.mean);

    let dice = Distribution::multinomial(12, vec![1.0 / 6.0; 6])?;
    println!("12 dice, every face twice: {:.6}", dice.mass_or_density_vec(&[2.0; 6])?);
    println!("bridge hand 5-4-3-1:       {:.6}", multivariate_hypergeometric_pmf(&[13, 13, 13, 13], &[5, 4, 3, 1])?);

    for (n, p) in [(100, 0.01), (10, 0.5)] {
        let tv = total_variation(&Distribution::binomial(n, p)?, &poisson_approx_binomial(n, p)?)?;
        println!("Binomial({n}, {p}) vs Poisson({}): TV = {tv:.4}", n as f64 * p);
    }

    let s = Distribution::laplace(0.0, 1.0)?.sample(100_000, 7)?;
    println!("Laplace sample: mean {:.4}, variance {:.4}", s.mean()?, s.variance()?);

    match Distribution::cauchy().moments() {
        Ok(_) => unreachable!(),
        Err(e) => println!("Cauchy moments: {e}"),
    }
    Ok(())
}
