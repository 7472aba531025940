//! Derived distributions: push-forwards, monotone pieces, sums, products and maxima.

use statkit::transform::{
    derived_pdf, derived_pmf_of, max_cdf, product_pdf, ratio_pdf, sum_pdf, sum_pmf, Density, MonotonePiece,
};
use statkit::{Distribution, Result};

fn main() -> Result<()> {
    let abs = derived_pmf_of(&Distribution::discrete_uniform(-4, 4)?, |x| Some(x.abs()))?;
    println!("|X|, X ~ Unif{{-4..4}}: {:?}", abs.iter().collect::<Vec<_>>());

    let die = Distribution::discrete_uniform(1, 6)?.pmf_table()?;
    let total = sum_pmf(&die, &die)?;
    println!("P(two dice total 7) = {:.6}", total.prob(7.0));

    let inf = f64::INFINITY;
    let chi = derived_pdf(
        &Distribution::std_normal(),
        vec![
            MonotonePiece::new((-inf, 0.0), (0.0, inf), |y: f64| -y.sqrt(), |y: f64| -0.5 / y.sqrt())?,
            MonotonePiece::new((0.0, inf), (0.0, inf), |y: f64| y.sqrt(), |y: f64| 0.5 / y.sqrt())?,
        ],
    )?;
    println!("density of Z^2 at 1 = {:.6}", chi.eval(1.0));

    let u = Density::from_distribution(&Distribution::uniform(0.0, 1.0)?)?;
    let tri = sum_pdf(&u, &u)?;
    let prod = product_pdf(&u, &u)?;
    for x in [0.25, 0.5, 1.0, 1.5] {
        println!("U+U at {x}: {:.6}", tri.eval(x));
    }
    println!("U*U at 0.3: {:.6} (-ln 0.3 = {:.6})", prod.eval(0.3), -(0.3f64.ln()));

    let z = Density::from_distribution(&Distribution::std_normal())?;
    let ratio = ratio_pdf(&z, &z)?;
    println!("Z1/Z2 at 0: {:.6} (Cauchy 1/pi = {:.6})", ratio.eval(0.0), std::f64::consts::FRAC_1_PI);

    let mx = max_cdf(&Distribution::uniform(0.0, 1.0)?, 10)?;
    println!("E[max of 10 uniforms] = {:.6}", mx.mean()?);
    Ok(())
}
