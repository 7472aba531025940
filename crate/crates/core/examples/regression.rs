//! Least squares with diagnostics, basis expansions and the t interval.

use statkit::io::Table;
use statkit::linmodels::{basis_expand, ols_fit, sinusoidal_synthetic, slope_t_interval, Basis, DesignMatrix};
use statkit::Result;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn main() -> Result<()> {
    let t = Table::from_path(format!("{FIXTURES}/students.csv").as_ref())?;
    let x = DesignMatrix::from_columns(&[t.column("x")?.to_vec()], &["x"], true)?;
    let fit = ols_fit(&x, t.column("y")?)?;
    println!("X'X = {:?}", fit.xtx);
    println!("X'y = {:?}", fit.xty);
    println!("theta = {:?}, s = {:.4}, R^2 = {:.4}", fit.coefficients, fit.s2.sqrt(), fit.r2);
    let ci = slope_t_interval(&fit, 1, 0.05)?;
    println!("slope t = {:.4}, t_crit = {:.4}, 95% CI [{:.4}, {:.4}]", ci.t, ci.t_critical, ci.lower, ci.upper);

    let (xs, ys) = sinusoidal_synthetic(100, 0)?;
    let fit = ols_fit(&basis_expand(&xs, Basis::Sinusoidal(2))?, &ys)?;
    for (label, b) in fit.labels.iter().zip(&fit.coefficients) {
        println!("{label:>10}: {b:.4}");
    }

    let s = Table::from_path(format!("{FIXTURES}/salary10.csv").as_ref())?;
    for deg in [2, 4] {
        let fit = ols_fit(&basis_expand(s.column("position")?, Basis::Polynomial(deg))?, s.column("salary")?)?;
        println!("degree {deg}: {:?} (condition number {:.2e})", fit.coefficients, fit.condition_number);
    }
    Ok(())
}
