//! Kernel ridge regression and regularized logistic regression by IRLS.

use statkit::linmodels::{kernel_ridge_fit, logistic_fit_irls, ridge_primal, Kernel, KernelSpec};
use statkit::{Distribution, Result};

fn main() -> Result<()> {
    let xs = Distribution::uniform(-3.0, 3.0)?.sample(40, 1)?.values().to_vec();
    let noise = Distribution::normal(0.0, 0.01)?.sample(40, 2)?.values().to_vec();
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    let y: Vec<f64> = xs.iter().zip(&noise).map(|(x, e)| x.sin() + e).collect();

    let fit = kernel_ridge_fit(&rows, &y, KernelSpec { kernel: Kernel::Gaussian { width: 0.7 }, lambda: 1e-4 })?;
    for x in [-2.0, 0.0, 1.0] {
        println!("kernel ridge f({x}) = {:.4}, sin = {:.4}", fit.predict(&[x]), f64::sin(x));
    }

    // the linear kernel reproduces primal ridge on the same features
    let w = ridge_primal(&rows, &y, 0.1)?;
    let dual = kernel_ridge_fit(&rows, &y, KernelSpec { kernel: Kernel::Linear, lambda: 0.1 })?;
    println!("primal w = {:.6}, dual prediction at 1 = {:.6}", w[0], dual.predict(&[1.0]));

    let labels: Vec<f64> = xs.iter().map(|&x| if x.abs() < 1.2 { 1.0 } else { -1.0 }).collect();
    let linear = logistic_fit_irls(&rows.iter().map(|r| vec![1.0, r[0]]).collect::<Vec<_>>(), &labels, 1e-3, None)?;
    let rbf = logistic_fit_irls(&rows, &labels, 1e-3, Some(Kernel::Gaussian { width: 1.0 }))?;
    let acc = |p: &dyn Fn(&[f64]) -> f64| {
        rows.iter().zip(&labels).filter(|(r, &l)| (p(r) > 0.5) == (l > 0.0)).count() as f64 / rows.len() as f64
    };
    println!("linear logistic: {} iterations, accuracy {:.2}", linear.iterations, acc(&|r| linear.probability(&[1.0, r[0]])));
    println!("gaussian logistic: {} iterations, accuracy {:.2}", rbf.iterations, acc(&|r| rbf.probability(r)));
    println!("objective trace: {:?}", rbf.objective_trace.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
    Ok(())
}
