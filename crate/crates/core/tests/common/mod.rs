#![allow(dead_code)]

use statkit::quad::integrate_pieces;
use statkit::Distribution;

/// One representative parameter set per univariate family (Cauchy aside).
pub fn univariate_zoo() -> Vec<Distribution> {
    vec![
        Distribution::bernoulli(0.3).unwrap(),
        Distribution::binomial(20, 0.35).unwrap(),
        Distribution::geometric(0.2).unwrap(),
        Distribution::poisson(4.5).unwrap(),
        Distribution::hypergeometric(50, 12, 10).unwrap(),
        Distribution::negative_binomial(3, 0.4).unwrap(),
        Distribution::discrete_uniform(-4, 4).unwrap(),
        Distribution::uniform(-1.0, 3.0).unwrap(),
        Distribution::exponential(1.5).unwrap(),
        Distribution::normal(2.0, 4.0).unwrap(),
        Distribution::laplace(0.0, 2.0).unwrap(),
        Distribution::gamma(2.5, 1.5).unwrap(),
        Distribution::chi_square(5.0).unwrap(),
        Distribution::erlang(3, 2.0).unwrap(),
        Distribution::rayleigh(2.0).unwrap(),
        Distribution::beta(2.0, 5.0).unwrap(),
    ]
}

/// |total mass − 1|.
pub fn normalization_error(d: &Distribution) -> f64 {
    if d.is_discrete() {
        return (d.pmf_table().unwrap().total() - 1.0).abs();
    }
    let (lo, hi) = d.support().unwrap();
    let mid = d.quantile(0.5).unwrap();
    let total = integrate_pieces(|x| d.mass_or_density(x).unwrap(), &[lo, mid, hi], 1e-12);
    (total - 1.0).abs()
}

/// Worst |quantile(cdf(x)) − x| / max(1, |x|) over support points whose cdf
/// is away from 0 and 1, where the inverse is well conditioned.
pub fn quantile_cdf_error(d: &Distribution) -> f64 {
    let lo = d.quantile(1e-6).unwrap();
    let hi = d.quantile(1.0 - 1e-6).unwrap();
    (0..=200)
        .map(|i| lo + (hi - lo) * i as f64 / 200.0)
        .filter(|&x| {
            let u = d.cdf(x).unwrap();
            u > 1e-6 && u < 1.0 - 1e-6
        })
        .map(|x| (d.quantile(d.cdf(x).unwrap()).unwrap() - x).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Smallest margin cdf(quantile(u)) − u over a u grid; negative means a violation.
pub fn discrete_quantile_margin(d: &Distribution) -> f64 {
    (1..1000)
        .map(|i| {
            let u = i as f64 / 1000.0;
            d.cdf(d.quantile(u).unwrap()).unwrap() - u
        })
        .fold(f64::INFINITY, f64::min)
}

/// Sample mean and variance deviations from the exact moments, in standard errors.
pub fn moment_z_scores(d: &Distribution, n: usize, seed: u64) -> (f64, f64) {
    let m = d.moments().unwrap();
    let s = d.sample(n, seed).unwrap();
    let xs = s.values();
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let c2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let c4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let var = c2 * nf / (nf - 1.0);
    let z_mean = (mean - m.mean) / (m.variance / nf).sqrt();
    let z_var = (var - m.variance) / ((c4 - c2 * c2) / nf).sqrt();
    (z_mean, z_var)
}

/// Fixed grid on [a, b] with `k` intervals.
pub fn grid(a: f64, b: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..=k).map(move |i| a + (b - a) * i as f64 / k as f64)
}
