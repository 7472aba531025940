//! Seeded simulation: sample statistics, LLN and CLT experiments, estimator risk.
//!
//! Replicate `r` of a size-`n` run draws from stream `stream_id([plan_id, n, r])`,
//! so adding sizes or replicates never changes the draws of existing ones.
//! Replicates run in parallel; reductions always walk replicates in index order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distributions::Distribution;
use crate::error::{Result, StatError};
use crate::rng::{stream_id, StreamKey};
use crate::special::std_normal_cdf;

/// Where the values of a sample came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Synthetic { seed: u64, distribution: Value },
    ExternalCsv { source: String },
}

impl Provenance {
    pub fn synthetic(seed: u64, distribution_json: String) -> Self {
        let distribution = serde_json::from_str(&distribution_json).unwrap_or(Value::String(distribution_json));
        Provenance::Synthetic { seed, distribution }
    }

    pub fn external(source: impl Into<String>) -> Self {
        Provenance::ExternalCsv { source: source.into() }
    }
}

/// Divisor used for the sample variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceDivisor {
    /// 1/(n−1)
    #[default]
    Unbiased,
    /// 1/n
    Population,
}

/// Ordered real observations with their provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    provenance: Provenance,
}

/// Welford's running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
pub struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sum of squared deviations from the mean.
    pub fn m2(&self) -> f64 {
        self.m2
    }
}

impl FromIterator<f64> for Welford {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut w = Welford::default();
        for x in iter {
            w.push(x);
        }
        w
    }
}

impl Sample {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Self {
        Self { values, provenance }
    }

    /// Sample read from an external file.
    pub fn external(values: Vec<f64>, source: impl Into<String>) -> Self {
        Self::new(values, Provenance::external(source))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> Result<f64> {
        sample_mean(&self.values)
    }

    pub fn variance(&self) -> Result<f64> {
        sample_variance(&self.values, VarianceDivisor::Unbiased)
    }

    pub fn variance_with(&self, divisor: VarianceDivisor) -> Result<f64> {
        sample_variance(&self.values, divisor)
    }

    pub fn stddev(&self) -> Result<f64> {
        Ok(self.variance()?.sqrt())
    }
}

pub fn sample_mean(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(StatError::InsufficientData("mean of an empty sample".into()));
    }
    Ok(xs.iter().copied().collect::<Welford>().mean())
}

pub fn sample_variance(xs: &[f64], divisor: VarianceDivisor) -> Result<f64> {
    let min = match divisor {
        VarianceDivisor::Unbiased => 2,
        VarianceDivisor::Population => 1,
    };
    if xs.len() < min {
        return Err(StatError::InsufficientData(format!(
            "variance needs at least {min} observations, got {}",
            xs.len()
        )));
    }
    let w: Welford = xs.iter().copied().collect();
    let d = match divisor {
        VarianceDivisor::Unbiased => xs.len() - 1,
        VarianceDivisor::Population => xs.len(),
    };
    Ok(w.m2() / d as f64)
}

pub fn sample_stddev(xs: &[f64]) -> Result<f64> {
    Ok(sample_variance(xs, VarianceDivisor::Unbiased)?.sqrt())
}

/// Statistic computed from each replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    #[default]
    Mean,
    Variance,
    Max,
}

impl Statistic {
    pub fn apply(self, xs: &[f64]) -> Result<f64> {
        match self {
            Statistic::Mean => sample_mean(xs),
            Statistic::Variance => sample_variance(xs, VarianceDivisor::Unbiased),
            Statistic::Max => {
                if xs.is_empty() {
                    return Err(StatError::InsufficientData("max of an empty sample".into()));
                }
                Ok(xs.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            }
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Statistic::Mean),
            "variance" => Ok(Statistic::Variance),
            "max" => Ok(Statistic::Max),
            _ => Err(StatError::Usage(format!("unknown statistic `{s}` (mean, variance, max)"))),
        }
    }
}

/// Description of a replicated simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub distribution: Distribution,
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default)]
    pub statistic: Statistic,
}

impl ExperimentPlan {
    pub fn new(distribution: Distribution, sizes: Vec<usize>, replicates: usize, seed: u64) -> Result<Self> {
        let plan = Self {
            distribution,
            sizes,
            replicates,
            seed,
            statistic: Statistic::Mean,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_statistic(mut self, statistic: Statistic) -> Self {
        self.statistic = statistic;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(StatError::ParameterDomain("replicates must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes[0] == 0 {
            return Err(StatError::ParameterDomain("sizes must be non-empty and positive".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StatError::ParameterDomain("sizes must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Identifier folded into every replicate stream; depends only on the
    /// distribution and statistic, not on sizes or replicate count.
    pub fn plan_id(&self) -> u64 {
        let text = serde_json::to_string(&(&self.distribution, self.statistic)).unwrap_or_default();
        let words: Vec<u64> = text
            .as_bytes()
            .chunks(8)
            .map(|c| {
                let mut b = [0u8; 8];
                b[..c.len()].copy_from_slice(c);
                u64::from_le_bytes(b)
            })
            .collect();
        stream_id(&words)
    }

    /// Raw draws of replicate `r` at size `n`.
    pub fn replicate(&self, n: usize, r: usize) -> Result<Vec<f64>> {
        let key = StreamKey::new(self.seed, stream_id(&[self.plan_id(), n as u64, r as u64]));
        self.distribution.draw(key, 0, n)
    }

    /// `f` applied to every replicate at size `n`, in replicate order.
    pub fn map_replicates<F>(&self, n: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&[f64]) -> Result<f64> + Sync,
    {
        self.validate()?;
        (0..self.replicates)
            .into_par_iter()
            .map(|r| f(&self.replicate(n, r)?))
            .collect()
    }
}

/// Empirical quantile by linear interpolation between order statistics.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (h - i as f64) * (sorted[j] - sorted[i])
}

/// One row of a law-of-large-numbers table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlnRow {
    pub n: usize,
    pub median: f64,
    pub q90: f64,
    pub q99: f64,
    pub max: f64,
    /// (ε, fraction of replicates with |mean − μ| > ε)
    pub exceedance: Vec<(f64, f64)>,
}

/// Deviations |mean − μ| across replicates, summarised per sample size.
///
/// Fails with [`StatError::UndefinedMoment`] when μ does not exist, since no
/// law of large numbers applies.
pub fn lln_experiment(plan: &ExperimentPlan, epsilons: &[f64]) -> Result<Vec<LlnRow>> {
    plan.validate()?;
    let mu = plan.distribution.moments()?.mean;
    plan.sizes
        .iter()
        .map(|&n| {
            let mut dev = plan.map_replicates(n, |xs| Ok((sample_mean(xs)? - mu).abs()))?;
            dev.sort_by(f64::total_cmp);
            let r = dev.len() as f64;
            Ok(LlnRow {
                n,
                median: quantile_sorted(&dev, 0.5),
                q90: quantile_sorted(&dev, 0.9),
                q99: quantile_sorted(&dev, 0.99),
                max: *dev.last().unwrap(),
                exceedance: epsilons
                    .iter()
                    .map(|&e| (e, dev.iter().filter(|&&d| d > e).count() as f64 / r))
                    .collect(),
            })
        })
        .collect()
}

/// One row of a central-limit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltRow {
    pub n: usize,
    /// Kolmogorov–Smirnov distance of the standardized means to Φ.
    pub ks: f64,
}

/// sup |F̂(z) − Φ(z)| of the empirical CDF of `zs`.
pub fn ks_distance_normal(zs: &[f64]) -> f64 {
    let mut z = zs.to_vec();
    z.sort_by(f64::total_cmp);
    let r = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = std_normal_cdf(x);
            (f - i as f64 / r).max((i + 1) as f64 / r - f)
        })
        .fold(0.0, f64::max)
}

/// KS distance between √n(mean − μ)/σ and the standard normal, per size.
pub fn clt_experiment(plan: &ExperimentPlan) -> Result<Vec<CltRow>> {
    plan.validate()?;
    let m = plan.distribution.moments()?;
    if !(m.variance > 0.0) {
        return Err(StatError::ParameterDomain("standardization needs positive variance".into()));
    }
    let sigma = m.variance.sqrt();
    plan.sizes
        .iter()
        .map(|&n| {
            let root = (n as f64).sqrt();
            let zs = plan.map_replicates(n, |xs| Ok(root * (sample_mean(xs)? - m.mean) / sigma))?;
            Ok(CltRow { n, ks: ks_distance_normal(&zs) })
        })
        .collect()
}

/// Empirical risk of an estimator at one sample size.
///
/// `variance` uses the 1/R divisor so that `mse = bias² + variance` holds
/// on the replicate set itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub n: usize,
    pub mean_estimate: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    /// Standard error of `mean_estimate` across replicates.
    pub standard_error: f64,
}

pub fn estimator_risk<F>(plan: &ExperimentPlan, estimator: F, theta: f64) -> Result<Vec<RiskRow>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    plan.validate()?;
    plan.sizes
        .iter()
        .map(|&n| {
            let est = plan.map_replicates(n, |xs| Ok(estimator(xs)))?;
            let w: Welford = est.iter().copied().collect();
            let r = est.len() as f64;
            let variance = w.m2() / r;
            let bias = w.mean() - theta;
            let mse = est.iter().map(|e| (e - theta) * (e - theta)).sum::<f64>() / r;
            let standard_error = if est.len() > 1 {
                (w.m2() / (r - 1.0) / r).sqrt()
            } else {
                0.0
            };
            Ok(RiskRow {
                n,
                mean_estimate: w.mean(),
                bias,
                variance,
                mse,
                standard_error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_sample_statistics() {
        let xs = [18.0, 21.0, 17.0, 16.0, 24.0, 20.0];
        assert!((sample_mean(&xs).unwrap() - 19.33).abs() < 5e-3);
        assert!((sample_variance(&xs, VarianceDivisor::Unbiased).unwrap() - 8.67).abs() < 5e-3);
        assert!((sample_stddev(&xs).unwrap() - 2.94).abs() < 5e-3);
    }

    #[test]
    fn two_point_and_constant() {
        assert_eq!(sample_mean(&[0.0, 2.0]).unwrap(), 1.0);
        assert_eq!(sample_variance(&[0.0, 2.0], VarianceDivisor::Unbiased).unwrap(), 2.0);
        assert_eq!(sample_variance(&[0.0, 2.0], VarianceDivisor::Population).unwrap(), 1.0);
        assert_eq!(sample_variance(&[3.5; 7], VarianceDivisor::Unbiased).unwrap(), 0.0);
    }

    #[test]
    fn undersized_samples() {
        assert!(sample_mean(&[]).is_err());
        assert!(sample_variance(&[1.0], VarianceDivisor::Unbiased).is_err());
        assert!(sample_variance(&[1.0], VarianceDivisor::Population).is_ok());
    }

    #[test]
    fn welford_survives_large_offset() {
        let base = 1e8;
        let xs = [base + 4.0, base + 7.0, base + 13.0, base + 16.0];
        let v = sample_variance(&xs, VarianceDivisor::Unbiased).unwrap();
        assert!((v - 30.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn plan_validation() {
        let d = Distribution::bernoulli(0.5).unwrap();
        assert!(ExperimentPlan::new(d.clone(), vec![10, 10], 5, 0).is_err());
        assert!(ExperimentPlan::new(d.clone(), vec![10, 20], 0, 0).is_err());
        assert!(ExperimentPlan::new(d, vec![10, 20], 5, 0).is_ok());
    }

    #[test]
    fn cauchy_has_no_lln() {
        let plan = ExperimentPlan::new(Distribution::cauchy(), vec![10], 3, 0).unwrap();
        assert!(matches!(lln_experiment(&plan, &[]), Err(StatError::UndefinedMoment(_))));
    }

    #[test]
    fn constant_estimator_has_zero_risk() {
        let plan = ExperimentPlan::new(Distribution::uniform(0.0, 1.0).unwrap(), vec![10], 50, 1).unwrap();
        let rows = estimator_risk(&plan, |_| 1.0, 1.0).unwrap();
        assert_eq!((rows[0].bias, rows[0].variance, rows[0].mse), (0.0, 0.0, 0.0));
    }

    #[test]
    fn extending_replicates_keeps_earlier_draws() {
        let d = Distribution::normal(0.0, 1.0).unwrap();
        let a = ExperimentPlan::new(d.clone(), vec![5], 3, 9).unwrap();
        let b = ExperimentPlan::new(d, vec![5, 8], 6, 9).unwrap();
        assert_eq!(a.replicate(5, 2).unwrap(), b.replicate(5, 2).unwrap());
    }
}
