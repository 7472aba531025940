//! CLT confidence intervals and tests for a proportion.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StatError};
use crate::montecarlo::{sample_mean, sample_variance, VarianceDivisor};
use crate::special::{ln_choose, log_sum_exp, std_normal_cdf, std_normal_quantile, std_normal_sf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMode {
    /// Estimated variance: sample variance, or p̂(1 − p̂) for a proportion.
    CltPlugin,
    /// Bernoulli variance bound θ(1 − θ) ≤ 1/4.
    CltWorstcaseQuarter,
}

impl std::str::FromStr for CiMode {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plugin" | "clt-plugin" => Ok(CiMode::CltPlugin),
            "worstcase" | "worst-case" | "clt-worstcase-quarter" => Ok(CiMode::CltWorstcaseQuarter),
            _ => Err(StatError::Usage(format!("unknown interval mode `{s}` (plugin, worstcase)"))),
        }
    }
}

/// What the interval is computed from.
#[derive(Debug, Clone, PartialEq)]
pub enum CiInput<'a> {
    Data(&'a [f64]),
    Summary { mean: f64, variance: f64, n: u64 },
    Proportion { successes: u64, n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// 1 − α.
    pub level: f64,
    pub method: CiMode,
    /// z_{1−α/2}.
    pub z: f64,
    pub half_width: f64,
    pub n: u64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatError::ParameterDomain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// estimate ± z_{1−α/2} √(Var/n).
pub fn ci_mean_clt(input: CiInput<'_>, alpha: f64, mode: CiMode) -> Result<IntervalReport> {
    check_alpha(alpha)?;
    let (estimate, plugin_var, n) = match input {
        CiInput::Data(xs) => {
            let m = sample_mean(xs)?;
            let v = match mode {
                CiMode::CltPlugin => sample_variance(xs, VarianceDivisor::Unbiased)?,
                CiMode::CltWorstcaseQuarter => f64::NAN,
            };
            (m, v, xs.len() as u64)
        }
        CiInput::Summary { mean, variance, n } => {
            if !(variance >= 0.0 && variance.is_finite()) || !mean.is_finite() {
                return Err(StatError::ParameterDomain(format!("bad summary mean {mean}, variance {variance}")));
            }
            (mean, variance, n)
        }
        CiInput::Proportion { successes, n } => {
            if successes > n {
                return Err(StatError::ParameterDomain(format!("{successes} successes out of {n} trials")));
            }
            let p = successes as f64 / n as f64;
            (p, p * (1.0 - p), n)
        }
    };
    if n == 0 {
        return Err(StatError::InsufficientData("n must be at least 1".into()));
    }
    let var = match mode {
        CiMode::CltPlugin => plugin_var,
        CiMode::CltWorstcaseQuarter => 0.25,
    };
    let z = std_normal_quantile(1.0 - alpha / 2.0)?;
    let half_width = z * (var / n as f64).sqrt();
    Ok(IntervalReport {
        estimate,
        lower: estimate - half_width,
        upper: estimate + half_width,
        level: 1.0 - alpha,
        method: mode,
        z,
        half_width,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// H_a: p > p₀; upper tail.
    Greater,
    /// H_a: p < p₀; lower tail.
    Less,
    TwoSided,
}

impl std::str::FromStr for Side {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" | "upper" => Ok(Side::Greater),
            "less" | "lower" => Ok(Side::Less),
            "two-sided" | "two_sided" | "two" => Ok(Side::TwoSided),
            _ => Err(StatError::Usage(format!("unknown side `{s}` (greater, less, two-sided)"))),
        }
    }
}

// ln P(X = j) for j in range, X ~ Binomial(n, p).
fn ln_terms(n: u64, p: f64, range: std::ops::RangeInclusive<u64>) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    range
        .map(|j| ln_choose(n, j) + j as f64 * lp + (n - j) as f64 * lq)
        .collect()
}

/// (P(X ≥ k), P(X ≤ k)) for X ~ Binomial(n, p), each summed in log space
/// over whichever side is the smaller tail.
fn binomial_tails(n: u64, p: f64, k: u64) -> (f64, f64) {
    if k > n {
        return (0.0, 1.0);
    }
    if p == 0.0 {
        return (if k == 0 { 1.0 } else { 0.0 }, 1.0);
    }
    if p == 1.0 {
        return (1.0, if k == n { 1.0 } else { 0.0 });
    }
    let mean = n as f64 * p;
    let upper = if k as f64 > mean {
        log_sum_exp(&ln_terms(n, p, k..=n)).exp()
    } else if k == 0 {
        1.0
    } else {
        1.0 - log_sum_exp(&ln_terms(n, p, 0..=k - 1)).exp()
    };
    let lower = if (k as f64) < mean {
        log_sum_exp(&ln_terms(n, p, 0..=k)).exp()
    } else if k == n {
        1.0
    } else {
        1.0 - log_sum_exp(&ln_terms(n, p, k + 1..=n)).exp()
    };
    (upper.clamp(0.0, 1.0), lower.clamp(0.0, 1.0))
}

/// Exact p-value of k successes in n trials under Binomial(n, p₀).
///
/// Two-sided p is min(1, 2·min(upper, lower)).
pub fn p_value_binomial_tail(n: u64, p0: f64, k: u64, side: Side) -> Result<f64> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(StatError::ParameterDomain(format!("p0 must lie in [0, 1], got {p0}")));
    }
    if k > n {
        return Err(StatError::ParameterDomain(format!("{k} successes out of {n} trials")));
    }
    let (upper, lower) = binomial_tails(n, p0, k);
    Ok(match side {
        Side::Greater => upper,
        Side::Less => lower,
        Side::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    /// H₀: p = p₀.
    pub null_p: f64,
    pub alternative: Side,
    pub n: u64,
    pub successes: u64,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    /// p < α.
    pub reject: bool,
}

/// z = (p̂ − p₀)/√(p₀(1 − p₀)/n) against the normal tail.
pub fn z_test_proportion(n: u64, p0: f64, successes: u64, side: Side, alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(StatError::ParameterDomain(format!("p0 must lie strictly inside (0, 1), got {p0}")));
    }
    if n == 0 || successes > n {
        return Err(StatError::ParameterDomain(format!("{successes} successes out of {n} trials")));
    }
    let phat = successes as f64 / n as f64;
    let z = (phat - p0) / (p0 * (1.0 - p0) / n as f64).sqrt();
    let p_value = match side {
        Side::Greater => std_normal_sf(z),
        Side::Less => std_normal_cdf(z),
        Side::TwoSided => (2.0 * std_normal_sf(z.abs())).min(1.0),
    };
    Ok(TestReport {
        null_p: p0,
        alternative: side,
        n,
        successes,
        statistic: z,
        p_value,
        alpha,
        reject: p_value < alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plugin_interval() {
        let r = ci_mean_clt(CiInput::Proportion { successes: 136, n: 400 }, 0.01, CiMode::CltPlugin).unwrap();
        assert!((r.lower - 0.28).abs() < 5e-3 && (r.upper - 0.40).abs() < 5e-3);
        assert!((r.z - 2.576).abs() < 5e-4);
    }

    #[test]
    fn zero_variance_interval() {
        let r = ci_mean_clt(CiInput::Data(&[2.0, 2.0, 2.0]), 0.05, CiMode::CltPlugin).unwrap();
        assert_eq!((r.lower, r.upper), (2.0, 2.0));
        assert!(ci_mean_clt(CiInput::Data(&[2.0]), 1.5, CiMode::CltPlugin).is_err());
    }

    #[test]
    fn magician_coin() {
        let p = p_value_binomial_tail(100, 0.5, 99, Side::Greater).unwrap();
        let want = 101.0 * 2f64.powi(-100);
        assert!((p - want).abs() < 1e-31);
        assert!(((p - want) / want).abs() < 1e-12);
        assert_eq!(p_value_binomial_tail(100, 0.5, 0, Side::Greater).unwrap(), 1.0);
    }

    #[test]
    fn weighted_coin_tail() {
        let p = p_value_binomial_tail(20, 0.2, 16, Side::Greater).unwrap();
        assert!((p - 1.38e-8).abs() < 2e-10);
    }

    #[test]
    fn z_test_cases() {
        let r = z_test_proportion(137, 0.75, 131, Side::Greater, 0.01).unwrap();
        assert!(r.reject);
        assert!(r.p_value < 1e-7);
        let r = z_test_proportion(100, 0.25, 25, Side::Greater, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 0.5);
        assert!(!r.reject);
        assert!(z_test_proportion(10, 1.0, 3, Side::Greater, 0.05).is_err());
    }
}
