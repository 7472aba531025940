//! Parameter-validated distribution families.
//!
//! A [`Distribution`] wraps a [`Family`] whose parameters have been checked
//! on construction. Every operation is a pure function of the distribution
//! and its arguments.
//!
//! | family | parameters | support |
//! |---|---|---|
//! | bernoulli | p | {0, 1} |
//! | binomial | n, p | {0..n} |
//! | geometric | p | {1, 2, ...} (trial of first success) |
//! | poisson | lambda | {0, 1, ...} |
//! | hypergeometric | population N, successes K, draws r | {max(0, r−N+K)..min(r, K)} |
//! | negative_binomial | r, p | {r, r+1, ...} (trial of r-th success) |
//! | multinomial | n, probs | count vectors summing to n |
//! | discrete_uniform | a, b | {a..b} |
//! | continuous_uniform | a, b | [a, b] |
//! | exponential | lambda (rate) | [0, ∞) |
//! | normal | mean, variance | ℝ |
//! | laplace | mean, variance | ℝ |
//! | cauchy | (standard) | ℝ |
//! | gamma | shape α, rate λ | [0, ∞) |
//! | chi_square | k | [0, ∞) |
//! | erlang | n, rate | [0, ∞) |
//! | rayleigh | variance σ² | [0, ∞) |
//! | beta | alpha, beta | [0, 1] |
//! | dirichlet | alpha | probability simplex |
//!
//! The Laplace family is parameterised by its variance: the scale is
//! b = √(σ²/2), so `laplace(0, 1)` has density e^{−√2|x|}/√2.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StatError};
use crate::montecarlo::{Provenance, Sample};
use crate::pmf::PmfTable;
use crate::rng::StreamKey;
use crate::special::{
    ln_beta, ln_choose, ln_factorial, ln_gamma, reg_inc_beta, reg_lower_gamma, std_normal_cdf,
    std_normal_quantile, std_normal_sf,
};

/// Tail mass below which infinite discrete supports are truncated.
pub const TAIL_TRUNCATION: f64 = 1e-12;

const SIMPLEX_TOL: f64 = 1e-12;
const SAMPLE_CHUNK: usize = 1 << 14;

/// Raw family tag with parameters, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    Bernoulli { p: f64 },
    Binomial { n: u64, p: f64 },
    Geometric { p: f64 },
    Poisson { lambda: f64 },
    Hypergeometric { population: u64, successes: u64, draws: u64 },
    NegativeBinomial { r: u64, p: f64 },
    Multinomial { n: u64, probs: Vec<f64> },
    DiscreteUniform { a: i64, b: i64 },
    ContinuousUniform { a: f64, b: f64 },
    Exponential { lambda: f64 },
    Normal { mean: f64, variance: f64 },
    Laplace { mean: f64, variance: f64 },
    Cauchy {},
    Gamma { shape: f64, rate: f64 },
    ChiSquare { k: f64 },
    Erlang { n: u64, rate: f64 },
    Rayleigh { variance: f64 },
    Beta { alpha: f64, beta: f64 },
    Dirichlet { alpha: Vec<f64> },
}

/// Mean and variance of a univariate family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// A distribution with validated parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct Distribution(Family);

impl TryFrom<Family> for Distribution {
    type Error = StatError;

    fn try_from(f: Family) -> Result<Self> {
        Distribution::new(f)
    }
}

impl From<Distribution> for Family {
    fn from(d: Distribution) -> Family {
        d.0
    }
}

fn prob_param(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StatError::ParameterDomain(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(StatError::ParameterDomain(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

fn finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(StatError::ParameterDomain(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

fn validate(f: &Family) -> Result<()> {
    use Family::*;
    match f {
        Bernoulli { p } => prob_param("p", *p),
        Binomial { p, .. } => prob_param("p", *p),
        Geometric { p } | NegativeBinomial { p, .. } => {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(StatError::ParameterDomain(format!("p must lie in (0, 1], got {p}")));
            }
            if let NegativeBinomial { r, .. } = f {
                if *r == 0 {
                    return Err(StatError::ParameterDomain("r must be at least 1".into()));
                }
            }
            Ok(())
        }
        Poisson { lambda } => positive("lambda", *lambda),
        Hypergeometric { population, successes, draws } => {
            if successes > population || draws > population {
                return Err(StatError::ParameterDomain(format!(
                    "need successes ≤ population and draws ≤ population, got N={population}, K={successes}, r={draws}"
                )));
            }
            Ok(())
        }
        Multinomial { probs, .. } => simplex_weights("probs", probs),
        DiscreteUniform { a, b } => {
            if a >= b {
                return Err(StatError::ParameterDomain(format!("need a < b, got a={a}, b={b}")));
            }
            Ok(())
        }
        ContinuousUniform { a, b } => {
            finite("a", *a)?;
            finite("b", *b)?;
            if a >= b {
                return Err(StatError::ParameterDomain(format!("need a < b, got a={a}, b={b}")));
            }
            Ok(())
        }
        Exponential { lambda } => positive("lambda", *lambda),
        Normal { mean, variance } | Laplace { mean, variance } => {
            finite("mean", *mean)?;
            positive("variance", *variance)
        }
        Cauchy {} => Ok(()),
        Gamma { shape, rate } => {
            positive("shape", *shape)?;
            positive("rate", *rate)
        }
        ChiSquare { k } => positive("k", *k),
        Erlang { n, rate } => {
            if *n == 0 {
                return Err(StatError::ParameterDomain("erlang n must be at least 1".into()));
            }
            positive("rate", *rate)
        }
        Rayleigh { variance } => positive("variance", *variance),
        Beta { alpha, beta } => {
            positive("alpha", *alpha)?;
            positive("beta", *beta)
        }
        Dirichlet { alpha } => {
            if alpha.len() < 2 {
                return Err(StatError::ParameterDomain("dirichlet needs at least two weights".into()));
            }
            for a in alpha {
                positive("alpha", *a)?;
            }
            Ok(())
        }
    }
}

fn simplex_weights(name: &str, w: &[f64]) -> Result<()> {
    if w.len() < 2 {
        return Err(StatError::ParameterDomain(format!("{name} needs at least two categories")));
    }
    for &p in w {
        prob_param(name, p)?;
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > SIMPLEX_TOL {
        return Err(StatError::ParameterDomain(format!("{name} must sum to 1, got {s}")));
    }
    Ok(())
}

fn as_count(x: f64) -> Result<Option<u64>> {
    if !x.is_finite() {
        return Err(StatError::Domain(format!("x must be finite, got {x}")));
    }
    if x.fract() != 0.0 {
        return Err(StatError::Support(format!("discrete family evaluated at non-integer {x}")));
    }
    Ok(if x < 0.0 { None } else { Some(x as u64) })
}

// ln(p^k) with 0^0 = 1.
fn xlogy(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * p.ln()
    }
}

impl Distribution {
    pub fn new(f: Family) -> Result<Self> {
        validate(&f)?;
        Ok(Self(f))
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(Family::Bernoulli { p })
    }
    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        Self::new(Family::Binomial { n, p })
    }
    pub fn geometric(p: f64) -> Result<Self> {
        Self::new(Family::Geometric { p })
    }
    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::new(Family::Poisson { lambda })
    }
    pub fn hypergeometric(population: u64, successes: u64, draws: u64) -> Result<Self> {
        Self::new(Family::Hypergeometric { population, successes, draws })
    }
    pub fn negative_binomial(r: u64, p: f64) -> Result<Self> {
        Self::new(Family::NegativeBinomial { r, p })
    }
    pub fn multinomial(n: u64, probs: Vec<f64>) -> Result<Self> {
        Self::new(Family::Multinomial { n, probs })
    }
    pub fn discrete_uniform(a: i64, b: i64) -> Result<Self> {
        Self::new(Family::DiscreteUniform { a, b })
    }
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::ContinuousUniform { a, b })
    }
    pub fn exponential(lambda: f64) -> Result<Self> {
        Self::new(Family::Exponential { lambda })
    }
    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        Self::new(Family::Normal { mean, variance })
    }
    pub fn std_normal() -> Self {
        Self(Family::Normal { mean: 0.0, variance: 1.0 })
    }
    pub fn laplace(mean: f64, variance: f64) -> Result<Self> {
        Self::new(Family::Laplace { mean, variance })
    }
    pub fn cauchy() -> Self {
        Self(Family::Cauchy {})
    }
    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Self::new(Family::Gamma { shape, rate })
    }
    pub fn chi_square(k: f64) -> Result<Self> {
        Self::new(Family::ChiSquare { k })
    }
    pub fn erlang(n: u64, rate: f64) -> Result<Self> {
        Self::new(Family::Erlang { n, rate })
    }
    pub fn rayleigh(variance: f64) -> Result<Self> {
        Self::new(Family::Rayleigh { variance })
    }
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Beta { alpha, beta })
    }
    pub fn dirichlet(alpha: Vec<f64>) -> Result<Self> {
        Self::new(Family::Dirichlet { alpha })
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    pub fn name(&self) -> &'static str {
        use Family::*;
        match self.0 {
            Bernoulli { .. } => "bernoulli",
            Binomial { .. } => "binomial",
            Geometric { .. } => "geometric",
            Poisson { .. } => "poisson",
            Hypergeometric { .. } => "hypergeometric",
            NegativeBinomial { .. } => "negative_binomial",
            Multinomial { .. } => "multinomial",
            DiscreteUniform { .. } => "discrete_uniform",
            ContinuousUniform { .. } => "continuous_uniform",
            Exponential { .. } => "exponential",
            Normal { .. } => "normal",
            Laplace { .. } => "laplace",
            Cauchy {} => "cauchy",
            Gamma { .. } => "gamma",
            ChiSquare { .. } => "chi_square",
            Erlang { .. } => "erlang",
            Rayleigh { .. } => "rayleigh",
            Beta { .. } => "beta",
            Dirichlet { .. } => "dirichlet",
        }
    }

    pub fn is_discrete(&self) -> bool {
        use Family::*;
        matches!(
            self.0,
            Bernoulli { .. }
                | Binomial { .. }
                | Geometric { .. }
                | Poisson { .. }
                | Hypergeometric { .. }
                | NegativeBinomial { .. }
                | Multinomial { .. }
                | DiscreteUniform { .. }
        )
    }

    pub fn is_multivariate(&self) -> bool {
        matches!(self.0, Family::Multinomial { .. } | Family::Dirichlet { .. })
    }

    fn univariate(&self, op: &str) -> Result<()> {
        if self.is_multivariate() {
            return Err(StatError::Unsupported(format!("{op} on multivariate family {}", self.name())));
        }
        Ok(())
    }

    /// Closed support interval `[lo, hi]` of a univariate family.
    pub fn support(&self) -> Result<(f64, f64)> {
        use Family::*;
        self.univariate("support")?;
        let inf = f64::INFINITY;
        Ok(match self.0 {
            Bernoulli { .. } => (0.0, 1.0),
            Binomial { n, .. } => (0.0, n as f64),
            Geometric { .. } => (1.0, inf),
            Poisson { .. } => (0.0, inf),
            Hypergeometric { population, successes, draws } => (
                draws.saturating_sub(population - successes) as f64,
                draws.min(successes) as f64,
            ),
            NegativeBinomial { r, .. } => (r as f64, inf),
            DiscreteUniform { a, b } => (a as f64, b as f64),
            ContinuousUniform { a, b } => (a, b),
            Exponential { .. } | Gamma { .. } | ChiSquare { .. } | Erlang { .. } | Rayleigh { .. } => {
                (0.0, inf)
            }
            Normal { .. } | Laplace { .. } | Cauchy {} => (-inf, inf),
            Beta { .. } => (0.0, 1.0),
            Multinomial { .. } | Dirichlet { .. } => unreachable!(),
        })
    }

    /// Natural log of the PMF or PDF at `x`; −∞ outside the support.
    pub fn ln_mass_or_density(&self, x: f64) -> Result<f64> {
        use Family::*;
        self.univariate("mass_or_density")?;
        if self.is_discrete() {
            let k = match as_count(x)? {
                Some(k) => k,
                None => {
                    return Ok(match self.0 {
                        DiscreteUniform { a, b } if x >= a as f64 && x <= b as f64 => {
                            -(((b - a + 1) as f64).ln())
                        }
                        _ => f64::NEG_INFINITY,
                    })
                }
            };
            let kf = k as f64;
            return Ok(match self.0 {
                Bernoulli { p } => match k {
                    0 => (1.0 - p).ln(),
                    1 => p.ln(),
                    _ => f64::NEG_INFINITY,
                },
                Binomial { n, p } => {
                    if k > n {
                        f64::NEG_INFINITY
                    } else {
                        ln_choose(n, k) + xlogy(kf, p) + xlogy((n - k) as f64, 1.0 - p)
                    }
                }
                Geometric { p } => {
                    if k == 0 {
                        f64::NEG_INFINITY
                    } else {
                        xlogy(kf - 1.0, 1.0 - p) + p.ln()
                    }
                }
                Poisson { lambda } => kf * lambda.ln() - lambda - ln_factorial(k),
                Hypergeometric { population, successes, draws } => {
                    if k > successes || k > draws || draws - k > population - successes {
                        f64::NEG_INFINITY
                    } else {
                        ln_choose(successes, k) + ln_choose(population - successes, draws - k)
                            - ln_choose(population, draws)
                    }
                }
                NegativeBinomial { r, p } => {
                    if k < r {
                        f64::NEG_INFINITY
                    } else {
                        ln_choose(k - 1, r - 1) + r as f64 * p.ln() + xlogy((k - r) as f64, 1.0 - p)
                    }
                }
                DiscreteUniform { a, b } => {
                    if x >= a as f64 && x <= b as f64 {
                        -(((b - a + 1) as f64).ln())
                    } else {
                        f64::NEG_INFINITY
                    }
                }
                _ => unreachable!(),
            });
        }
        if !x.is_finite() {
            return Err(StatError::Domain(format!("x must be finite, got {x}")));
        }
        let neg = f64::NEG_INFINITY;
        Ok(match self.0 {
            ContinuousUniform { a, b } => {
                if x < a || x > b {
                    neg
                } else {
                    -(b - a).ln()
                }
            }
            Exponential { lambda } => {
                if x < 0.0 {
                    neg
                } else {
                    lambda.ln() - lambda * x
                }
            }
            Normal { mean, variance } => {
                let z = x - mean;
                -0.5 * (2.0 * PI * variance).ln() - z * z / (2.0 * variance)
            }
            Laplace { mean, variance } => {
                let b = (variance / 2.0).sqrt();
                -(2.0 * b).ln() - (x - mean).abs() / b
            }
            Cauchy {} => -(PI * (1.0 + x * x)).ln(),
            Gamma { shape, rate } => gamma_ln_pdf(x, shape, rate),
            ChiSquare { k } => gamma_ln_pdf(x, k / 2.0, 0.5),
            Erlang { n, rate } => gamma_ln_pdf(x, n as f64, rate),
            Rayleigh { variance } => {
                if x <= 0.0 {
                    neg
                } else {
                    x.ln() - variance.ln() - x * x / (2.0 * variance)
                }
            }
            Beta { alpha, beta } => {
                if !(0.0..=1.0).contains(&x) {
                    neg
                } else {
                    xlogy(alpha - 1.0, x) + xlogy(beta - 1.0, 1.0 - x) - ln_beta(alpha, beta)
                }
            }
            _ => unreachable!(),
        })
    }

    /// PMF value (discrete) or density (continuous) at `x`.
    pub fn mass_or_density(&self, x: f64) -> Result<f64> {
        // ratio families stay exact instead of round-tripping through ln
        match self.0 {
            Family::Bernoulli { p } if x == 0.0 => return Ok(1.0 - p),
            Family::Bernoulli { p } if x == 1.0 => return Ok(p),
            Family::DiscreteUniform { a, b } if x.fract() == 0.0 && x >= a as f64 && x <= b as f64 => {
                return Ok(1.0 / (b - a + 1) as f64)
            }
            Family::ContinuousUniform { a, b } if x >= a && x <= b => return Ok(1.0 / (b - a)),
            _ => {}
        }
        Ok(self.ln_mass_or_density(x)?.exp())
    }

    /// PMF of a count vector (multinomial) or density at a simplex point (dirichlet).
    pub fn mass_or_density_vec(&self, x: &[f64]) -> Result<f64> {
        match &self.0 {
            Family::Multinomial { n, probs } => {
                if x.len() != probs.len() {
                    return Err(StatError::Support(format!(
                        "expected {} counts, got {}",
                        probs.len(),
                        x.len()
                    )));
                }
                let mut counts = Vec::with_capacity(x.len());
                for &c in x {
                    match as_count(c)? {
                        Some(k) => counts.push(k),
                        None => return Ok(0.0),
                    }
                }
                if counts.iter().sum::<u64>() != *n {
                    return Ok(0.0);
                }
                let mut lp = ln_factorial(*n);
                for (&k, &p) in counts.iter().zip(probs) {
                    if k > 0 && p == 0.0 {
                        return Ok(0.0);
                    }
                    lp += xlogy(k as f64, p) - ln_factorial(k);
                }
                Ok(lp.exp())
            }
            Family::Dirichlet { alpha } => {
                if x.len() != alpha.len() {
                    return Err(StatError::Support(format!(
                        "expected {} coordinates, got {}",
                        alpha.len(),
                        x.len()
                    )));
                }
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(StatError::Domain("coordinates must be finite".into()));
                }
                let s: f64 = x.iter().sum();
                if x.iter().any(|&v| v < 0.0) || (s - 1.0).abs() > SIMPLEX_TOL {
                    return Ok(0.0);
                }
                let a0: f64 = alpha.iter().sum();
                let mut lp = ln_gamma(a0);
                for (&xi, &ai) in x.iter().zip(alpha) {
                    lp += xlogy(ai - 1.0, xi) - ln_gamma(ai);
                }
                Ok(lp.exp())
            }
            _ => Err(StatError::Unsupported(format!(
                "vector evaluation on univariate family {}",
                self.name()
            ))),
        }
    }

    /// P(X ≤ x).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        use Family::*;
        self.univariate("cdf")?;
        if x.is_nan() {
            return Err(StatError::Domain("x is NaN".into()));
        }
        if x == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        let (lo, hi) = self.support()?;
        if x < lo {
            return Ok(0.0);
        }
        if x >= hi {
            return Ok(1.0);
        }
        if self.is_discrete() {
            let k = x.floor();
            return Ok(match self.0 {
                Bernoulli { p } => 1.0 - p,
                Binomial { n, p } => {
                    let k = k as u64;
                    reg_inc_beta((n - k) as f64, k as f64 + 1.0, 1.0 - p)
                }
                Geometric { p } => -(k * (-p).ln_1p()).exp_m1(),
                Poisson { lambda } => crate::special::gamma_ur(k + 1.0, lambda).clamp(0.0, 1.0),
                NegativeBinomial { r, p } => reg_inc_beta(r as f64, k - r as f64 + 1.0, p),
                DiscreteUniform { a, b } => (k - a as f64 + 1.0) / ((b - a + 1) as f64),
                Hypergeometric { .. } => {
                    let mut acc = 0.0;
                    let mut v = lo;
                    while v <= k {
                        acc += self.mass_or_density(v)?;
                        v += 1.0;
                    }
                    acc.min(1.0)
                }
                _ => unreachable!(),
            });
        }
        Ok(match self.0 {
            ContinuousUniform { a, b } => (x - a) / (b - a),
            Exponential { lambda } => -(-lambda * x).exp_m1(),
            Normal { mean, variance } => std_normal_cdf((x - mean) / variance.sqrt()),
            Laplace { mean, variance } => {
                let b = (variance / 2.0).sqrt();
                let z = (x - mean) / b;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            Cauchy {} => 0.5 + x.atan() / PI,
            Gamma { shape, rate } => reg_lower_gamma(shape, rate * x),
            ChiSquare { k } => reg_lower_gamma(k / 2.0, x / 2.0),
            Erlang { n, rate } => reg_lower_gamma(n as f64, rate * x),
            Rayleigh { variance } => -(-x * x / (2.0 * variance)).exp_m1(),
            Beta { alpha, beta } => reg_inc_beta(alpha, beta, x),
            _ => unreachable!(),
        })
    }

    /// P(X > x), computed directly where cancellation would hurt.
    pub fn sf(&self, x: f64) -> Result<f64> {
        use Family::*;
        match self.0 {
            Normal { mean, variance } => Ok(std_normal_sf((x - mean) / variance.sqrt())),
            Exponential { lambda } if x >= 0.0 => Ok((-lambda * x).exp()),
            Geometric { p } if x >= 1.0 => Ok((x.floor() * (-p).ln_1p()).exp()),
            Poisson { lambda } if x >= 0.0 => Ok(reg_lower_gamma(x.floor() + 1.0, lambda)),
            NegativeBinomial { r, p } if x >= r as f64 => {
                Ok(reg_inc_beta(x.floor() - r as f64 + 1.0, r as f64, 1.0 - p))
            }
            _ => Ok(1.0 - self.cdf(x)?),
        }
    }

    /// Least x with cdf(x) ≥ u.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        use Family::*;
        self.univariate("quantile")?;
        if !(u > 0.0 && u < 1.0) {
            return Err(StatError::Domain(format!("quantile needs 0 < u < 1, got {u}")));
        }
        if self.is_discrete() {
            return self.discrete_quantile(u);
        }
        let closed = match self.0 {
            ContinuousUniform { a, b } => Some(a + u * (b - a)),
            Exponential { lambda } => Some(-(-u).ln_1p() / lambda),
            Normal { mean, variance } => Some(mean + variance.sqrt() * std_normal_quantile(u)?),
            Laplace { mean, variance } => {
                let b = (variance / 2.0).sqrt();
                Some(if u < 0.5 {
                    mean + b * (2.0 * u).ln()
                } else {
                    mean - b * (2.0 - 2.0 * u).ln()
                })
            }
            Cauchy {} => Some((PI * (u - 0.5)).tan()),
            Rayleigh { variance } => Some((-2.0 * variance * (-u).ln_1p()).sqrt()),
            _ => None,
        };
        match closed {
            Some(x) => self.lift_to_quantile(x, u),
            None => self.invert_cdf(u),
        }
    }

    // A closed-form inverse may land one rounding step short; nudge upward
    // until cdf(x) ≥ u.
    fn lift_to_quantile(&self, x: f64, u: f64) -> Result<f64> {
        if self.cdf(x)? >= u {
            return Ok(x);
        }
        let mut h = x.abs().max(1e-300) * f64::EPSILON;
        for _ in 0..200 {
            if self.cdf(x + h)? >= u {
                let (mut lo, mut hi) = (x, x + h);
                for _ in 0..64 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.cdf(mid)? >= u {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(hi);
            }
            h *= 2.0;
        }
        Ok(x + h)
    }

    fn discrete_quantile(&self, u: f64) -> Result<f64> {
        let (lo, hi) = self.support()?;
        if self.cdf(lo)? >= u {
            return Ok(lo);
        }
        // find an upper bracket
        let mut upper = if hi.is_finite() {
            hi
        } else {
            let m = self.moments()?;
            (m.mean + 4.0 * m.variance.sqrt()).ceil().max(lo + 1.0)
        };
        while self.cdf(upper)? < u {
            upper = lo + 2.0 * (upper - lo).max(1.0);
        }
        let mut below = lo; // cdf(below) < u
        while upper - below > 1.0 {
            let mid = (0.5 * (below + upper)).floor();
            if self.cdf(mid)? >= u {
                upper = mid;
            } else {
                below = mid;
            }
        }
        Ok(upper)
    }

    // Safeguarded Newton on the CDF; returns the upper end of the final
    // bracket so that cdf(result) ≥ u always holds.
    fn invert_cdf(&self, u: f64) -> Result<f64> {
        let (lo0, hi0) = self.support()?;
        let mut lo = lo0;
        let mut hi = if hi0.is_finite() {
            hi0
        } else {
            let m = self.moments()?;
            let mut h = m.mean + 8.0 * m.variance.sqrt();
            while self.cdf(h)? < u {
                h = 2.0 * h + 1.0;
            }
            h
        };
        let mut x = 0.5 * (lo + hi);
        if let Family::Beta { .. } = self.0 {
        } else if let Ok(m) = self.moments() {
            // Wilson–Hilferty style start for the gamma-type families
            let z = std_normal_quantile(u)?;
            let guess = m.mean + z * m.variance.sqrt();
            if guess > lo && guess < hi {
                x = guess;
            }
        }
        for _ in 0..300 {
            let fx = self.cdf(x)?;
            if fx >= u {
                hi = x;
            } else {
                lo = x;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            let dens = self.mass_or_density(x)?;
            let newton = x - (fx - u) / dens;
            let mid = 0.5 * (lo + hi);
            let next = if dens > 0.0 && newton > lo && newton < hi && newton.is_finite() {
                newton
            } else {
                mid
            };
            if next == x {
                // Newton stalled on a rounding fixed point; bisect instead
                if mid == lo || mid == hi {
                    break;
                }
                x = mid;
            } else {
                x = next;
            }
        }
        Ok(hi)
    }

    /// Closed-form mean and variance.
    pub fn moments(&self) -> Result<Moments> {
        use Family::*;
        let (mean, variance) = match self.0 {
            Bernoulli { p } => (p, p * (1.0 - p)),
            Binomial { n, p } => {
                let n = n as f64;
                (n * p, n * p * (1.0 - p))
            }
            Geometric { p } => (1.0 / p, (1.0 - p) / (p * p)),
            Poisson { lambda } => (lambda, lambda),
            Hypergeometric { population, successes, draws } => {
                let (nn, kk, r) = (population as f64, successes as f64, draws as f64);
                let frac = kk / nn;
                let var = if population > 1 {
                    r * frac * (1.0 - frac) * (nn - r) / (nn - 1.0)
                } else {
                    0.0
                };
                (r * frac, var)
            }
            NegativeBinomial { r, p } => {
                let r = r as f64;
                (r / p, r * (1.0 - p) / (p * p))
            }
            DiscreteUniform { a, b } => {
                let m = (b - a + 1) as f64;
                ((a + b) as f64 / 2.0, (m * m - 1.0) / 12.0)
            }
            ContinuousUniform { a, b } => ((a + b) / 2.0, (b - a) * (b - a) / 12.0),
            Exponential { lambda } => (1.0 / lambda, 1.0 / (lambda * lambda)),
            Normal { mean, variance } | Laplace { mean, variance } => (mean, variance),
            Cauchy {} => {
                return Err(StatError::UndefinedMoment("the Cauchy distribution has no mean or variance".into()))
            }
            Gamma { shape, rate } => (shape / rate, shape / (rate * rate)),
            ChiSquare { k } => (k, 2.0 * k),
            Erlang { n, rate } => (n as f64 / rate, n as f64 / (rate * rate)),
            Rayleigh { variance } => (
                (variance * PI / 2.0).sqrt(),
                (4.0 - PI) / 2.0 * variance,
            ),
            Beta { alpha, beta } => {
                let s = alpha + beta;
                (alpha / s, alpha * beta / (s * s * (s + 1.0)))
            }
            Multinomial { .. } | Dirichlet { .. } => {
                return Err(StatError::Unsupported(format!(
                    "scalar moments of multivariate family {}; use mean_vector",
                    self.name()
                )))
            }
        };
        Ok(Moments { mean, variance })
    }

    /// Component means of a multivariate family.
    pub fn mean_vector(&self) -> Result<Vec<f64>> {
        match &self.0 {
            Family::Multinomial { n, probs } => Ok(probs.iter().map(|p| *n as f64 * p).collect()),
            Family::Dirichlet { alpha } => {
                let s: f64 = alpha.iter().sum();
                Ok(alpha.iter().map(|a| a / s).collect())
            }
            _ => Ok(vec![self.moments()?.mean]),
        }
    }

    /// Mode of a Beta(α, β) with α, β > 1.
    pub fn mode(&self) -> Result<f64> {
        match self.0 {
            Family::Beta { alpha, beta } if alpha > 1.0 && beta > 1.0 => {
                Ok((alpha - 1.0) / (alpha + beta - 2.0))
            }
            Family::Beta { .. } => Err(StatError::Unsupported(
                "beta mode is interior only for alpha, beta > 1".into(),
            )),
            Family::Normal { mean, .. } | Family::Laplace { mean, .. } => Ok(mean),
            Family::Cauchy {} => Ok(0.0),
            _ => Err(StatError::Unsupported(format!("mode of {}", self.name()))),
        }
    }

    /// Support points and probabilities of a univariate discrete family.
    ///
    /// Infinite supports are cut at the first point whose remaining tail mass
    /// is below [`TAIL_TRUNCATION`].
    pub fn pmf_table(&self) -> Result<PmfTable> {
        if !self.is_discrete() || self.is_multivariate() {
            return Err(StatError::Unsupported(format!("pmf table of {}", self.name())));
        }
        let (lo, hi) = self.support()?;
        let hi = if hi.is_finite() { hi } else { self.truncation_point()? };
        let mut pairs = Vec::with_capacity((hi - lo) as usize + 1);
        let mut v = lo;
        while v <= hi {
            pairs.push((v, self.mass_or_density(v)?));
            v += 1.0;
        }
        PmfTable::from_pairs(pairs)
    }

    /// Smallest support point whose upper tail mass is below [`TAIL_TRUNCATION`].
    pub fn truncation_point(&self) -> Result<f64> {
        let (lo, hi) = self.support()?;
        if hi.is_finite() {
            return Ok(hi);
        }
        let mut upper = lo.max(1.0);
        while self.sf(upper)? >= TAIL_TRUNCATION {
            upper *= 2.0;
        }
        let mut below = lo - 1.0;
        while upper - below > 1.0 {
            let mid = (0.5 * (below + upper)).floor();
            if self.sf(mid)? < TAIL_TRUNCATION {
                upper = mid;
            } else {
                below = mid;
            }
        }
        Ok(upper)
    }

    /// Draws `count` inverse-transform variates starting at draw `start` of a stream.
    pub fn draw(&self, key: StreamKey, start: u64, count: usize) -> Result<Vec<f64>> {
        self.univariate("sample")?;
        let mut out = Vec::with_capacity(count);
        let mut us = key.uniforms_from(start);
        for _ in 0..count {
            out.push(self.quantile(us.next_open01())?);
        }
        Ok(out)
    }

    /// `n` draws on stream 0 of `seed`, computed in parallel chunks.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        self.univariate("sample")?;
        if n == 0 {
            return Err(StatError::InsufficientData("sample size must be at least 1".into()));
        }
        let key = StreamKey::new(seed, 0);
        let chunks: Vec<Vec<f64>> = (0..n.div_ceil(SAMPLE_CHUNK))
            .into_par_iter()
            .map(|c| {
                let start = c * SAMPLE_CHUNK;
                let len = SAMPLE_CHUNK.min(n - start);
                self.draw(key, start as u64, len)
            })
            .collect::<Result<_>>()?;
        Ok(Sample::new(
            chunks.concat(),
            Provenance::synthetic(seed, serde_json::to_string(self).unwrap_or_default()),
        ))
    }

    /// `n` vector draws from a multinomial or dirichlet family.
    pub fn sample_vectors(&self, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        let key = StreamKey::new(seed, 0);
        match &self.0 {
            Family::Multinomial { n: trials, probs } => {
                let k = probs.len();
                (0..n)
                    .map(|j| {
                        let mut us = key.uniforms_from((j * k) as u64);
                        let mut remaining = *trials;
                        let mut rest = 1.0;
                        let mut out = Vec::with_capacity(k);
                        for (i, &p) in probs.iter().enumerate() {
                            let u = us.next_open01();
                            if i == k - 1 || remaining == 0 {
                                out.push(if i == k - 1 { remaining as f64 } else { 0.0 });
                                continue;
                            }
                            let q = (p / rest).clamp(0.0, 1.0);
                            let c = Distribution::binomial(remaining, q)?.quantile(u)?;
                            out.push(c);
                            remaining -= c as u64;
                            rest -= p;
                        }
                        Ok(out)
                    })
                    .collect()
            }
            Family::Dirichlet { alpha } => {
                let k = alpha.len();
                (0..n)
                    .map(|j| {
                        let mut us = key.uniforms_from((j * k) as u64);
                        let g = alpha
                            .iter()
                            .map(|&a| Distribution::gamma(a, 1.0)?.quantile(us.next_open01()))
                            .collect::<Result<Vec<f64>>>()?;
                        let s: f64 = g.iter().sum();
                        Ok(g.into_iter().map(|x| x / s).collect())
                    })
                    .collect()
            }
            _ => Err(StatError::Unsupported(format!(
                "vector sampling of univariate family {}",
                self.name()
            ))),
        }
    }
}

fn gamma_ln_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x < 0.0 {
        return f64::NEG_INFINITY;
    }
    if x == 0.0 {
        return if shape < 1.0 {
            f64::INFINITY
        } else if shape == 1.0 {
            rate.ln()
        } else {
            f64::NEG_INFINITY
        };
    }
    shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)
}

/// Poisson(np) for comparison with Binomial(n, p).
pub fn poisson_approx_binomial(n: u64, p: f64) -> Result<Distribution> {
    if n == 0 || !(p > 0.0 && p < 1.0) {
        return Err(StatError::ParameterDomain(format!("need n ≥ 1 and 0 < p < 1, got n={n}, p={p}")));
    }
    Distribution::poisson(n as f64 * p)
}

/// Total-variation distance ½ Σ |p(x) − q(x)| between two discrete families.
pub fn total_variation(a: &Distribution, b: &Distribution) -> Result<f64> {
    let ta = a.pmf_table()?;
    let tb = b.pmf_table()?;
    let mut points: Vec<f64> = ta.values().iter().chain(tb.values()).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let covered: f64 = points.iter().map(|&x| (ta.prob(x) - tb.prob(x)).abs()).sum();
    // mass outside the union of truncated supports
    let missing = (1.0 - ta.total()).max(0.0) + (1.0 - tb.total()).max(0.0);
    Ok(0.5 * (covered + missing))
}

/// Multivariate hypergeometric PMF: drawing `counts[i]` items from each
/// category of size `sizes[i]` in a draw of Σ counts without replacement.
pub fn multivariate_hypergeometric_pmf(sizes: &[u64], counts: &[u64]) -> Result<f64> {
    if sizes.len() != counts.len() || sizes.is_empty() {
        return Err(StatError::ParameterDomain("sizes and counts must have equal, non-zero length".into()));
    }
    if counts.iter().zip(sizes).any(|(c, s)| c > s) {
        return Ok(0.0);
    }
    let total: u64 = sizes.iter().sum();
    let drawn: u64 = counts.iter().sum();
    let ln: f64 = counts.iter().zip(sizes).map(|(&c, &s)| ln_choose(s, c)).sum::<f64>()
        - ln_choose(total, drawn);
    Ok(ln.exp())
}
