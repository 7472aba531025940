//! Single-parameter point estimation: MLE, method of moments and MAP.
//!
//! Likelihoods are always handled in log space. A log-likelihood of −∞
//! marks data that is impossible under θ (for example an observation above
//! θ in the uniform family).

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{Result, StatError};
use crate::pmf::PmfTable;
use crate::special::ln_factorial;

pub const GOLDEN_TOL: f64 = 1e-10;
pub const GOLDEN_MAX_ITER: usize = 200;

/// Family with one unknown scalar θ.
///
/// | family | θ | domain |
/// |---|---|---|
/// | bernoulli | success probability | [0, 1] |
/// | poisson | rate | (0, ∞) |
/// | exponential | rate | (0, ∞) |
/// | uniform_zero_theta | upper end of Unif(0, θ) | (0, ∞) |
/// | normal_known_variance | mean | ℝ |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ParametricFamily {
    Bernoulli,
    Poisson,
    Exponential,
    UniformZeroTheta,
    NormalKnownVariance { variance: f64 },
}

impl std::str::FromStr for ParametricFamily {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ber" | "bernoulli" => Ok(Self::Bernoulli),
            "pois" | "poisson" => Ok(Self::Poisson),
            "exp" | "exponential" => Ok(Self::Exponential),
            "unif" | "uniform" => Ok(Self::UniformZeroTheta),
            _ => {
                if let Some(v) = s.strip_prefix("normal:") {
                    let variance = v
                        .parse::<f64>()
                        .map_err(|_| StatError::Usage(format!("bad variance in `{s}`")))?;
                    if !(variance > 0.0) {
                        return Err(StatError::ParameterDomain(format!("variance must be positive, got {variance}")));
                    }
                    return Ok(Self::NormalKnownVariance { variance });
                }
                Err(StatError::Usage(format!(
                    "unknown family `{s}` (ber, pois, exp, unif, normal:<variance>)"
                )))
            }
        }
    }
}

impl ParametricFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::Poisson => "poisson",
            Self::Exponential => "exponential",
            Self::UniformZeroTheta => "uniform_zero_theta",
            Self::NormalKnownVariance { .. } => "normal_known_variance",
        }
    }

    /// Distribution of one observation under θ.
    pub fn distribution(&self, theta: f64) -> Result<Distribution> {
        self.check_theta(theta)?;
        match *self {
            Self::Bernoulli => Distribution::bernoulli(theta),
            Self::Poisson => Distribution::poisson(theta),
            Self::Exponential => Distribution::exponential(theta),
            Self::UniformZeroTheta => Distribution::uniform(0.0, theta),
            Self::NormalKnownVariance { variance } => Distribution::normal(theta, variance),
        }
    }

    pub fn check_theta(&self, theta: f64) -> Result<()> {
        let ok = match self {
            Self::Bernoulli => (0.0..=1.0).contains(&theta),
            Self::NormalKnownVariance { .. } => theta.is_finite(),
            _ => theta > 0.0 && theta.is_finite(),
        };
        if !ok {
            return Err(StatError::ParameterDomain(format!("θ = {theta} is outside the {} domain", self.name())));
        }
        Ok(())
    }

    fn is_regular(&self) -> bool {
        !matches!(self, Self::UniformZeroTheta)
    }

    fn check_data(&self, data: &[f64]) -> Result<()> {
        if data.is_empty() {
            return Err(StatError::InsufficientData("no observations".into()));
        }
        for (i, &x) in data.iter().enumerate() {
            let ok = match self {
                Self::Bernoulli => x == 0.0 || x == 1.0,
                Self::Poisson => x >= 0.0 && x.fract() == 0.0 && x.is_finite(),
                Self::Exponential | Self::UniformZeroTheta => x >= 0.0 && x.is_finite(),
                Self::NormalKnownVariance { .. } => x.is_finite(),
            };
            if !ok {
                return Err(StatError::Support(format!(
                    "observation {i} = {x} is outside the {} support",
                    self.name()
                )));
            }
        }
        Ok(())
    }
}

fn xlogy(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * p.ln()
    }
}

fn sum(data: &[f64]) -> f64 {
    data.iter().sum()
}

fn max(data: &[f64]) -> f64 {
    data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// ln L(θ | x); −∞ when some observation has zero likelihood.
pub fn log_likelihood(f: &ParametricFamily, theta: f64, data: &[f64]) -> Result<f64> {
    f.check_theta(theta)?;
    f.check_data(data)?;
    let n = data.len() as f64;
    let s = sum(data);
    Ok(match *f {
        ParametricFamily::Bernoulli => xlogy(s, theta) + xlogy(n - s, 1.0 - theta),
        ParametricFamily::Poisson => {
            xlogy(s, theta) - n * theta - data.iter().map(|&x| ln_factorial(x as u64)).sum::<f64>()
        }
        ParametricFamily::Exponential => n * theta.ln() - theta * s,
        ParametricFamily::UniformZeroTheta => {
            if max(data) > theta {
                f64::NEG_INFINITY
            } else {
                -n * theta.ln()
            }
        }
        ParametricFamily::NormalKnownVariance { variance } => {
            let ss: f64 = data.iter().map(|x| (x - theta) * (x - theta)).sum();
            -0.5 * n * (2.0 * std::f64::consts::PI * variance).ln() - ss / (2.0 * variance)
        }
    })
}

/// ∂/∂θ ln L(θ | x).
pub fn score(f: &ParametricFamily, theta: f64, data: &[f64]) -> Result<f64> {
    f.check_theta(theta)?;
    f.check_data(data)?;
    let n = data.len() as f64;
    let s = sum(data);
    match *f {
        ParametricFamily::Bernoulli => Ok(s / theta - (n - s) / (1.0 - theta)),
        ParametricFamily::Poisson => Ok(s / theta - n),
        ParametricFamily::Exponential => Ok(n / theta - s),
        ParametricFamily::NormalKnownVariance { variance } => Ok((s - n * theta) / variance),
        ParametricFamily::UniformZeroTheta => Err(StatError::NonRegular(
            "the support of Unif(0, θ) depends on θ".into(),
        )),
    }
}

/// ∂²/∂θ² ln L(θ | x). For Bernoulli this is −Σx/θ² − Σ(1−x)/(1−θ)².
pub fn score_derivative(f: &ParametricFamily, theta: f64, data: &[f64]) -> Result<f64> {
    f.check_theta(theta)?;
    f.check_data(data)?;
    let n = data.len() as f64;
    let s = sum(data);
    match *f {
        ParametricFamily::Bernoulli => Ok(-s / (theta * theta) - (n - s) / ((1.0 - theta) * (1.0 - theta))),
        ParametricFamily::Poisson => Ok(-s / (theta * theta)),
        ParametricFamily::Exponential => Ok(-n / (theta * theta)),
        ParametricFamily::NormalKnownVariance { variance } => Ok(-n / variance),
        ParametricFamily::UniformZeroTheta => Err(StatError::NonRegular(
            "the support of Unif(0, θ) depends on θ".into(),
        )),
    }
}

/// Expected information I(θ) of n observations.
///
/// Returns +∞ at a boundary θ where it diverges (Bernoulli at 0 or 1).
pub fn fisher_information(f: &ParametricFamily, theta: f64, n: u64) -> Result<f64> {
    f.check_theta(theta)?;
    if n == 0 {
        return Err(StatError::InsufficientData("n must be at least 1".into()));
    }
    let n = n as f64;
    match *f {
        ParametricFamily::Bernoulli => {
            let v = theta * (1.0 - theta);
            Ok(if v == 0.0 { f64::INFINITY } else { n / v })
        }
        ParametricFamily::Poisson => Ok(n / theta),
        ParametricFamily::Exponential => Ok(n / (theta * theta)),
        ParametricFamily::NormalKnownVariance { variance } => Ok(n / variance),
        ParametricFamily::UniformZeroTheta => Err(StatError::NonRegular(
            "Unif(0, θ) has θ-dependent support; Fisher information and the CRLB do not apply".into(),
        )),
    }
}

/// e = I⁻¹(θ) / Var(θ̂).
pub fn efficiency(f: &ParametricFamily, estimator_variance: f64, theta: f64, n: u64) -> Result<f64> {
    if !(estimator_variance > 0.0) {
        return Err(StatError::ParameterDomain(format!(
            "estimator variance must be positive, got {estimator_variance}"
        )));
    }
    let info = fisher_information(f, theta, n)?;
    Ok(1.0 / info / estimator_variance)
}

/// T(x): Σx for the exponential-family members, max(x) for Unif(0, θ).
pub fn sufficient_statistic(f: &ParametricFamily, data: &[f64]) -> Result<f64> {
    f.check_data(data)?;
    Ok(match f {
        ParametricFamily::UniformZeroTheta => max(data),
        _ => sum(data),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mle,
    Mom,
    Map,
}

impl std::str::FromStr for Method {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mle" => Ok(Method::Mle),
            "mom" => Ok(Method::Mom),
            "map" => Ok(Method::Map),
            _ => Err(StatError::Usage(format!("unknown method `{s}` (mle, mom, map)"))),
        }
    }
}

/// Estimate with likelihood and information diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub method: Method,
    pub family: ParametricFamily,
    pub n: usize,
    pub estimate: f64,
    /// ln L(θ̂ | x); `None` when θ̂ makes the data impossible.
    pub log_likelihood: Option<f64>,
    /// I(θ̂); `None` for non-regular families or when infinite.
    pub fisher_information: Option<f64>,
    pub fisher_infinite: bool,
    /// 1 / I(θ̂).
    pub crlb: Option<f64>,
    /// Efficiency when the estimator's variance is known in closed form.
    pub efficiency: Option<f64>,
    /// √CRLB, or the closed-form standard error where that is known.
    pub standard_error: Option<f64>,
    /// θ̂ lies on the edge of the parameter domain.
    pub boundary: bool,
    pub notes: Vec<String>,
}

impl EstimatorReport {
    fn build(method: Method, f: ParametricFamily, data: &[f64], estimate: f64) -> Result<Self> {
        let n = data.len();
        let mut notes = Vec::new();
        let boundary = match f {
            ParametricFamily::Bernoulli => estimate == 0.0 || estimate == 1.0,
            ParametricFamily::UniformZeroTheta => method == Method::Mle,
            _ => false,
        };
        let in_domain = f.check_theta(estimate).is_ok();
        let ll = if in_domain && !data.is_empty() {
            let v = log_likelihood(&f, estimate, data)?;
            v.is_finite().then_some(v)
        } else {
            None
        };
        if !in_domain {
            notes.push(format!("estimate {estimate} lies outside the parameter domain"));
        }
        let (info, infinite) = if in_domain && n > 0 && f.is_regular() {
            let i = fisher_information(&f, estimate, n as u64)?;
            if i.is_finite() {
                (Some(i), false)
            } else {
                notes.push("Fisher information is infinite at a boundary estimate".into());
                (None, true)
            }
        } else {
            if !f.is_regular() {
                notes.push("non-regular family: no Fisher information or CRLB".into());
            }
            (None, false)
        };
        let crlb = info.map(|i| 1.0 / i);
        // variance of θ̂ is known for sample-mean estimators
        let mean_estimator = matches!(method, Method::Mle | Method::Mom)
            && matches!(
                f,
                ParametricFamily::Bernoulli | ParametricFamily::Poisson | ParametricFamily::NormalKnownVariance { .. }
            );
        let efficiency = if mean_estimator { crlb.map(|_| 1.0) } else { None };
        let standard_error = match f {
            ParametricFamily::UniformZeroTheta if in_domain && n > 0 && method == Method::Mle => {
                // Var(max) = nθ²/((n+1)²(n+2))
                let nf = n as f64;
                Some(estimate * (nf / ((nf + 1.0) * (nf + 1.0) * (nf + 2.0))).sqrt())
            }
            _ => crlb.map(f64::sqrt),
        };
        Ok(Self {
            method,
            family: f,
            n,
            estimate,
            log_likelihood: ll,
            fisher_information: info,
            fisher_infinite: infinite,
            crlb,
            efficiency,
            standard_error,
            boundary,
            notes,
        })
    }
}

/// Maximum-likelihood estimate in closed form.
pub fn mle(f: &ParametricFamily, data: &[f64]) -> Result<EstimatorReport> {
    f.check_data(data)?;
    let n = data.len() as f64;
    let mean = sum(data) / n;
    let est = match f {
        ParametricFamily::Bernoulli | ParametricFamily::Poisson | ParametricFamily::NormalKnownVariance { .. } => mean,
        ParametricFamily::Exponential => {
            if mean == 0.0 {
                return Err(StatError::Domain("exponential MLE is undefined when every observation is zero".into()));
            }
            1.0 / mean
        }
        ParametricFamily::UniformZeroTheta => {
            let m = max(data);
            if m == 0.0 {
                return Err(StatError::Domain("uniform MLE is undefined when every observation is zero".into()));
            }
            m
        }
    };
    if *f == ParametricFamily::Poisson && est == 0.0 {
        let mut r = EstimatorReport::build(Method::Mle, *f, &[], 0.0)?;
        r.n = data.len();
        r.boundary = true;
        r.notes = vec!["all counts are zero; the likelihood is maximized at the boundary θ = 0".into()];
        return Ok(r);
    }
    EstimatorReport::build(Method::Mle, *f, data, est)
}

/// Method-of-moments estimate from the first moment.
pub fn mom(f: &ParametricFamily, data: &[f64]) -> Result<EstimatorReport> {
    f.check_data(data)?;
    let mean = sum(data) / data.len() as f64;
    let est = match f {
        ParametricFamily::Exponential => {
            if mean == 0.0 {
                return Err(StatError::Domain("exponential MoM is undefined when every observation is zero".into()));
            }
            1.0 / mean
        }
        ParametricFamily::UniformZeroTheta => 2.0 * mean,
        _ => mean,
    };
    let mut r = EstimatorReport::build(Method::Mom, *f, data, est)?;
    if *f == ParametricFamily::UniformZeroTheta && est < max(data) {
        r.notes.push(format!(
            "estimate {est} is below the largest observation {}; the data are impossible under it",
            max(data)
        ));
    }
    Ok(r)
}

/// Prior on θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorSpec {
    /// Finite table over θ values.
    Discrete { table: PmfTable },
    Beta { alpha: f64, beta: f64 },
    Dirichlet { alpha: Vec<f64> },
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PriorSpec::Discrete { table } => {
                if table.is_empty() {
                    return Err(StatError::ParameterDomain("discrete prior is empty".into()));
                }
                table.validate_total(1e-9)
            }
            PriorSpec::Beta { alpha, beta } => Distribution::beta(*alpha, *beta).map(|_| ()),
            PriorSpec::Dirichlet { alpha } => Distribution::dirichlet(alpha.clone()).map(|_| ()),
        }
    }
}

/// Maximum a posteriori estimate.
///
/// A discrete prior is searched exhaustively; on ties the smallest θ wins.
/// A Beta prior with Bernoulli data uses the posterior mode
/// (α − 1 + Σx)/(α + β − 2 + n) and accepts empty data.
pub fn map(f: &ParametricFamily, data: &[f64], prior: &PriorSpec) -> Result<EstimatorReport> {
    prior.validate()?;
    match prior {
        PriorSpec::Discrete { table } => {
            f.check_data(data)?;
            let mut best: Option<(f64, f64)> = None;
            for (theta, p) in table.iter() {
                if p == 0.0 || f.check_theta(theta).is_err() {
                    continue;
                }
                let lp = p.ln() + log_likelihood(f, theta, data)?;
                if lp == f64::NEG_INFINITY {
                    continue;
                }
                // strict comparison keeps the smallest θ on ties
                if best.is_none_or(|(_, b)| lp > b) {
                    best = Some((theta, lp));
                }
            }
            let (theta, _) = best.ok_or(StatError::DegenerateEvidence)?;
            EstimatorReport::build(Method::Map, *f, data, theta)
        }
        PriorSpec::Beta { alpha, beta } => {
            if *f != ParametricFamily::Bernoulli {
                return Err(StatError::Unsupported(format!(
                    "a Beta prior is conjugate to the Bernoulli likelihood, not {}",
                    f.name()
                )));
            }
            if !data.is_empty() {
                f.check_data(data)?;
            }
            let n = data.len() as f64;
            let s = sum(data);
            let (a, b) = (alpha + s, beta + n - s);
            if !(a >= 1.0 && b >= 1.0 && a + b > 2.0) {
                return Err(StatError::Unsupported(format!(
                    "posterior Beta({a}, {b}) has no interior mode"
                )));
            }
            let mode = (a - 1.0) / (a + b - 2.0);
            EstimatorReport::build(Method::Map, *f, data, mode)
        }
        PriorSpec::Dirichlet { .. } => Err(StatError::Unsupported(
            "a Dirichlet prior applies to categorical data; use map_dirichlet_categorical".into(),
        )),
    }
}

/// MAP of category probabilities under a Dirichlet(α) prior:
/// (αᵢ − 1 + cᵢ)/(Σα − K + n).
pub fn map_dirichlet_categorical(alpha: &[f64], counts: &[u64]) -> Result<Vec<f64>> {
    Distribution::dirichlet(alpha.to_vec())?;
    if alpha.len() != counts.len() {
        return Err(StatError::ParameterDomain("alpha and counts must have equal length".into()));
    }
    let post: Vec<f64> = alpha.iter().zip(counts).map(|(a, &c)| a + c as f64).collect();
    if post.iter().any(|&a| a < 1.0) {
        return Err(StatError::Unsupported("posterior has no interior mode (some αᵢ + cᵢ < 1)".into()));
    }
    let denom: f64 = post.iter().map(|a| a - 1.0).sum();
    if !(denom > 0.0) {
        return Err(StatError::Unsupported("posterior is flat; mode undefined".into()));
    }
    Ok(post.iter().map(|a| (a - 1.0) / denom).collect())
}

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub argmax: f64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Golden-section search for the maximum of a unimodal `g` on [lo, hi].
pub fn golden_section_max<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<Maximum> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(StatError::ParameterDomain(format!("bad bracket [{lo}, {hi}]")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut it = 0;
    while (b - a) > tol * (1.0 + a.abs().max(b.abs())) && it < max_iter {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
        it += 1;
    }
    let mut best = (0.5 * (a + b), g(0.5 * (a + b)));
    // the bracket ends are candidates too, for boundary maxima
    for x in [lo, hi] {
        let v = g(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(Maximum {
        argmax: best.0,
        value: best.1,
        iterations: it,
        converged: it < max_iter,
    })
}

/// MLE by golden-section search over the θ domain, for cross-checking closed forms.
pub fn mle_numeric(f: &ParametricFamily, data: &[f64]) -> Result<Maximum> {
    f.check_data(data)?;
    let ll = |t: f64| log_likelihood(f, t, data).unwrap_or(f64::NEG_INFINITY);
    let (lo, hi) = match f {
        ParametricFamily::Bernoulli => (0.0, 1.0),
        ParametricFamily::NormalKnownVariance { .. } => {
            let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = max(data);
            if lo == hi {
                return Ok(Maximum { argmax: lo, value: ll(lo), iterations: 0, converged: true });
            }
            (lo, hi)
        }
        _ => {
            // expand until the log-likelihood turns down
            let mut hi = 1.0;
            while ll(2.0 * hi) >= ll(hi) && hi < 1e300 {
                hi *= 2.0;
            }
            (f64::MIN_POSITIVE, 2.0 * hi)
        }
    };
    let mut m = golden_section_max(&ll, lo, hi, GOLDEN_TOL, GOLDEN_MAX_ITER)?;
    // Near the optimum ln L is flat to within rounding, so comparisons alone
    // stall at about √ε relative error; finish with Newton steps on the score.
    for _ in 0..5 {
        let (Ok(s), Ok(h)) = (score(f, m.argmax, data), score_derivative(f, m.argmax, data)) else { break };
        if !(h < 0.0) || !s.is_finite() {
            break;
        }
        let next = m.argmax - s / h;
        // ln L cannot tell the points apart here; judge by the score instead
        let s_next = score(f, next, data).unwrap_or(f64::INFINITY);
        if !(next > lo && next < hi) || !(s_next.abs() <= s.abs()) {
            break;
        }
        let done = (next - m.argmax).abs() <= f64::EPSILON * next.abs();
        m.argmax = next;
        m.value = ll(next);
        if done {
            break;
        }
    }
    Ok(m)
}
