//! Tail bounds, the confidence radii they imply, and sample-size solvers.
//!
//! Bounds are two-sided deviation bounds unless a query asks for the
//! symmetric halving, which divides a two-sided bound by two on the
//! assumption that both tails carry equal mass. That assumption is not
//! checked, so halving is opt-in.

use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, Family};
use crate::error::{Result, StatError};
use crate::special::std_normal_quantile;

/// Constant of the Berry–Esseen inequality used throughout.
pub const BERRY_ESSEEN_C: f64 = 0.77;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Markov,
    Chebyshev,
    ChernoffSubgaussian,
    Hoeffding,
}

impl std::str::FromStr for BoundKind {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markov" => Ok(BoundKind::Markov),
            "chebyshev" => Ok(BoundKind::Chebyshev),
            "chernoff" | "chernoff-subgaussian" => Ok(BoundKind::ChernoffSubgaussian),
            "hoeffding" => Ok(BoundKind::Hoeffding),
            _ => Err(StatError::Usage(format!(
                "unknown bound `{s}` (markov, chebyshev, chernoff, hoeffding)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    /// P(|X̄ − μ| ≥ ε), or P(X ≥ ε) for Markov.
    #[default]
    TwoSided,
    /// Two-sided bound divided by two.
    HalvedSymmetric,
}

/// Parameters of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub kind: BoundKind,
    /// Mean of the non-negative variable (Markov only).
    #[serde(default)]
    pub mean: f64,
    /// Variance (Chebyshev) or sub-Gaussian variance proxy (Chernoff).
    #[serde(default)]
    pub variance: f64,
    /// Support (a, b) for Hoeffding.
    #[serde(default)]
    pub range: Option<(f64, f64)>,
    pub epsilon: f64,
    #[serde(default = "one")]
    pub n: u64,
    #[serde(default)]
    pub sidedness: Sidedness,
    /// Target failure probability for the radius.
    #[serde(default)]
    pub delta: Option<f64>,
}

fn one() -> u64 {
    1
}

impl BoundQuery {
    pub fn new(kind: BoundKind, epsilon: f64) -> Self {
        Self {
            kind,
            mean: 0.0,
            variance: 0.0,
            range: None,
            epsilon,
            n: 1,
            sidedness: Sidedness::TwoSided,
            delta: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Bound clipped to [0, 1].
    pub bound: f64,
    /// Bound before clipping.
    pub raw: f64,
    /// True when the raw bound exceeded one.
    pub vacuous: bool,
    pub sidedness: Sidedness,
    /// Deviation achieving the target δ, when one was given.
    pub radius: Option<f64>,
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(StatError::ParameterDomain("n must be at least 1".into()));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(StatError::ParameterDomain(format!("{name} must be non-negative and finite, got {v}")));
    }
    Ok(())
}

fn check_range(range: Option<(f64, f64)>) -> Result<f64> {
    match range {
        Some((a, b)) if a.is_finite() && b.is_finite() && a < b => Ok(b - a),
        _ => Err(StatError::ParameterDomain(format!("hoeffding needs a finite range a < b, got {range:?}"))),
    }
}

/// mean/ε before clipping.
fn markov_raw(mean: f64, eps: f64) -> Result<f64> {
    check_nonneg("mean", mean)?;
    if !(eps > 0.0) {
        return Err(StatError::ParameterDomain(format!("threshold must be positive, got {eps}")));
    }
    Ok(mean / eps)
}

fn chebyshev_raw(variance: f64, eps: f64, n: u64) -> Result<f64> {
    check_nonneg("variance", variance)?;
    check_n(n)?;
    if !(eps > 0.0) {
        return Err(StatError::ParameterDomain(format!("deviation must be positive, got {eps}")));
    }
    Ok(variance / (n as f64 * eps * eps))
}

fn chernoff_raw(variance: f64, eps: f64, n: u64) -> Result<f64> {
    check_nonneg("variance proxy", variance)?;
    check_n(n)?;
    check_nonneg("deviation", eps)?;
    if variance == 0.0 {
        return Ok(if eps > 0.0 { 0.0 } else { 2.0 });
    }
    Ok(2.0 * (-(n as f64) * eps * eps / (2.0 * variance)).exp())
}

fn hoeffding_raw(width: f64, eps: f64, n: u64) -> Result<f64> {
    check_n(n)?;
    check_nonneg("deviation", eps)?;
    Ok(2.0 * (-2.0 * n as f64 * eps * eps / (width * width)).exp())
}

/// P(X ≥ ε) ≤ min(1, E[X]/ε) for non-negative X.
pub fn markov_bound(mean: f64, eps: f64) -> Result<f64> {
    Ok(markov_raw(mean, eps)?.min(1.0))
}

/// P(|X̄ − μ| ≥ ε) ≤ σ²/(nε²).
pub fn chebyshev_bound(variance: f64, eps: f64, n: u64) -> Result<f64> {
    Ok(chebyshev_raw(variance, eps, n)?.min(1.0))
}

/// P(|X̄ − μ| ≥ ε) ≤ 2 exp(−nε²/(2σ²)) for σ²-sub-Gaussian summands.
pub fn chernoff_subgaussian_bound(variance: f64, eps: f64, n: u64) -> Result<f64> {
    Ok(chernoff_raw(variance, eps, n)?.min(1.0))
}

/// P(|X̄ − μ| ≥ ε) ≤ 2 exp(−2nε²/(b − a)²) for summands in [a, b].
pub fn hoeffding_bound(a: f64, b: f64, eps: f64, n: u64) -> Result<f64> {
    let w = check_range(Some((a, b)))?;
    Ok(hoeffding_raw(w, eps, n)?.min(1.0))
}

fn raw_bound(q: &BoundQuery, eps: f64) -> Result<f64> {
    match q.kind {
        BoundKind::Markov => markov_raw(q.mean, eps),
        BoundKind::Chebyshev => chebyshev_raw(q.variance, eps, q.n),
        BoundKind::ChernoffSubgaussian => chernoff_raw(q.variance, eps, q.n),
        BoundKind::Hoeffding => hoeffding_raw(check_range(q.range)?, eps, q.n),
    }
}

fn halving(s: Sidedness) -> f64 {
    match s {
        Sidedness::TwoSided => 1.0,
        Sidedness::HalvedSymmetric => 0.5,
    }
}

/// Evaluates a query, clipping to [0, 1] and solving for the radius if δ is set.
pub fn evaluate(q: &BoundQuery) -> Result<BoundReport> {
    let raw = halving(q.sidedness) * raw_bound(q, q.epsilon)?;
    let radius = match q.delta {
        Some(d) => Some(confidence_radius(q, d)?),
        None => None,
    };
    Ok(BoundReport {
        kind: q.kind,
        bound: raw.clamp(0.0, 1.0),
        raw,
        vacuous: raw > 1.0,
        sidedness: q.sidedness,
        radius,
    })
}

/// Smallest deviation whose bound is at most δ.
///
/// Chebyshev: σ/√(nδ). Chernoff: σ√((2/n) ln(2/δ)). Hoeffding:
/// (b − a)√(ln(2/δ)/(2n)). Markov: E[X]/δ. With halving, δ is doubled first.
pub fn confidence_radius(q: &BoundQuery, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(StatError::ParameterDomain(format!("delta must lie in (0, 1), got {delta}")));
    }
    check_n(q.n)?;
    let d = delta / halving(q.sidedness);
    let n = q.n as f64;
    let r = match q.kind {
        BoundKind::Markov => {
            check_nonneg("mean", q.mean)?;
            q.mean / d
        }
        BoundKind::Chebyshev => {
            check_nonneg("variance", q.variance)?;
            (q.variance / (n * d)).sqrt()
        }
        BoundKind::ChernoffSubgaussian => {
            check_nonneg("variance proxy", q.variance)?;
            (q.variance * 2.0 / n * (2.0 / d).ln()).sqrt()
        }
        BoundKind::Hoeffding => check_range(q.range)? * ((2.0 / d).ln() / (2.0 * n)).sqrt(),
    };
    // the closed form can miss by an ulp; step up until the bound holds
    let mut r = r;
    if r > 0.0 {
        for _ in 0..8 {
            if halving(q.sidedness) * raw_bound(q, r)? <= delta {
                break;
            }
            r = r.next_up();
        }
    }
    Ok(r)
}

/// Least n with z σ/√n ≤ ε, where z is the (1 − α/2) normal quantile.
pub fn clt_sample_size(eps: f64, alpha: f64, variance: f64) -> Result<u64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatError::ParameterDomain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    clt_sample_size_with_z(eps, std_normal_quantile(1.0 - alpha / 2.0)?, variance)
}

/// Least n with z σ/√n ≤ ε for a given critical value z.
pub fn clt_sample_size_with_z(eps: f64, z: f64, variance: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(StatError::ParameterDomain(format!("deviation must be positive, got {eps}")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(StatError::ParameterDomain(format!("critical value must be positive, got {z}")));
    }
    check_nonneg("variance", variance)?;
    let sd = variance.sqrt();
    let x = (z * sd / eps).powi(2);
    // x may sit a few ulps above an exact integer (1.96·0.5/0.01 squared)
    let mut n = (x * (1.0 - 4.0 * f64::EPSILON)).ceil().max(1.0) as u64;
    let ok = |n: u64| z * sd / (n as f64).sqrt() <= eps * (1.0 + 4.0 * f64::EPSILON);
    while !ok(n) {
        n += 1;
    }
    while n > 1 && ok(n - 1) {
        n -= 1;
    }
    Ok(n)
}

/// C ρ / (σ³ √n) with ρ = E|X − μ|³ and C = 0.77.
pub fn berry_esseen_error(third_abs_moment: f64, variance: f64, n: u64) -> Result<f64> {
    check_nonneg("third absolute moment", third_abs_moment)?;
    check_n(n)?;
    if !(variance > 0.0) {
        return Err(StatError::ParameterDomain(format!("variance must be positive, got {variance}")));
    }
    Ok(BERRY_ESSEEN_C * third_abs_moment / (variance.powf(1.5) * (n as f64).sqrt()))
}

/// One line of a bound comparison for the mean of n draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub epsilon: f64,
    pub markov: Option<f64>,
    pub chebyshev: f64,
    pub chernoff: Option<f64>,
    pub hoeffding: Option<f64>,
    /// Exact P(|X̄ − μ| ≥ ε) when the sum has a known law.
    pub exact: Option<f64>,
}

/// Bounds on P(|X̄ − μ| ≥ ε) for each ε.
///
/// Markov is applied to X̄ ≥ μ + ε and needs a non-negative support.
/// Chernoff uses the proxy (b − a)²/4 of a bounded variable. Exact values are
/// available for Bernoulli and binomial summands.
pub fn compare_bounds(d: &Distribution, n: u64, epsilons: &[f64]) -> Result<Vec<CompareRow>> {
    check_n(n)?;
    let m = d.moments()?;
    let (lo, hi) = d.support()?;
    let bounded = lo.is_finite() && hi.is_finite();
    let sum_law = match d.family() {
        Family::Bernoulli { p } => Some(Distribution::binomial(n, *p)?),
        Family::Binomial { n: k, p } => Some(Distribution::binomial(n * k, *p)?),
        _ => None,
    };
    epsilons
        .iter()
        .map(|&eps| {
            let exact = match &sum_law {
                Some(s) => {
                    let t = s.pmf_table()?;
                    let nf = n as f64;
                    // relative slack keeps boundary points such as |x̄ − μ| = ε inside
                    let slack = 1e-12 * (1.0 + m.mean.abs());
                    Some(t.iter().filter(|(x, _)| (x / nf - m.mean).abs() >= eps - slack).map(|(_, p)| p).sum())
                }
                None => None,
            };
            Ok(CompareRow {
                epsilon: eps,
                markov: if lo >= 0.0 { Some(markov_bound(m.mean, m.mean + eps)?) } else { None },
                chebyshev: chebyshev_bound(m.variance, eps, n)?,
                chernoff: if bounded {
                    Some(chernoff_subgaussian_bound((hi - lo).powi(2) / 4.0, eps, n)?)
                } else {
                    None
                },
                hoeffding: if bounded { Some(hoeffding_bound(lo, hi, eps, n)?) } else { None },
                exact,
            })
        })
        .collect()
}

/// CSV text with header `epsilon,markov,chebyshev,chernoff,hoeffding,exact`.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let f = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
    let mut out = String::from("epsilon,markov,chebyshev,chernoff,hoeffding,exact\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.epsilon,
            f(r.markov),
            f(Some(r.chebyshev)),
            f(r.chernoff),
            f(r.hoeffding),
            f(r.exact)
        ));
    }
    out
}
