//! Distributions of functions of random variables.
//!
//! Discrete maps push a PMF forward exactly. Continuous results are density
//! handles evaluated pointwise by adaptive quadrature, with the kinks of the
//! integrand passed in as breakpoints.

use std::fmt;
use std::sync::Arc;

use crate::distributions::{Distribution, Family};
use crate::error::{Result, StatError};
use crate::pmf::PmfTable;
use crate::quad::{integrate_pieces, Endpoints};

/// Absolute quadrature tolerance per evaluation point.
pub const QUAD_TOL: f64 = 1e-8;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A finite table x → g(x).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMap {
    pairs: Vec<(f64, f64)>,
}

impl DiscreteMap {
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(StatError::Specification("map lists the same input twice".into()));
        }
        Ok(Self { pairs })
    }

    /// Tabulates `g` over `support`; `None` marks a point where g is undefined.
    pub fn from_fn<G: Fn(f64) -> Option<f64>>(support: &[f64], g: G) -> Result<Self> {
        let pairs = support
            .iter()
            .map(|&x| match g(x) {
                Some(y) if y.is_finite() => Ok((x, y)),
                _ => Err(StatError::Mapping(format!("x = {x}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    pub fn get(&self, x: f64) -> Option<f64> {
        self.pairs
            .binary_search_by(|p| p.0.total_cmp(&x))
            .ok()
            .map(|i| self.pairs[i].1)
    }
}

/// Push-forward p_Y(y) = Σ_{x : g(x) = y} p_X(x).
pub fn derived_pmf(input: &PmfTable, g: &DiscreteMap) -> Result<PmfTable> {
    let pairs = input
        .iter()
        .map(|(x, p)| g.get(x).map(|y| (y, p)).ok_or_else(|| StatError::Mapping(format!("x = {x}"))))
        .collect::<Result<Vec<_>>>()?;
    PmfTable::from_pairs(pairs)
}

/// Push-forward of a discrete distribution under a closure.
///
/// Infinite supports are truncated as in [`Distribution::pmf_table`].
pub fn derived_pmf_of<G: Fn(f64) -> Option<f64>>(d: &Distribution, g: G) -> Result<PmfTable> {
    let t = d.pmf_table()?;
    let map = DiscreteMap::from_fn(t.values(), g)?;
    derived_pmf(&t, &map)
}

/// p_Z(z) = Σ p_X(x) p_Y(z − x).
pub fn sum_pmf(a: &PmfTable, b: &PmfTable) -> Result<PmfTable> {
    let mut pairs = Vec::with_capacity(a.len() * b.len());
    for (x, p) in a.iter() {
        for (y, q) in b.iter() {
            pairs.push((x + y, p * q));
        }
    }
    PmfTable::from_pairs(pairs)
}

/// A real density with known support and kink locations.
#[derive(Clone)]
pub struct Density {
    f: RealFn,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("support", &(self.lo, self.hi))
            .field("breaks", &self.breaks)
            .finish()
    }
}

fn sorted_breaks(lo: f64, hi: f64, inner: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut b: Vec<f64> = inner
        .into_iter()
        .filter(|x| !x.is_nan() && *x > lo && *x < hi)
        .chain([lo, hi])
        .collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

impl Density {
    /// `f` is only evaluated inside `[lo, hi]`; `kinks` are interior points
    /// where f or its derivative jumps or blows up.
    pub fn new<F>(f: F, lo: f64, hi: f64, kinks: &[f64]) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(StatError::Specification(format!("empty support [{lo}, {hi}]")));
        }
        Ok(Self {
            f: Arc::new(f),
            lo,
            hi,
            breaks: sorted_breaks(lo, hi, kinks.iter().copied()),
        })
    }

    /// Density of a continuous univariate distribution.
    pub fn from_distribution(d: &Distribution) -> Result<Self> {
        if d.is_discrete() || d.is_multivariate() {
            return Err(StatError::Unsupported(format!("density of {}", d.name())));
        }
        let (lo, hi) = d.support()?;
        let kinks = match d.family() {
            Family::Laplace { mean, .. } => vec![*mean],
            _ => vec![],
        };
        let dd = d.clone();
        Self::new(move |x| dd.mass_or_density(x).unwrap_or(0.0), lo, hi, &kinks)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    /// f(x); zero outside the support and wherever f is not finite.
    pub fn eval(&self, x: f64) -> f64 {
        if !(x >= self.lo && x <= self.hi) {
            return 0.0;
        }
        let v = (self.f)(x);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }

    /// ∫ f over the support.
    pub fn total(&self) -> f64 {
        integrate_pieces(|x| self.eval(x), &self.breaks, QUAD_TOL)
    }

    /// ∫_{−∞}^{x} f.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        let top = x.min(self.hi);
        let mut b: Vec<f64> = self.breaks.iter().copied().filter(|&t| t < top).collect();
        b.push(top);
        integrate_pieces(|t| self.eval(t), &b, QUAD_TOL).clamp(0.0, 1.0)
    }

    /// ∫ x f(x) dx.
    pub fn mean(&self) -> f64 {
        integrate_pieces(|x| x * self.eval(x), &self.breaks, QUAD_TOL)
    }

    /// (x, f(x)) on an even grid of `points` values over `[lo, hi]`.
    pub fn tabulate(&self, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
        let m = points.max(2) - 1;
        (0..=m)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / m as f64;
                (x, self.eval(x))
            })
            .collect()
    }
}

/// A law that is either a density or a finite set of atoms.
///
/// Constants are one-atom laws, so identities such as X + 0 = X hold exactly.
#[derive(Debug, Clone)]
pub enum Law {
    Density(Density),
    Atoms(PmfTable),
}

impl Law {
    pub fn constant(c: f64) -> Self {
        Law::Atoms(PmfTable::point_mass(c))
    }
}

/// One strictly monotone branch of y = g(x).
#[derive(Clone)]
pub struct MonotonePiece {
    /// x-interval of the branch.
    pub domain: (f64, f64),
    /// y-interval the branch maps onto.
    pub image: (f64, f64),
    inverse: RealFn,
    inverse_derivative: RealFn,
}

impl fmt::Debug for MonotonePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotonePiece")
            .field("domain", &self.domain)
            .field("image", &self.image)
            .finish()
    }
}

impl MonotonePiece {
    pub fn new<I, D>(domain: (f64, f64), image: (f64, f64), inverse: I, inverse_derivative: D) -> Result<Self>
    where
        I: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(domain.0 < domain.1) || !(image.0 < image.1) {
            return Err(StatError::Specification(format!(
                "piece needs non-empty intervals, got domain {domain:?}, image {image:?}"
            )));
        }
        Ok(Self {
            domain,
            image,
            inverse: Arc::new(inverse),
            inverse_derivative: Arc::new(inverse_derivative),
        })
    }
}

/// f_Y(y) = Σ_pieces f_X(g⁻¹(y)) |d g⁻¹(y)/dy|.
pub fn derived_pdf(d: &Distribution, pieces: Vec<MonotonePiece>) -> Result<Density> {
    let fx = Density::from_distribution(d)?;
    derived_density(&fx, pieces)
}

pub fn derived_density(fx: &Density, mut pieces: Vec<MonotonePiece>) -> Result<Density> {
    if pieces.is_empty() {
        return Err(StatError::Specification("no pieces given".into()));
    }
    pieces.sort_by(|a, b| a.domain.0.total_cmp(&b.domain.0));
    if let Some(w) = pieces.windows(2).find(|w| w[1].domain.0 < w[0].domain.1) {
        return Err(StatError::Specification(format!(
            "pieces overlap: {:?} and {:?}",
            w[0].domain, w[1].domain
        )));
    }
    let lo = pieces.iter().map(|p| p.image.0).fold(f64::INFINITY, f64::min);
    let hi = pieces.iter().map(|p| p.image.1).fold(f64::NEG_INFINITY, f64::max);
    let kinks: Vec<f64> = pieces.iter().flat_map(|p| [p.image.0, p.image.1]).collect();
    let fx = fx.clone();
    Density::new(
        move |y| {
            pieces
                .iter()
                .filter(|p| y >= p.image.0 && y <= p.image.1)
                .map(|p| {
                    let x = (p.inverse)(y);
                    if !(x >= p.domain.0 && x <= p.domain.1) {
                        return 0.0;
                    }
                    let v = fx.eval(x) * (p.inverse_derivative)(y).abs();
                    if v.is_finite() {
                        v
                    } else {
                        0.0
                    }
                })
                .sum()
        },
        lo,
        hi,
        &kinks,
    )
}

// 0·∞ is taken as 0 when bounding product supports.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

fn finite_points(v: &[f64]) -> impl Iterator<Item = f64> + '_ {
    v.iter().copied().filter(|x| x.is_finite())
}

/// Density of X + Y for independent X ~ f, Y ~ g.
pub fn sum_pdf(f: &Density, g: &Density) -> Result<Density> {
    let (f, g) = (f.clone(), g.clone());
    let lo = f.lo + g.lo;
    let hi = f.hi + g.hi;
    let kinks: Vec<f64> = finite_points(&f.breaks)
        .flat_map(|a| finite_points(&g.breaks).map(move |b| a + b).collect::<Vec<_>>())
        .collect();
    Density::new(
        move |z| {
            let breaks = sorted_breaks(
                f.lo.max(z - g.hi),
                f.hi.min(z - g.lo),
                f.breaks.iter().copied().chain(g.breaks.iter().map(|b| z - b)),
            );
            if breaks.len() < 2 || breaks[0] >= breaks[breaks.len() - 1] {
                return 0.0;
            }
            integrate_pieces(|x| f.eval(x) * g.eval(z - x), &breaks, QUAD_TOL).max(0.0)
        },
        lo,
        hi,
        &kinks,
    )
}

/// Law of X + Y for independent laws, keeping atoms exact.
pub fn sum_law(a: &Law, b: &Law) -> Result<Law> {
    match (a, b) {
        (Law::Density(f), Law::Density(g)) => Ok(Law::Density(sum_pdf(f, g)?)),
        (Law::Atoms(p), Law::Atoms(q)) => Ok(Law::Atoms(sum_pmf(p, q)?)),
        (Law::Density(f), Law::Atoms(p)) | (Law::Atoms(p), Law::Density(f)) => {
            let (f, p) = (f.clone(), p.clone());
            let lo = f.lo + p.values()[0];
            let hi = f.hi + p.values()[p.len() - 1];
            let kinks: Vec<f64> = finite_points(&f.breaks)
                .flat_map(|b| p.values().iter().map(move |v| b + v).collect::<Vec<_>>())
                .collect();
            Ok(Law::Density(Density::new(
                move |z| p.iter().map(|(v, w)| w * f.eval(z - v)).sum(),
                lo,
                hi,
                &kinks,
            )?))
        }
    }
}

/// Density of XY for independent X ~ f, Y ~ g:
/// f_Z(z) = ∫ f(x) g(z/x) / |x| dx.
pub fn product_pdf(f: &Density, g: &Density) -> Result<Density> {
    let (f, g) = (f.clone(), g.clone());
    let ends = [
        mul0(f.lo, g.lo),
        mul0(f.lo, g.hi),
        mul0(f.hi, g.lo),
        mul0(f.hi, g.hi),
    ];
    let lo = ends.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ends.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Density::new(
        move |z| {
            let breaks = sorted_breaks(
                f.lo,
                f.hi,
                f.breaks
                    .iter()
                    .copied()
                    .chain([0.0])
                    .chain(finite_points(&g.breaks).filter(|&b| b != 0.0).map(|b| z / b)),
            );
            integrate_pieces(
                |x| {
                    if x == 0.0 {
                        0.0
                    } else {
                        f.eval(x) * g.eval(z / x) / x.abs()
                    }
                },
                &breaks,
                QUAD_TOL,
            )
            .max(0.0)
        },
        lo,
        hi,
        &[0.0],
    )
}

/// Law of XY; a non-zero constant factor rescales the density exactly.
pub fn product_law(a: &Law, b: &Law) -> Result<Law> {
    match (a, b) {
        (Law::Density(f), Law::Density(g)) => Ok(Law::Density(product_pdf(f, g)?)),
        (Law::Atoms(p), Law::Atoms(q)) => {
            let mut pairs = Vec::with_capacity(p.len() * q.len());
            for (x, u) in p.iter() {
                for (y, v) in q.iter() {
                    pairs.push((x * y, u * v));
                }
            }
            Ok(Law::Atoms(PmfTable::from_pairs(pairs)?))
        }
        (Law::Density(f), Law::Atoms(p)) | (Law::Atoms(p), Law::Density(f)) => {
            if p.prob(0.0) > 0.0 {
                return Err(StatError::Unsupported(
                    "product with an atom at zero is a mixed law".into(),
                ));
            }
            let (f, p) = (f.clone(), p.clone());
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut kinks = Vec::new();
            for &c in p.values() {
                for e in [mul0(f.lo, c), mul0(f.hi, c)] {
                    lo = lo.min(e);
                    hi = hi.max(e);
                }
                kinks.extend(finite_points(&f.breaks).map(|b| b * c));
            }
            Ok(Law::Density(Density::new(
                move |z| p.iter().map(|(c, w)| w * f.eval(z / c) / c.abs()).sum(),
                lo,
                hi,
                &kinks,
            )?))
        }
    }
}

/// Density of Y/X for independent numerator Y ~ `num`, denominator X ~ `den`:
/// f_Z(z) = ∫ f_X(x) f_Y(xz) |x| dx.
pub fn ratio_pdf(num: &Density, den: &Density) -> Result<Density> {
    let (num, den) = (num.clone(), den.clone());
    let (lo, hi) = if den.lo <= 0.0 && den.hi >= 0.0 {
        if num.lo >= 0.0 && den.lo >= 0.0 {
            (0.0, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    } else {
        let q = |a: f64, b: f64| if b.is_infinite() { 0.0 } else { a / b };
        let ends = [q(num.lo, den.lo), q(num.lo, den.hi), q(num.hi, den.lo), q(num.hi, den.hi)];
        (
            ends.iter().copied().fold(f64::INFINITY, f64::min),
            ends.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let (lo, hi) = if lo == hi { (f64::NEG_INFINITY, f64::INFINITY) } else { (lo, hi) };
    Density::new(
        move |z| {
            let extra: Vec<f64> = if z == 0.0 {
                vec![]
            } else {
                finite_points(&num.breaks).map(|b| b / z).collect()
            };
            let breaks = sorted_breaks(
                den.lo,
                den.hi,
                den.breaks.iter().copied().chain([0.0]).chain(extra),
            );
            integrate_pieces(|x| den.eval(x) * num.eval(x * z) * x.abs(), &breaks, QUAD_TOL).max(0.0)
        },
        lo,
        hi,
        &[0.0],
    )
}

/// Law of the maximum of `n` i.i.d. draws.
#[derive(Debug, Clone)]
pub struct MaxOf {
    base: Distribution,
    n: u64,
}

/// Maximum of `n` i.i.d. copies of `d`: CDF Fⁿ, density n F^{n−1} f.
pub fn max_cdf(d: &Distribution, n: u64) -> Result<MaxOf> {
    if n == 0 {
        return Err(StatError::ParameterDomain("max needs n ≥ 1".into()));
    }
    if d.is_multivariate() {
        return Err(StatError::Unsupported(format!("max of multivariate {}", d.name())));
    }
    Ok(MaxOf { base: d.clone(), n })
}

impl MaxOf {
    pub fn base(&self) -> &Distribution {
        &self.base
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.base.cdf(x)?.powi(self.n as i32))
    }

    /// Density (continuous base) or mass P(max = x) (discrete base).
    pub fn mass_or_density(&self, x: f64) -> Result<f64> {
        let n = self.n as i32;
        if self.base.is_discrete() {
            let hi = self.base.cdf(x)?;
            let lo = self.base.cdf(x - 1.0)?;
            if self.base.mass_or_density(x)? == 0.0 {
                return Ok(0.0);
            }
            return Ok(hi.powi(n) - lo.powi(n));
        }
        Ok(self.n as f64 * self.base.cdf(x)?.powi(n - 1) * self.base.mass_or_density(x)?)
    }

    /// E[max] = ∫₀^∞ (1 − Fⁿ) − ∫_{−∞}^0 Fⁿ.
    pub fn mean(&self) -> Result<f64> {
        let (lo, hi) = self.base.support()?;
        if self.base.is_discrete() {
            let t = self.base.pmf_table()?;
            return Ok(t
                .values()
                .iter()
                .map(|&v| v * self.mass_or_density(v).unwrap_or(0.0))
                .sum());
        }
        let upper = |x: f64| 1.0 - self.cdf(x).unwrap_or(1.0);
        let lower = |x: f64| self.cdf(x).unwrap_or(0.0);
        let pos = if hi > 0.0 {
            crate::quad::integrate(upper, lo.max(0.0), hi, 1e-10, Endpoints::Singular)
        } else {
            0.0
        };
        let neg = if lo < 0.0 {
            crate::quad::integrate(lower, lo, hi.min(0.0), 1e-10, Endpoints::Singular)
        } else {
            0.0
        };
        Ok(pos - neg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_of_discrete_uniform() {
        let d = Distribution::discrete_uniform(-4, 4).unwrap();
        let t = derived_pmf_of(&d, |x| Some(x.abs())).unwrap();
        assert_eq!(t.values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!((t.prob(0.0) - 1.0 / 9.0).abs() < 1e-15);
        for y in 1..=4 {
            assert!((t.prob(y as f64) - 2.0 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn square_of_discrete_uniform() {
        let d = Distribution::discrete_uniform(-2, 2).unwrap();
        let t = derived_pmf_of(&d, |x| Some(x * x)).unwrap();
        assert_eq!(t.values(), &[0.0, 1.0, 4.0]);
        assert!((t.prob(4.0) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn missing_map_entry_is_error() {
        let t = PmfTable::uniform(&[1.0, 2.0]).unwrap();
        let g = DiscreteMap::from_pairs(vec![(1.0, 5.0)]).unwrap();
        assert!(matches!(derived_pmf(&t, &g), Err(StatError::Mapping(_))));
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let d = Distribution::std_normal();
        let a = MonotonePiece::new((-1.0, 1.0), (0.0, 1.0), |y| y, |_| 1.0).unwrap();
        let b = MonotonePiece::new((0.0, 2.0), (0.0, 1.0), |y| y, |_| 1.0).unwrap();
        assert!(matches!(derived_pdf(&d, vec![a, b]), Err(StatError::Specification(_))));
    }

    #[test]
    fn sqrt_of_uniform() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        let p = MonotonePiece::new((0.0, 1.0), (0.0, 1.0), |y| y * y, |y| 2.0 * y).unwrap();
        let f = derived_pdf(&d, vec![p]).unwrap();
        for y in [0.1, 0.5, 0.9] {
            assert!((f.eval(y) - 2.0 * y).abs() < 1e-14);
        }
    }

    #[test]
    fn triangle_from_uniform_sum() {
        let u = Density::from_distribution(&Distribution::uniform(0.0, 1.0).unwrap()).unwrap();
        let t = sum_pdf(&u, &u).unwrap();
        for z in [0.25, 0.5, 1.0, 1.5, 1.9] {
            let want = if z <= 1.0 { z } else { 2.0 - z };
            assert!((t.eval(z) - want).abs() < 1e-8, "z={z}");
        }
        assert!((t.total() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn point_mass_is_convolution_identity() {
        let u = Density::from_distribution(&Distribution::uniform(0.0, 1.0).unwrap()).unwrap();
        let Law::Density(s) = sum_law(&Law::Density(u.clone()), &Law::constant(0.0)).unwrap() else {
            panic!("expected a density")
        };
        for x in [0.1, 0.7] {
            assert_eq!(s.eval(x), u.eval(x));
        }
    }

    #[test]
    fn max_of_uniform_mean() {
        let m = max_cdf(&Distribution::uniform(0.0, 1.0).unwrap(), 10).unwrap();
        assert!((m.mean().unwrap() - 10.0 / 11.0).abs() < 1e-8);
        assert!(max_cdf(&Distribution::std_normal(), 0).is_err());
    }
}
