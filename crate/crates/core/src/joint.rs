//! Finite joint PMF tables, Bayes updates and the bivariate normal conditional.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{Result, StatError};
use crate::pmf::PmfTable;

/// Tolerance on the total mass of a joint table.
pub const MASS_TOL: f64 = 1e-12;
/// Largest number of cells a table may hold.
pub const MAX_CELLS: usize = 1_000_000;
/// Variances below this make the correlation degenerate.
pub const DEGENERATE_VAR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// p(x, y) on a finite grid, stored row-major by x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPmfTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    probs: Vec<f64>,
    /// Mass outside the grid when the table truncates an infinite support.
    tail_mass: f64,
}

fn check_support(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(StatError::Support(format!("{name}-support is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(StatError::Support(format!("{name}-support has a non-finite value")));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(StatError::Support(format!("{name}-support must be strictly increasing")));
    }
    Ok(())
}

impl JointPmfTable {
    /// `probs[i * ys.len() + j]` is p(xs[i], ys[j]); the total must be 1 ± 1e-12.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        Self::truncated(xs, ys, probs, 0.0)
    }

    /// Table whose grid holds all but `tail_mass` of the probability.
    pub fn truncated(xs: Vec<f64>, ys: Vec<f64>, probs: Vec<f64>, tail_mass: f64) -> Result<Self> {
        check_support("x", &xs)?;
        check_support("y", &ys)?;
        let cells = xs.len().saturating_mul(ys.len());
        if cells > MAX_CELLS {
            return Err(StatError::Support(format!("{cells} cells exceed the limit of {MAX_CELLS}")));
        }
        if probs.len() != cells {
            return Err(StatError::Support(format!("expected {cells} probabilities, got {}", probs.len())));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(StatError::ParameterDomain(format!("invalid cell probability {p}")));
        }
        if !(0.0..1.0).contains(&tail_mass) {
            return Err(StatError::ParameterDomain(format!("tail mass {tail_mass} outside [0, 1)")));
        }
        let total: f64 = probs.iter().sum();
        if (total + tail_mass - 1.0).abs() > MASS_TOL {
            return Err(StatError::ParameterDomain(format!(
                "cells sum to {total} with tail mass {tail_mass}; expected 1"
            )));
        }
        Ok(Self { xs, ys, probs, tail_mass })
    }

    /// Table with p(x, y) = f(x, y) over the given grid.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(xs: Vec<f64>, ys: Vec<f64>, f: F) -> Result<Self> {
        let probs = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self::new(xs, ys, probs)
    }

    /// Product table p(x)p(y).
    pub fn independent(px: &PmfTable, py: &PmfTable) -> Result<Self> {
        let probs = px.probs().iter().flat_map(|&a| py.probs().iter().map(move |&b| a * b)).collect();
        let tail = (1.0 - px.total() * py.total()).max(0.0);
        Self::truncated(px.values().to_vec(), py.values().to_vec(), probs, if tail > MASS_TOL { tail } else { 0.0 })
    }

    /// Reads `x,y,p` rows (header required). Missing cells are zero.
    pub fn from_triples_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut cells = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let rec = rec.map_err(|e| ingest(row, "*", e.to_string()))?;
            if rec.len() != 3 {
                return Err(ingest(row, "*", format!("expected 3 fields, got {}", rec.len())));
            }
            let get = |j: usize, name: &str| -> Result<f64> {
                rec[j].parse::<f64>().map_err(|_| ingest(row, name, format!("`{}` is not a number", &rec[j])))
            };
            cells.push((get(0, "x")?, get(1, "y")?, get(2, "p")?));
        }
        let mut xs: Vec<f64> = cells.iter().map(|c| c.0).collect();
        let mut ys: Vec<f64> = cells.iter().map(|c| c.1).collect();
        for v in [&mut xs, &mut ys] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let mut probs = vec![0.0; xs.len() * ys.len()];
        for (x, y, p) in cells {
            let i = xs.binary_search_by(|v| v.total_cmp(&x)).unwrap();
            let j = ys.binary_search_by(|v| v.total_cmp(&y)).unwrap();
            probs[i * ys.len() + j] += p;
        }
        Self::new(xs, ys, probs)
    }

    /// Reads a dense matrix: the header row holds y values after a corner
    /// cell, each later row starts with its x value.
    pub fn from_dense_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut rows = rdr.records();
        let header = rows
            .next()
            .ok_or_else(|| ingest(1, "*", "empty file".into()))?
            .map_err(|e| ingest(1, "*", e.to_string()))?;
        let ys = header
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, s)| s.parse::<f64>().map_err(|_| ingest(1, &format!("{}", j + 1), format!("`{s}` is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        let mut xs = Vec::new();
        let mut probs = Vec::new();
        for (i, rec) in rows.enumerate() {
            let row = i + 2;
            let rec = rec.map_err(|e| ingest(row, "*", e.to_string()))?;
            if rec.len() != ys.len() + 1 {
                return Err(ingest(row, "*", format!("expected {} fields, got {}", ys.len() + 1, rec.len())));
            }
            for (j, s) in rec.iter().enumerate() {
                let v = s.parse::<f64>().map_err(|_| ingest(row, &format!("{}", j + 1), format!("`{s}` is not a number")))?;
                if j == 0 {
                    xs.push(v);
                } else {
                    probs.push(v);
                }
            }
        }
        Self::new(xs, ys, probs)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.ys.len() + j]
    }

    /// p(x, y) by value; zero off the grid.
    pub fn prob(&self, x: f64, y: f64) -> f64 {
        match (
            self.xs.binary_search_by(|v| v.total_cmp(&x)),
            self.ys.binary_search_by(|v| v.total_cmp(&y)),
        ) {
            (Ok(i), Ok(j)) => self.p(i, j),
            _ => 0.0,
        }
    }

    /// Cells as (x, y, p).
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let ny = self.ys.len();
        self.probs.iter().enumerate().map(move |(k, &p)| (self.xs[k / ny], self.ys[k % ny], p))
    }

    /// Same table with the roles of X and Y exchanged.
    pub fn transpose(&self) -> Self {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let mut probs = vec![0.0; nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                probs[j * nx + i] = self.p(i, j);
            }
        }
        Self {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
            probs,
            tail_mass: self.tail_mass,
        }
    }

    fn oriented(&self, axis: Axis) -> std::borrow::Cow<'_, Self> {
        match axis {
            Axis::X => std::borrow::Cow::Borrowed(self),
            Axis::Y => std::borrow::Cow::Owned(self.transpose()),
        }
    }

    /// Marginal PMF of the variable on `axis`.
    pub fn marginal(&self, axis: Axis) -> Result<PmfTable> {
        let t = self.oriented(axis);
        let ny = t.ys.len();
        PmfTable::from_pairs(t.xs.iter().enumerate().map(|(i, &x)| (x, t.probs[i * ny..(i + 1) * ny].iter().sum())))
    }

    /// PMF of the other variable given `axis` = `value`.
    pub fn conditional(&self, axis: Axis, value: f64) -> Result<PmfTable> {
        let t = self.oriented(axis);
        let i = t
            .xs
            .binary_search_by(|v| v.total_cmp(&value))
            .map_err(|_| StatError::Conditioning(format!("{value} is not in the support")))?;
        let ny = t.ys.len();
        let slice = &t.probs[i * ny..(i + 1) * ny];
        let mass: f64 = slice.iter().sum();
        if !(mass > 0.0) {
            return Err(StatError::Conditioning(format!("slice at {value} has zero mass")));
        }
        PmfTable::from_pairs(t.ys.iter().zip(slice).map(|(&y, &p)| (y, p / mass)))
    }

    /// P((X, Y) ∈ B) for the event B given as a predicate.
    pub fn event_probability<F: Fn(f64, f64) -> bool>(&self, event: F) -> f64 {
        self.cells().filter(|&(x, y, _)| event(x, y)).map(|c| c.2).sum()
    }

    pub fn expectation_ops(&self) -> JointMoments {
        let e = |g: &dyn Fn(f64, f64) -> f64| self.cells().map(|(x, y, p)| g(x, y) * p).sum::<f64>();
        let mean_x = e(&|x, _| x);
        let mean_y = e(&|_, y| y);
        let var_x = e(&|x, _| (x - mean_x) * (x - mean_x));
        let var_y = e(&|_, y| (y - mean_y) * (y - mean_y));
        let covariance = e(&|x, y| (x - mean_x) * (y - mean_y));
        let degenerate = var_x < DEGENERATE_VAR || var_y < DEGENERATE_VAR;
        let correlation = if degenerate { 0.0 } else { covariance / (var_x * var_y).sqrt() };
        JointMoments {
            mean_x,
            mean_y,
            var_x,
            var_y,
            covariance,
            correlation,
            degenerate,
        }
    }

    /// E and Var of the other variable for every value of `given` with positive mass.
    pub fn conditional_expectation(&self, given: Axis) -> Result<Vec<ConditionalMoment>> {
        let m = self.marginal(given)?;
        m.iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(v, p)| {
                let c = self.conditional(given, v)?;
                Ok(ConditionalMoment {
                    given: v,
                    prob: p,
                    mean: c.mean(),
                    variance: c.variance(),
                })
            })
            .collect()
    }

    /// Parts of Var(X) = Var(E(X|Y)) + E(Var(X|Y)).
    pub fn total_variance_check(&self) -> Result<TotalVariance> {
        let rows = self.conditional_expectation(Axis::Y)?;
        let mean: f64 = rows.iter().map(|r| r.prob * r.mean).sum();
        let var_of_conditional_mean = rows.iter().map(|r| r.prob * (r.mean - mean) * (r.mean - mean)).sum();
        let mean_of_conditional_variance = rows.iter().map(|r| r.prob * r.variance).sum();
        Ok(TotalVariance {
            var_of_conditional_mean,
            mean_of_conditional_variance,
            var_x: self.marginal(Axis::X)?.variance(),
        })
    }
}

fn ingest(row: usize, column: &str, message: String) -> StatError {
    StatError::Ingestion {
        row,
        column: column.to_string(),
        message,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub covariance: f64,
    /// Zero when `degenerate` is set.
    pub correlation: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalMoment {
    pub given: f64,
    pub prob: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalVariance {
    pub var_of_conditional_mean: f64,
    pub mean_of_conditional_variance: f64,
    pub var_x: f64,
}

/// p(x, y) = p_X(x) p_{Y|X}(y | x).
///
/// Mass the prior or kernels leave off the grid is kept as tail mass.
pub fn build_joint_from_conditional<K>(prior: &PmfTable, kernel: K) -> Result<JointPmfTable>
where
    K: Fn(f64) -> Result<PmfTable>,
{
    let rows = prior.iter().map(|(x, p)| Ok((x, p, kernel(x)?))).collect::<Result<Vec<_>>>()?;
    let mut ys: Vec<f64> = rows.iter().flat_map(|r| r.2.values().to_vec()).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let mut probs = Vec::with_capacity(rows.len() * ys.len());
    for (_, p, k) in &rows {
        probs.extend(ys.iter().map(|&y| p * k.prob(y)));
    }
    let total: f64 = probs.iter().sum();
    let tail = if (1.0 - total).abs() <= MASS_TOL { 0.0 } else { 1.0 - total };
    JointPmfTable::truncated(prior.values().to_vec(), ys, probs, tail)
}

/// Normalized posterior with the evidence Σ prior·likelihood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Posterior {
    pub posterior: PmfTable,
    pub evidence: f64,
}

pub fn bayes_update<L: Fn(f64) -> f64>(prior: &PmfTable, likelihood: L) -> Result<Posterior> {
    let mut joint = Vec::with_capacity(prior.len());
    for (t, p) in prior.iter() {
        let l = likelihood(t);
        if !(l >= 0.0 && l.is_finite()) {
            return Err(StatError::ParameterDomain(format!("likelihood {l} at {t} is invalid")));
        }
        joint.push((t, p * l));
    }
    let evidence: f64 = joint.iter().map(|j| j.1).sum();
    if !(evidence > 0.0) {
        return Err(StatError::DegenerateEvidence);
    }
    Ok(Posterior {
        posterior: PmfTable::from_pairs(joint.into_iter().map(|(t, w)| (t, w / evidence)))?,
        evidence,
    })
}

/// P(A) = Σ P(Bᵢ) P(A | Bᵢ) over a partition B.
pub fn total_probability(priors: &[f64], conditionals: &[f64]) -> Result<f64> {
    if priors.is_empty() || priors.len() != conditionals.len() {
        return Err(StatError::ParameterDomain("priors and conditionals must have equal, non-zero length".into()));
    }
    if priors.iter().chain(conditionals).any(|p| !(0.0..=1.0).contains(p)) {
        return Err(StatError::ParameterDomain("probabilities must lie in [0, 1]".into()));
    }
    let s: f64 = priors.iter().sum();
    if (s - 1.0).abs() > MASS_TOL {
        return Err(StatError::ParameterDomain(format!("partition priors sum to {s}")));
    }
    Ok(priors.iter().zip(conditionals).map(|(a, b)| a * b).sum())
}

/// Standard bivariate normal with correlation ρ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateNormalStd {
    rho: f64,
}

impl BivariateNormalStd {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(StatError::ParameterDomain(format!("need |rho| < 1, got {rho}")));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Y | X = x ~ N(ρx, 1 − ρ²).
    pub fn conditional(&self, x: f64) -> Result<Distribution> {
        Distribution::normal(self.rho * x, 1.0 - self.rho * self.rho)
    }

    /// The conditional for standardized x, mapped back to Y's own scale.
    pub fn conditional_rescaled(&self, x: f64, mean_y: f64, sd_y: f64) -> Result<Distribution> {
        if !(sd_y > 0.0) {
            return Err(StatError::ParameterDomain(format!("sd must be positive, got {sd_y}")));
        }
        Distribution::normal(mean_y + sd_y * self.rho * x, sd_y * sd_y * (1.0 - self.rho * self.rho))
    }
}

pub fn bivariate_normal_conditional(b: &BivariateNormalStd, x: f64) -> Result<Distribution> {
    b.conditional(x)
}
