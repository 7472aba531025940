//! Finite probability mass tables.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StatError};

/// A finite PMF: strictly increasing support values with their probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    values: Vec<f64>,
    probs: Vec<f64>,
}

impl PmfTable {
    /// Builds a table from (value, probability) pairs, merging repeated values.
    ///
    /// Probabilities must be non-negative and finite. The total is not
    /// forced to one; use [`PmfTable::normalized`] or [`PmfTable::validate_total`].
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        for &(v, p) in &pairs {
            if !v.is_finite() {
                return Err(StatError::Support(format!("support value {v} is not finite")));
            }
            if !(p >= 0.0 && p.is_finite()) {
                return Err(StatError::ParameterDomain(format!("probability {p} at {v} is invalid")));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pairs.len());
        for (v, p) in pairs {
            // -0.0 and 0.0 are the same support point
            let v = if v == 0.0 { 0.0 } else { v };
            match values.last() {
                Some(&last) if last == v => *probs.last_mut().unwrap() += p,
                _ => {
                    values.push(v);
                    probs.push(p);
                }
            }
        }
        Ok(Self { values, probs })
    }

    pub fn point_mass(value: f64) -> Self {
        Self {
            values: vec![value],
            probs: vec![1.0],
        }
    }

    /// Uniform weights over the given points.
    pub fn uniform(points: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(StatError::Support("empty support".into()));
        }
        let w = 1.0 / points.len() as f64;
        Self::from_pairs(points.iter().map(|&x| (x, w)))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.probs.iter().copied())
    }

    /// Probability at `value`, zero when absent.
    pub fn prob(&self, value: f64) -> f64 {
        match self.values.binary_search_by(|v| v.total_cmp(&value)) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn validate_total(&self, tol: f64) -> Result<()> {
        let t = self.total();
        if (t - 1.0).abs() > tol {
            return Err(StatError::ParameterDomain(format!("probabilities sum to {t}, expected 1")));
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let t = self.total();
        if !(t > 0.0) {
            return Err(StatError::Conditioning("table has zero total mass".into()));
        }
        Ok(Self {
            values: self.values.clone(),
            probs: self.probs.iter().map(|p| p / t).collect(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(v, p)| (v - m) * (v - m) * p).sum()
    }

    /// E[g(X)].
    pub fn expect<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.iter().map(|(v, p)| g(v) * p).sum()
    }

    /// P(X ≤ x).
    pub fn cdf(&self, x: f64) -> f64 {
        self.iter().take_while(|(v, _)| *v <= x).map(|(_, p)| p).sum()
    }
}
