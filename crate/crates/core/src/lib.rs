//! Probability distributions, concentration bounds, estimation, inference and
//! linear models, with deterministic seeded simulation.

pub mod cli;
pub mod concentration;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod inference;
pub mod io;
pub mod joint;
pub mod linmodels;
pub mod montecarlo;
pub mod pmf;
pub mod quad;
pub mod reproduce;
pub mod rng;
pub mod special;
pub mod transform;

pub use distributions::{Distribution, Family, Moments};
pub use error::{Result, StatError};
pub use montecarlo::{ExperimentPlan, Sample};
pub use pmf::PmfTable;
