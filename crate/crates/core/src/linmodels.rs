//! Linear models: least squares with diagnostics, basis expansions, kernel
//! ridge regression and regularized logistic regression by IRLS.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{Result, StatError};
use crate::rng::mix64;
use crate::special::student_t_quantile;

/// Condition number above which a fit carries a warning.
pub const COND_WARN: f64 = 1e8;
/// Condition number above which a fit is refused.
pub const COND_ERROR: f64 = 1e12;

pub const IRLS_TOL: f64 = 1e-8;
pub const IRLS_MAX_ITER: usize = 100;
pub const IRLS_MAX_HALVINGS: u32 = 30;

/// Design matrix with labelled columns; the first column is all ones when
/// an intercept is present.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    x: DMatrix<f64>,
    labels: Vec<String>,
    intercept: bool,
}

impl DesignMatrix {
    /// Builds from feature columns, prepending a ones column if `intercept`.
    pub fn from_columns(columns: &[Vec<f64>], labels: &[&str], intercept: bool) -> Result<Self> {
        if columns.len() != labels.len() {
            return Err(StatError::ParameterDomain("one label per column is required".into()));
        }
        let n = match (columns.first(), intercept) {
            (Some(c), _) => c.len(),
            (None, true) => {
                return Err(StatError::InsufficientData(
                    "an intercept-only design needs the row count; use DesignMatrix::intercept_only".into(),
                ))
            }
            (None, false) => return Err(StatError::InsufficientData("design has no columns".into())),
        };
        if columns.iter().any(|c| c.len() != n) {
            return Err(StatError::ParameterDomain("columns differ in length".into()));
        }
        let mut cols: Vec<&[f64]> = Vec::new();
        let ones = vec![1.0; n];
        let mut names = Vec::new();
        if intercept {
            cols.push(&ones);
            names.push("intercept".to_string());
        }
        for (c, l) in columns.iter().zip(labels) {
            cols.push(c);
            names.push(l.to_string());
        }
        Self::assemble(n, &cols, names, intercept)
    }

    pub fn intercept_only(n: usize) -> Result<Self> {
        Self::assemble(n, &[&vec![1.0; n]], vec!["intercept".into()], true)
    }

    fn assemble(n: usize, cols: &[&[f64]], labels: Vec<String>, intercept: bool) -> Result<Self> {
        if n == 0 {
            return Err(StatError::InsufficientData("design has no rows".into()));
        }
        for (j, c) in cols.iter().enumerate() {
            if let Some(i) = c.iter().position(|v| !v.is_finite()) {
                return Err(StatError::Domain(format!("non-finite entry at row {i}, column `{}`", labels[j])));
            }
        }
        let x = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
        Ok(Self { x, labels, intercept })
    }

    pub fn nrows(&self) -> usize {
        self.x.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.x.ncols()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_intercept(&self) -> bool {
        self.intercept
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// Row i as a vector (including the ones entry).
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.x.row(i).iter().copied().collect()
    }

    /// Design with a further column appended.
    pub fn with_column(&self, label: &str, column: &[f64]) -> Result<Self> {
        let mut cols: Vec<Vec<f64>> = (0..self.ncols()).map(|j| self.x.column(j).iter().copied().collect()).collect();
        cols.push(column.to_vec());
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        if column.len() != self.nrows() {
            return Err(StatError::ParameterDomain("column length differs from the row count".into()));
        }
        Self::assemble(self.nrows(), &refs, labels, self.intercept)
    }
}

/// Feature map used by [`basis_expand`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum Basis {
    /// x, x², …, x^degree.
    Polynomial(u32),
    /// cos(kπx), sin(kπx) for k = 1..order.
    Sinusoidal(u32),
}

impl std::str::FromStr for Basis {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, k) = s
            .split_once(':')
            .ok_or_else(|| StatError::Usage(format!("basis `{s}` must look like poly:4 or sin:2")))?;
        let k: u32 = k.parse().map_err(|_| StatError::Usage(format!("bad basis order in `{s}`")))?;
        match kind {
            "poly" | "polynomial" => Ok(Basis::Polynomial(k)),
            "sin" | "sinusoidal" => Ok(Basis::Sinusoidal(k)),
            _ => Err(StatError::Usage(format!("unknown basis `{kind}` (poly, sin)"))),
        }
    }
}

/// Intercept column followed by the basis features of `x`.
pub fn basis_expand(x: &[f64], basis: Basis) -> Result<DesignMatrix> {
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    match basis {
        Basis::Polynomial(d) => {
            for k in 1..=d {
                cols.push(x.iter().map(|v| v.powi(k as i32)).collect::<Vec<f64>>());
                labels.push(if k == 1 { "x".to_string() } else { format!("x^{k}") });
            }
        }
        Basis::Sinusoidal(m) => {
            for k in 1..=m {
                let w = k as f64 * std::f64::consts::PI;
                cols.push(x.iter().map(|v| (w * v).cos()).collect());
                labels.push(format!("cos({k}πx)"));
                cols.push(x.iter().map(|v| (w * v).sin()).collect());
                labels.push(format!("sin({k}πx)"));
            }
        }
    }
    if cols.is_empty() {
        return DesignMatrix::intercept_only(x.len());
    }
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    DesignMatrix::from_columns(&cols, &refs, true)
}

/// Noisy samples of 1 + cos πx + sin πx + cos 2πx + sin 2πx + 0.5ε on
/// x ~ Unif(−1, 1), ε ~ N(0, 1), reproducible from `seed`.
pub fn sinusoidal_synthetic(n: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let x = Distribution::uniform(-1.0, 1.0)?.sample(n, seed)?.values().to_vec();
    let eps = Distribution::std_normal().sample(n, mix64(seed ^ 0x5151))?;
    let pi = std::f64::consts::PI;
    let y = x
        .iter()
        .zip(eps.values())
        .map(|(&v, e)| 1.0 + (pi * v).cos() + (pi * v).sin() + (2.0 * pi * v).cos() + (2.0 * pi * v).sin() + 0.5 * e)
        .collect();
    Ok((x, y))
}

/// Least-squares fit with Gauss–Markov diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub labels: Vec<String>,
    pub intercept: bool,
    pub n: usize,
    pub coefficients: Vec<f64>,
    pub xtx: Vec<Vec<f64>>,
    pub xty: Vec<f64>,
    pub xtx_inv: Vec<Vec<f64>>,
    pub fitted: Vec<f64>,
    pub sse: f64,
    /// n − number of columns.
    pub df: usize,
    /// SSE / df.
    pub s2: f64,
    pub r2: f64,
    /// s² (XᵀX)⁻¹.
    pub covariance: Vec<Vec<f64>>,
    pub standard_errors: Vec<f64>,
    pub t_statistics: Vec<f64>,
    pub condition_number: f64,
    pub warnings: Vec<String>,
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Rank and conditioning checks shared by every least-squares solve.
fn checked_qr(x: &DesignMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>, f64, Vec<String>)> {
    let (n, p) = (x.nrows(), x.ncols());
    if n < p {
        return Err(StatError::SingularDesign {
            column: x.labels[n].clone(),
        });
    }
    let qr = x.x.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let scale = (0..p).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    let tol = (n.max(p) as f64) * f64::EPSILON * scale;
    for j in 0..p {
        // column j is (numerically) in the span of the columns before it
        let col_norm = x.x.column(j).norm();
        if r[(j, j)].abs() <= tol || r[(j, j)].abs() <= 1e-13 * col_norm {
            return Err(StatError::SingularDesign {
                column: x.labels[j].clone(),
            });
        }
    }
    let sv = x.x.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let cond = smax / smin;
    let mut warnings = Vec::new();
    if cond > COND_ERROR {
        return Err(StatError::IllConditioned(cond));
    }
    if cond > COND_WARN {
        warnings.push(format!("design condition number {cond:.3e} exceeds {COND_WARN:.0e}"));
    }
    Ok((q, r, cond, warnings))
}

/// Ordinary least squares by QR of X.
///
/// (XᵀX)⁻¹ is formed from R⁻¹ only for the covariance report.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<LinearFit> {
    let (n, p) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(StatError::ParameterDomain(format!("{} responses for {n} rows", y.len())));
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(StatError::Domain(format!("non-finite response at row {i}")));
    }
    if n <= p {
        return Err(StatError::InsufficientData(format!(
            "{n} rows cannot support diagnostics for {p} coefficients"
        )));
    }
    let (q, r, cond, warnings) = checked_qr(x)?;
    let yv = DVector::from_column_slice(y);
    let qty = q.transpose() * &yv;
    let theta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| StatError::SingularDesign { column: x.labels[p - 1].clone() })?;
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| StatError::SingularDesign { column: x.labels[p - 1].clone() })?;
    let xtx_inv = &rinv * rinv.transpose();
    let xtx = x.x.transpose() * &x.x;
    let xty = x.x.transpose() * &yv;
    let fitted = &x.x * &theta;
    let resid = &yv - &fitted;
    let sse = resid.norm_squared();
    let df = n - p;
    let s2 = sse / df as f64;
    let r2 = r_squared_values(y, fitted.as_slice());
    let cov = &xtx_inv * s2;
    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].sqrt()).collect();
    let t: Vec<f64> = theta.iter().zip(&se).map(|(b, s)| b / s).collect();
    Ok(LinearFit {
        labels: x.labels.clone(),
        intercept: x.intercept,
        n,
        coefficients: theta.iter().copied().collect(),
        xtx: rows_of(&xtx),
        xty: xty.iter().copied().collect(),
        xtx_inv: rows_of(&xtx_inv),
        fitted: fitted.iter().copied().collect(),
        sse,
        df,
        s2,
        r2,
        covariance: rows_of(&cov),
        standard_errors: se,
        t_statistics: t,
        condition_number: cond,
        warnings,
    })
}

fn r_squared_values(y: &[f64], fitted: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let tss: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sse: f64 = y.iter().zip(fitted).map(|(a, b)| (a - b) * (a - b)).sum();
    if tss == 0.0 {
        return if sse == 0.0 { 1.0 } else { 0.0 };
    }
    1.0 - sse / tss
}

/// 1 − SSE/TSS with TSS = Σ(y − ȳ)².
pub fn r_squared(fit: &LinearFit, y: &[f64]) -> Result<f64> {
    if y.len() != fit.fitted.len() {
        return Err(StatError::ParameterDomain("response length differs from the fit".into()));
    }
    Ok(r_squared_values(y, &fit.fitted))
}

/// t statistic and 100(1 − α)% interval for one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientInterval {
    pub index: usize,
    pub estimate: f64,
    pub standard_error: f64,
    pub t: f64,
    pub t_critical: f64,
    pub df: usize,
    pub lower: f64,
    pub upper: f64,
}

pub fn slope_t_interval(fit: &LinearFit, index: usize, alpha: f64) -> Result<CoefficientInterval> {
    if index >= fit.coefficients.len() {
        return Err(StatError::ParameterDomain(format!("no coefficient {index}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatError::ParameterDomain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let est = fit.coefficients[index];
    let se = fit.standard_errors[index];
    let tc = student_t_quantile(1.0 - alpha / 2.0, fit.df as f64)?;
    Ok(CoefficientInterval {
        index,
        estimate: est,
        standard_error: se,
        t: est / se,
        t_critical: tc,
        df: fit.df,
        lower: est - tc * se,
        upper: est + tc * se,
    })
}

/// Population moments of (X, Y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SulmMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub cov_xy: f64,
}

/// θ₁ = Cov(X, Y)/Var(X), θ₀ = E(Y) − θ₁E(X).
pub fn sulm_moment_form(m: &SulmMoments) -> Result<(f64, f64)> {
    if !(m.var_x > 0.0) {
        return Err(StatError::ParameterDomain(format!("Var(X) must be positive, got {}", m.var_x)));
    }
    let slope = m.cov_xy / m.var_x;
    Ok((m.mean_y - slope * m.mean_x, slope))
}

/// Coefficient columns for each response column, from one shared QR.
///
/// Equal by construction to solving the stacked system (I_p ⊗ X) vec(Θ) = vec(Y).
pub fn mmlm_fit(x: &DesignMatrix, responses: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let (n, p) = (x.nrows(), x.ncols());
    if responses.is_empty() {
        return Err(StatError::InsufficientData("no response columns".into()));
    }
    if responses.iter().any(|c| c.len() != n) {
        return Err(StatError::ParameterDomain("response columns must have one entry per row".into()));
    }
    let (q, r, _, _) = checked_qr(x)?;
    let y = DMatrix::from_fn(n, responses.len(), |i, j| responses[j][i]);
    let theta = r
        .solve_upper_triangular(&(q.transpose() * y))
        .ok_or_else(|| StatError::SingularDesign { column: x.labels[p - 1].clone() })?;
    Ok((0..theta.ncols()).map(|j| theta.column(j).iter().copied().collect()).collect())
}

/// Primal ridge: (XᵀX + λnI) w = Xᵀy on raw features (no intercept).
pub fn ridge_primal(rows: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let x = rows_matrix(rows)?;
    let n = x.nrows();
    if y.len() != n {
        return Err(StatError::ParameterDomain(format!("{} responses for {n} rows", y.len())));
    }
    let a = x.transpose() * &x + DMatrix::identity(x.ncols(), x.ncols()) * (lambda * n as f64);
    let b = x.transpose() * DVector::from_column_slice(y);
    let w = a
        .cholesky()
        .ok_or_else(|| StatError::KernelSpec("primal ridge system is not positive definite".into()))?
        .solve(&b);
    Ok(w.iter().copied().collect())
}

fn rows_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(StatError::InsufficientData("no rows".into()));
    }
    let d = rows[0].len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(StatError::ParameterDomain("rows must be non-empty and of equal length".into()));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(StatError::Domain("non-finite feature".into()));
    }
    Ok(DMatrix::from_fn(n, d, |i, j| rows[i][j]))
}

/// Kernel function k(x, x').
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum Kernel {
    /// xᵀx'
    Linear,
    /// (xᵀx' + offset)^degree
    Polynomial { degree: u32, offset: f64 },
    /// exp(−‖x − x'‖² / (2 width²))
    Gaussian { width: f64 },
}

impl std::str::FromStr for Kernel {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or("");
        let args: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<f64> {
            args.get(i)
                .ok_or_else(|| StatError::Usage(format!("kernel `{s}` is missing argument {}", i + 1)))?
                .parse::<f64>()
                .map_err(|_| StatError::Usage(format!("bad kernel argument in `{s}`")))
        };
        let k = match kind {
            "linear" => Kernel::Linear,
            "poly" | "polynomial" => Kernel::Polynomial {
                degree: num(0)? as u32,
                offset: if args.len() > 1 { num(1)? } else { 1.0 },
            },
            "gaussian" | "rbf" => Kernel::Gaussian { width: num(0)? },
            _ => return Err(StatError::Usage(format!("unknown kernel `{kind}` (linear, poly:d[:c], gaussian:w)"))),
        };
        k.validate()?;
        Ok(k)
    }
}

impl Kernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Kernel::Linear => Ok(()),
            Kernel::Polynomial { degree, offset } => {
                if degree == 0 || !(offset >= 0.0) {
                    return Err(StatError::KernelSpec(format!(
                        "polynomial kernel needs degree ≥ 1 and offset ≥ 0, got {degree}, {offset}"
                    )));
                }
                Ok(())
            }
            Kernel::Gaussian { width } => {
                if !(width > 0.0 && width.is_finite()) {
                    return Err(StatError::KernelSpec(format!("gaussian width must be positive, got {width}")));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(a, b),
            Kernel::Polynomial { degree, offset } => (dot(a, b) + offset).powi(degree as i32),
            Kernel::Gaussian { width } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-d2 / (2.0 * width * width)).exp()
            }
        }
    }

    pub fn gram(&self, rows: &[Vec<f64>]) -> DMatrix<f64> {
        let n = rows.len();
        let mut k = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = self.eval(&rows[i], &rows[j]);
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        k
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub kernel: Kernel,
    pub lambda: f64,
}

/// Dual solution of kernel ridge regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRidgeFit {
    pub spec: KernelSpec,
    pub alpha: Vec<f64>,
    /// Diagonal jitter that was needed for the factorization.
    pub jitter: f64,
    pub train: Vec<Vec<f64>>,
}

impl KernelRidgeFit {
    /// f̂(x) = Σ αᵢ k(xᵢ, x).
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.train.iter().zip(&self.alpha).map(|(xi, a)| a * self.spec.kernel.eval(xi, x)).sum()
    }
}

/// Cholesky of `a`, adding jitter·I from 1e-12·trace/n upward by ×10 to 1e-6·trace/n.
fn cholesky_with_jitter(a: &DMatrix<f64>) -> Result<(nalgebra::Cholesky<f64, nalgebra::Dyn>, f64)> {
    if let Some(c) = a.clone().cholesky() {
        return Ok((c, 0.0));
    }
    let n = a.nrows() as f64;
    let base = (a.trace() / n).abs().max(f64::MIN_POSITIVE);
    let mut rel = 1e-12;
    while rel <= 1e-6 * (1.0 + 1e-9) {
        let j = rel * base;
        let shifted = a + DMatrix::identity(a.nrows(), a.ncols()) * j;
        if let Some(c) = shifted.cholesky() {
            return Ok((c, j));
        }
        rel *= 10.0;
    }
    Err(StatError::KernelSpec("Gram matrix is not positive definite even with maximal jitter".into()))
}

/// α = (K + λnI)⁻¹ y.
pub fn kernel_ridge_fit(rows: &[Vec<f64>], y: &[f64], spec: KernelSpec) -> Result<KernelRidgeFit> {
    spec.kernel.validate()?;
    if !(spec.lambda > 0.0 && spec.lambda.is_finite()) {
        return Err(StatError::KernelSpec(format!("lambda must be positive, got {}", spec.lambda)));
    }
    rows_matrix(rows)?;
    let n = rows.len();
    if y.len() != n {
        return Err(StatError::ParameterDomain(format!("{} responses for {n} rows", y.len())));
    }
    let k = spec.kernel.gram(rows);
    let a = k + DMatrix::identity(n, n) * (spec.lambda * n as f64);
    let (chol, jitter) = cholesky_with_jitter(&a)?;
    let alpha = chol.solve(&DVector::from_column_slice(y));
    Ok(KernelRidgeFit {
        spec,
        alpha: alpha.iter().copied().collect(),
        jitter,
        train: rows.to_vec(),
    })
}

/// σ(u) = 1/(1 + e^{−u}), evaluated without overflow.
pub fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// ℓ(u) = ln(1 + e^{−u}).
pub fn logistic_loss(u: f64) -> f64 {
    if u >= 0.0 {
        (-u).exp().ln_1p()
    } else {
        -u + u.exp().ln_1p()
    }
}

/// ℓ′(u) = −σ(−u).
pub fn logistic_loss_derivative(u: f64) -> f64 {
    -sigmoid(-u)
}

/// logit(p) = ln(p/(1 − p)).
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Regularized logistic regression fitted by damped Newton (IRLS) steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    /// Primal weights w, or dual coefficients α when `kernel` is set.
    pub weights: Vec<f64>,
    pub kernel: Option<Kernel>,
    pub lambda: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Objective after each accepted step, starting from the initial point.
    pub objective_trace: Vec<f64>,
    pub train: Vec<Vec<f64>>,
}

impl LogisticFit {
    /// Score u(x) = wᵀx, or Σ αᵢ k(xᵢ, x).
    pub fn score(&self, x: &[f64]) -> f64 {
        match self.kernel {
            None => dot(&self.weights, x),
            Some(k) => self.train.iter().zip(&self.weights).map(|(xi, a)| a * k.eval(xi, x)).sum(),
        }
    }

    /// P(y = +1 | x) = σ(u(x)).
    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(self.score(x))
    }
}

/// The regularized logistic objective and its derivatives.
///
/// Primal: J(w) = (1/n) Σ ℓ(yᵢ xᵢᵀw) + λ‖w‖².
/// Kernel: J(α) = (1/n) Σ ℓ(yᵢ (Kα)ᵢ) + λ αᵀKα.
pub struct LogisticProblem {
    /// X (primal) or K (kernel).
    a: DMatrix<f64>,
    y: DVector<f64>,
    lambda: f64,
    kernelized: bool,
}

impl LogisticProblem {
    pub fn new(rows: &[Vec<f64>], labels: &[f64], lambda: f64, kernel: Option<Kernel>) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(StatError::ParameterDomain(format!("lambda must be positive, got {lambda}")));
        }
        let x = rows_matrix(rows)?;
        if labels.len() != x.nrows() {
            return Err(StatError::ParameterDomain(format!("{} labels for {} rows", labels.len(), x.nrows())));
        }
        if let Some(i) = labels.iter().position(|&v| v != 1.0 && v != -1.0) {
            return Err(StatError::Support(format!("label at row {i} is {}, expected ±1", labels[i])));
        }
        let a = match kernel {
            None => x,
            Some(k) => {
                k.validate()?;
                k.gram(rows)
            }
        };
        Ok(Self {
            a,
            y: DVector::from_column_slice(labels),
            lambda,
            kernelized: kernel.is_some(),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn margins(&self, w: &DVector<f64>) -> DVector<f64> {
        (&self.a * w).component_mul(&self.y)
    }

    fn penalty(&self, w: &DVector<f64>) -> f64 {
        if self.kernelized {
            w.dot(&(&self.a * w))
        } else {
            w.norm_squared()
        }
    }

    pub fn objective(&self, w: &[f64]) -> f64 {
        let w = DVector::from_column_slice(w);
        self.objective_v(&w)
    }

    fn objective_v(&self, w: &DVector<f64>) -> f64 {
        let n = self.y.len() as f64;
        self.margins(w).iter().map(|&m| logistic_loss(m)).sum::<f64>() / n + self.lambda * self.penalty(w)
    }

    // g_i = ∂ℓ(yᵢuᵢ)/∂uᵢ = −yᵢ σ(−yᵢuᵢ)
    fn loss_gradient(&self, w: &DVector<f64>) -> DVector<f64> {
        let m = self.margins(w);
        DVector::from_fn(m.len(), |i, _| -self.y[i] * sigmoid(-m[i]))
    }

    pub fn gradient(&self, w: &[f64]) -> Vec<f64> {
        self.gradient_v(&DVector::from_column_slice(w)).iter().copied().collect()
    }

    fn gradient_v(&self, w: &DVector<f64>) -> DVector<f64> {
        let n = self.y.len() as f64;
        let g = self.loss_gradient(w);
        if self.kernelized {
            &self.a * (g / n + w * (2.0 * self.lambda))
        } else {
            self.a.transpose() * g / n + w * (2.0 * self.lambda)
        }
    }

    /// Newton direction.
    ///
    /// Primal: ((1/n)XᵀWX + 2λI) d = −∇J.
    /// Kernel: (WK + 2λnI) d = −(g + 2λnα), i.e. the reweighted system
    /// (WK + 2λnI) α⁺ = Wz with z = Kα − W⁻¹g.
    fn newton_direction(&self, w: &DVector<f64>) -> Option<DVector<f64>> {
        let n = self.y.len() as f64;
        let m = self.margins(w);
        let wdiag: Vec<f64> = m.iter().map(|&u| sigmoid(u) * sigmoid(-u)).collect();
        let p = self.dim();
        if self.kernelized {
            let g = self.loss_gradient(w);
            let mut h = DMatrix::from_fn(p, p, |i, j| wdiag[i] * self.a[(i, j)]);
            for i in 0..p {
                h[(i, i)] += 2.0 * self.lambda * n;
            }
            let rhs = -(g + w * (2.0 * self.lambda * n));
            h.lu().solve(&rhs)
        } else {
            let mut h = DMatrix::zeros(p, p);
            for (i, &wi) in wdiag.iter().enumerate() {
                let r = self.a.row(i);
                h += r.transpose() * r * (wi / n);
            }
            for i in 0..p {
                h[(i, i)] += 2.0 * self.lambda;
            }
            let grad = self.gradient_v(w);
            h.cholesky().map(|c| c.solve(&(-grad)))
        }
    }
}

/// Damped Newton on the regularized logistic objective.
///
/// Each step is halved (up to 30 times) until the objective does not
/// increase. Stops when ‖∇J‖ < 1e-8 or after 100 iterations; in the latter
/// case `converged` is false.
pub fn logistic_fit_irls(rows: &[Vec<f64>], labels: &[f64], lambda: f64, kernel: Option<Kernel>) -> Result<LogisticFit> {
    let prob = LogisticProblem::new(rows, labels, lambda, kernel)?;
    let mut w = DVector::zeros(prob.dim());
    let mut obj = prob.objective_v(&w);
    let mut trace = vec![obj];
    let mut grad_norm = prob.gradient_v(&w).norm();
    let mut iterations = 0;
    while grad_norm >= IRLS_TOL && iterations < IRLS_MAX_ITER {
        iterations += 1;
        let d = match prob.newton_direction(&w) {
            Some(d) => d,
            None => break,
        };
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=IRLS_MAX_HALVINGS {
            let cand = &w + &d * step;
            let c_obj = prob.objective_v(&cand);
            if c_obj <= obj {
                accepted = Some((cand, c_obj));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, c_obj)) = accepted else { break };
        w = cand;
        obj = c_obj;
        trace.push(obj);
        grad_norm = prob.gradient_v(&w).norm();
    }
    Ok(LogisticFit {
        weights: w.iter().copied().collect(),
        kernel,
        lambda,
        converged: grad_norm < IRLS_TOL,
        iterations,
        gradient_norm: grad_norm,
        objective_trace: trace,
        train: rows.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear_fit() {
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 3.0 * v).collect();
        let d = DesignMatrix::from_columns(&[x], &["x"], true).unwrap();
        let f = ols_fit(&d, &y).unwrap();
        assert!((f.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((f.coefficients[1] - 3.0).abs() < 1e-12);
        assert!(f.sse < 1e-20);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_column_named() {
        let a = vec![1.0, 2.0, 3.0, 5.0];
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v + 1.0).collect();
        let d = DesignMatrix::from_columns(&[a, b], &["a", "b"], true).unwrap();
        match ols_fit(&d, &[1.0, 2.0, 2.0, 4.0]) {
            Err(StatError::SingularDesign { column }) => assert_eq!(column, "b"),
            other => panic!("expected singular design, got {other:?}"),
        }
    }

    #[test]
    fn intercept_only_r2_zero() {
        let d = DesignMatrix::intercept_only(4).unwrap();
        let f = ols_fit(&d, &[1.0, 3.0, 2.0, 6.0]).unwrap();
        assert!(f.r2.abs() < 1e-15);
        assert!((f.coefficients[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn basis_shapes() {
        let x = [0.0, 0.5, 1.0];
        assert_eq!(basis_expand(&x, Basis::Polynomial(0)).unwrap().ncols(), 1);
        assert_eq!(basis_expand(&x, Basis::Polynomial(4)).unwrap().ncols(), 5);
        let s = basis_expand(&x, Basis::Sinusoidal(2)).unwrap();
        assert_eq!(s.labels()[1], "cos(1πx)");
        assert_eq!(s.ncols(), 5);
    }

    #[test]
    fn moment_form() {
        let (a, b) = sulm_moment_form(&SulmMoments { mean_x: 1.0, mean_y: 4.0, var_x: 2.0, cov_xy: 0.0 }).unwrap();
        assert_eq!((a, b), (4.0, 0.0));
        assert!(sulm_moment_form(&SulmMoments { mean_x: 1.0, mean_y: 4.0, var_x: 0.0, cov_xy: 0.0 }).is_err());
    }

    #[test]
    fn sigmoid_identities() {
        for i in -50..=50 {
            let u = i as f64 * 0.37;
            assert!((sigmoid(-u) - (1.0 - sigmoid(u))).abs() < 1e-12);
            assert!((logistic_loss_derivative(u) + sigmoid(-u)).abs() < 1e-15);
        }
        assert_eq!(sigmoid(0.0), 0.5);
        assert_eq!(logit(0.5), 0.0);
    }

    #[test]
    fn kernel_parsing() {
        assert_eq!("gaussian:0.5".parse::<Kernel>().unwrap(), Kernel::Gaussian { width: 0.5 });
        assert!("gaussian:-1".parse::<Kernel>().is_err());
        assert_eq!("poly:3".parse::<Kernel>().unwrap(), Kernel::Polynomial { degree: 3, offset: 1.0 });
    }

    #[test]
    fn one_class_logistic() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, i as f64 * 0.3]).collect();
        let f = logistic_fit_irls(&rows, &[1.0; 6], 1.0, None).unwrap();
        assert!(f.converged);
        assert!(rows.iter().all(|r| f.probability(r) > 0.5));
    }
}
