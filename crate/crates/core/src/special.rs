//! Special functions.
//!
//! The error function comes from `libm` (the `statrs` version is only good
//! to about 1e-10). Log-gamma and the regularized incomplete gamma/beta
//! functions come from `statrs`. The standard normal quantile, the
//! Student-t distribution and exact small binomial coefficients live here.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Result, StatError};

pub use statrs::function::beta::{beta_reg, ln_beta};
pub use libm::{erf, erfc};
pub use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Largest `n` for which binomial coefficients are computed in exact integer arithmetic.
pub const EXACT_COEFF_LIMIT: u64 = 20;

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Φ(x).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// 1 − Φ(x), without cancellation in the upper tail.
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

// Acklam's rational approximation, relative error 1.15e-9 before refinement.
const ACKLAM_A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const ACKLAM_B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const ACKLAM_C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const ACKLAM_D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

fn acklam(p: f64) -> f64 {
    const P_LOW: f64 = 0.02425;
    let (a, b, c, d) = (&ACKLAM_A, &ACKLAM_B, &ACKLAM_C, &ACKLAM_D);
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    }
}

/// Φ⁻¹(p) for p in (0, 1): Acklam's approximation followed by one Halley step.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatError::Domain(format!("normal quantile needs 0 < u < 1, got {p}")));
    }
    let x = acklam(p);
    // residual taken on the smaller tail to keep relative precision
    let e = if p < 0.5 {
        std_normal_cdf(x) - p
    } else {
        (1.0 - p) - std_normal_sf(x)
    };
    let u = e * SQRT_2PI * (0.5 * x * x).exp();
    Ok(x - u / (1.0 + 0.5 * x * u))
}

/// Binomial coefficient in exact integer arithmetic; `None` above [`EXACT_COEFF_LIMIT`].
pub fn choose_exact(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    if n > EXACT_COEFF_LIMIT {
        return None;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1)
        acc = acc * (n - i) / (i + 1);
    }
    Some(acc)
}

pub fn ln_factorial(n: u64) -> f64 {
    if n <= EXACT_COEFF_LIMIT {
        let mut acc: u64 = 1;
        for i in 2..=n {
            acc *= i;
        }
        (acc as f64).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln C(n, k); exact below the cutoff, log-gamma above. −∞ when k > n.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    match choose_exact(n, k) {
        Some(c) => (c as f64).ln(),
        None => ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0),
    }
}

/// Numerically safe log(Σ exp(xᵢ)).
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

// P(0 < T < t) for t ≥ 0, from whichever incomplete-beta argument keeps t² resolved.
fn t_central(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    let x = df / (df + t2);
    if x < 0.5 {
        0.5 - 0.5 * beta_reg(0.5 * df, 0.5, x)
    } else {
        0.5 * beta_reg(0.5, 0.5 * df, t2 / (df + t2))
    }
}

// P(T > t) for t ≥ 0.
fn t_upper(t: f64, df: f64) -> f64 {
    let x = df / (df + t * t);
    if x < 0.5 {
        0.5 * beta_reg(0.5 * df, 0.5, x)
    } else {
        0.5 - t_central(t, df)
    }
}

/// CDF of Student's t with `df` degrees of freedom, via the regularized incomplete beta.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let tail = t_upper(t.abs(), df);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Student-t quantile by inverting the incomplete-beta form of the CDF.
pub fn student_t_quantile(u: f64, df: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(StatError::Domain(format!("t quantile needs 0 < u < 1, got {u}")));
    }
    if !(df > 0.0) {
        return Err(StatError::ParameterDomain(format!("degrees of freedom must be positive, got {df}")));
    }
    if u == 0.5 {
        return Ok(0.0);
    }
    // solve on the upper half and reflect; near the centre match the central
    // mass |u − 0.5| instead of the tail so small t keeps full precision
    let (f, target): (Box<dyn Fn(f64) -> f64>, f64) = if (u - 0.5).abs() < 0.25 {
        (Box::new(move |t| -t_central(t, df)), -(u - 0.5).abs())
    } else {
        (Box::new(move |t| t_upper(t, df)), if u > 0.5 { 1.0 - u } else { u })
    };
    // f is decreasing in t ≥ 0
    let mut hi = 1.0;
    while f(hi) > target {
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    let mut lo = 0.0;
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(if u > 0.5 { t } else { -t })
}

/// Lower regularized incomplete gamma P(a, x), clamped to [0, 1].
pub fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        gamma_lr(a, x).clamp(0.0, 1.0)
    }
}

/// Regularized incomplete beta I_x(a, b), clamped to [0, 1].
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        beta_reg(a, b, x).clamp(0.0, 1.0)
    }
}
