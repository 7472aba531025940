//! Adaptive Simpson quadrature with endpoint substitutions.

const MAX_DEPTH: u32 = 48;
const MIN_DEPTH: u32 = 5;

/// How an endpoint of a finite interval should be treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoints {
    /// Integrand is bounded at both ends.
    Regular,
    /// Integrand may blow up like |x − end|^(−1/2) or milder at either end.
    Singular,
}

// Evaluate g at t, falling back to a point nudged towards `inward` when the
// value at t itself is not finite (e.g. 0·∞ at a mapped endpoint).
fn eval_safe<F: Fn(f64) -> f64>(g: &F, t: f64, inward: f64) -> f64 {
    let v = g(t);
    if v.is_finite() {
        return v;
    }
    let nudged = t + (inward - t) * 1e-10;
    let w = g(nudged);
    if w.is_finite() {
        w
    } else {
        0.0
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    g: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = g(lm);
    let frm = g(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || (depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        + simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}

/// Adaptive Simpson on a finite interval with absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -simpson(f, b, a, tol);
    }
    let g = |t: f64| {
        let v = f(t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let fa = eval_safe(&f, a, b);
    let fb = eval_safe(&f, b, a);
    let m = 0.5 * (a + b);
    let fm = g(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(&g, a, b, fa, fm, fb, whole, tol, 0)
}

/// Finite interval where the integrand may be singular at the ends.
///
/// Uses x = a + (b − a)(3s² − 2s³), whose derivative vanishes at both ends.
pub fn simpson_singular_ends<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let w = b - a;
    let g = |s: f64| {
        let x = a + w * s * s * (3.0 - 2.0 * s);
        let jac = 6.0 * w * s * (1.0 - s);
        if jac == 0.0 {
            return 0.0;
        }
        f(x) * jac
    };
    simpson(g, 0.0, 1.0, tol)
}

/// Integral over [a, b] where either bound may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, ends: Endpoints) -> f64 {
    integrate_dyn(&f, a, b, tol, ends)
}

fn finite_part(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, ends: Endpoints) -> f64 {
    match ends {
        Endpoints::Regular => simpson(g, a, b, tol),
        Endpoints::Singular => simpson_singular_ends(g, a, b, tol),
    }
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, ends: Endpoints) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -integrate_dyn(f, b, a, tol, ends);
    }
    match (a.is_infinite(), b.is_infinite()) {
        (false, false) => finite_part(f, a, b, tol, ends),
        // x = a + t / (1 − t)
        (false, true) => finite_part(
            &|t: f64| {
                let one_m = 1.0 - t;
                f(a + t / one_m) / (one_m * one_m)
            },
            0.0,
            1.0,
            tol,
            ends,
        ),
        (true, false) => finite_part(
            &|t: f64| {
                let one_m = 1.0 - t;
                f(b - t / one_m) / (one_m * one_m)
            },
            0.0,
            1.0,
            tol,
            ends,
        ),
        (true, true) => {
            integrate_dyn(f, f64::NEG_INFINITY, 0.0, 0.5 * tol, ends)
                + integrate_dyn(f, 0.0, f64::INFINITY, 0.5 * tol, ends)
        }
    }
}

/// Integral over consecutive pieces `[breaks[i], breaks[i+1]]`.
///
/// Breakpoints mark kinks or singularities; each piece is integrated with
/// singular-end handling so integrable endpoint blow-ups are tolerated.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> f64 {
    if breaks.len() < 2 {
        return 0.0;
    }
    let pieces = (breaks.len() - 1) as f64;
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| integrate(&f, w[0], w[1], tol / pieces, Endpoints::Singular))
        .sum()
}
