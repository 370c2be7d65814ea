//! Numerical quadrature used by the analytic oracles.
//!
//! Two rules are provided: globally adaptive Gauss–Kronrod (7/15 points) for
//! integrands with interior structure, and tanh-sinh for integrands with
//! endpoint singularities. Both stop when the error estimate falls below
//! `max(abs_tol, rel_tol * |I|)`.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    let (kron, gauss) = (kron * h, gauss * h);
    if !kron.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok((kron, (kron - gauss).abs()))
}

/// Globally adaptive Gauss–Kronrod quadrature over a finite interval.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    let (mut total, mut err) = (v, e);
    while err > tol.target(total) {
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "adaptive Gauss-Kronrod: error {err:e} after {MAX_INTERVALS} intervals"
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, pv, pe) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution
            return Err(Error::Quadrature(format!(
                "interval [{lo}, {hi}] cannot be bisected further"
            )));
        }
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    // re-sum to shed accumulated rounding from the running updates
    Ok(parts.iter().map(|p| p.2).sum())
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`.
///
/// The integrand is never evaluated at the endpoints, so integrable
/// endpoint singularities are fine.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    tanh_sinh_gap(|x, _| f(x), a, b, tol)
}

// Tanh-sinh where the integrand also receives the distance from `x` to the
// nearer endpoint, computed without cancellation.
fn tanh_sinh_gap<F: Fn(f64, f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let half = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let eval = |u: f64| -> f64 {
        let v = half_pi * u.sinh();
        let cv = v.abs().cosh();
        // distance from the nearer endpoint, in units of `half`
        let delta = 2.0 / ((2.0 * v.abs()).exp() + 1.0);
        let w = half_pi * u.cosh() / (cv * cv);
        let gap = half * delta;
        if gap < f64::MIN_POSITIVE || w == 0.0 {
            return 0.0;
        }
        let x = if u > 0.0 { b - gap } else { a + gap };
        if x < a || x > b {
            return 0.0;
        }
        w * f(x, gap)
    };
    const U_MAX: f64 = 6.5;
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= U_MAX {
        let u = k as f64 * h;
        sum += eval(u) + eval(-u);
        k += 1;
    }
    let mut estimate = half * h * sum;
    for level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        let mut add = 0.0;
        while (k as f64) * h <= U_MAX {
            let u = k as f64 * h;
            add += eval(u) + eval(-u);
            k += 2;
        }
        sum += add;
        let next = half * h * sum;
        if !next.is_finite() {
            return Err(Error::Quadrature("non-finite tanh-sinh sum".into()));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= tol.target(estimate) && level >= 2 {
            return Ok(estimate);
        }
    }
    Err(Error::Quadrature(format!(
        "tanh-sinh did not reach tolerance on [{a}, {b}]"
    )))
}

/// Integral over `[a, ∞)` via `x = a + u / (1 − u)` and tanh-sinh in `u`.
pub fn semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> Result<f64> {
    tanh_sinh_gap(
        |u, gap| {
            // near u = 1 the gap is 1 − u exactly
            let one_minus = if u > 0.5 { gap } else { 1.0 - u };
            let x = a + u / one_minus;
            if !x.is_finite() {
                return 0.0;
            }
            let v = f(x);
            // far out an integrable f can only be 0; this catches inf·0 = NaN
            if v == 0.0 || (!v.is_finite() && x > 1e30) {
                0.0
            } else {
                v / one_minus / one_minus
            }
        },
        0.0,
        1.0,
        tol,
    )
}
