//! Riemann–Liouville integrals `(1/Γ(a)) ∫_0^t (t−s)^{a−1} X(s) ds` of GCP and
//! GFCP paths: exact path integrals, moments, and the conditional mean.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::clocks::sample_unit_stable;
use crate::error::ensure;
use crate::gcp::{gcp_pmf, MeanVar, OmegaTable, StepPath};
use crate::quad::{tanh_sinh, Tolerance};
use crate::specfun::{beta, gamma, inc_beta, ln_beta};
use crate::{Error, GcpParams, Result};

fn check_order(a: f64) -> Result<()> {
    ensure(a > 0.0 && a.is_finite(), || format!("integration order must be positive, got {a}"))
}

/// The RL integral of a step path, in closed form.
///
/// A jump of size `x` at `e ≤ t` contributes `x (t−e)^a / Γ(a+1)`.
pub fn rl_integral_step(path: &StepPath, a: f64, t: f64) -> Result<f64> {
    check_order(a)?;
    ensure((0.0..=path.horizon()).contains(&t), || {
        format!("t = {t} lies outside the path horizon [0, {}]", path.horizon())
    })?;
    let g = gamma(a + 1.0);
    Ok(path
        .epochs()
        .iter()
        .zip(path.sizes())
        .take_while(|(e, _)| **e <= t)
        .map(|(e, x)| *x as f64 * (t - e).powf(a))
        .sum::<f64>()
        / g)
}

/// Mean `c₁t^{a+1}/Γ(a+2)`, variance `c₂t^{2a+1}/((2a+1)Γ(a+1)²)`.
pub fn fracint_gcp_moments(p: &GcpParams, a: f64, t: f64) -> Result<MeanVar> {
    check_order(a)?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    let g = gamma(a + 1.0);
    Ok(MeanVar {
        mean: p.c1() * t.powf(a + 1.0) / gamma(a + 2.0),
        var: p.c2() * t.powf(2.0 * a + 1.0) / ((2.0 * a + 1.0) * g * g),
    })
}

fn check_beta(b: f64) -> Result<()> {
    ensure(b > 0.0 && b < 1.0, || format!("beta must lie in (0, 1), got {b}"))
}

/// `c₁t^{a+β}/Γ(a+β+1)`.
pub fn fracint_gfcp_mean(p: &GcpParams, a: f64, beta_: f64, t: f64) -> Result<f64> {
    check_order(a)?;
    check_beta(beta_)?;
    Ok(p.c1() * t.powf(a + beta_) / gamma(a + beta_ + 1.0))
}

/// Default absolute tolerance of the double integral in [`fracint_gfcp_variance`].
pub const FRACINT_QUAD_TOL: f64 = 1e-6;

/// Variance of the RL integral of the GFCP.
///
/// Two beta-function terms plus `2c₁²β/(Γ(a)Γ(β+1))² · I` with
/// `I = ∬_{0<s<w<t} (t−s)^{a−1}(t−w)^{a−1} w^{2β} B(β,β+1; s/w) ds dw`,
/// evaluated after `s = wv` as nested tanh-sinh.
pub fn fracint_gfcp_variance(p: &GcpParams, a: f64, beta_: f64, t: f64, tol: f64) -> Result<f64> {
    check_order(a)?;
    check_beta(beta_)?;
    ensure(t > 0.0, || format!("time must be positive, got {t}"))?;
    ensure(tol > 0.0, || format!("tolerance must be positive, got {tol}"))?;
    let (c1, c2) = (p.c1(), p.c2());
    let ga = gamma(a);
    let gb1 = gamma(beta_ + 1.0);
    let term1 = 2.0 * c2 * beta(beta_ + 1.0, 2.0 * a) / (ga * ga * gb1 * a) * t.powf(2.0 * a + beta_);
    let g = gamma(a + beta_ + 1.0);
    let term2 = (2.0 * beta(2.0 * beta_ + 1.0, 2.0 * a) / (ga * ga * gamma(2.0 * beta_ + 1.0) * a)
        - 1.0 / (g * g))
        * c1
        * c1
        * t.powf(2.0 * a + 2.0 * beta_);
    let inner_tol = Tolerance::new(tol * 1e-3, 1e-10);
    let failure = std::cell::Cell::new(None);
    let outer = |w: f64| -> f64 {
        // nodes that round onto an endpoint carry no weight
        if w <= 0.0 || w >= t {
            return 0.0;
        }
        let inner = tanh_sinh(
            |v| {
                let gap = t - w * v;
                if gap <= 0.0 || v >= 1.0 {
                    return 0.0;
                }
                gap.powf(a - 1.0) * inc_beta(beta_, beta_ + 1.0, v).unwrap_or(f64::NAN)
            },
            0.0,
            1.0,
            inner_tol,
        );
        match inner {
            Ok(v) => (t - w).powf(a - 1.0) * w.powf(2.0 * beta_ + 1.0) * v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let integral = tanh_sinh(outer, 0.0, t, Tolerance::new(tol, 1e-10))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let coef = 2.0 * c1 * c1 * beta_ / (ga * gb1).powi(2);
    Ok(term1 + term2 + coef * integral)
}

/// `E[(1/Γ(a))∫_0^t (t−s)^{a−1} M(s) ds | M(t) = n]`.
pub fn fracint_conditional_mean(p: &GcpParams, a: f64, n: u64, t: f64) -> Result<f64> {
    check_order(a)?;
    ensure(t > 0.0, || format!("time must be positive, got {t}"))?;
    let pn = gcp_pmf(p, n, t)?;
    if pn <= 0.0 {
        return Err(Error::ConditioningOnNull(format!("P{{M({t}) = {n}}} = 0")));
    }
    let table = OmegaTable::new(p, n);
    let ln_t = t.ln();
    let mut acc = 0.0;
    for r in 1..=n {
        for (y, wy) in table.weights(r) {
            for (z, wz) in table.weights(n - r) {
                let (yf, zf) = (y as f64, z as f64);
                let ln = wy + wz + (yf + a + zf) * ln_t + ln_beta(yf + 1.0, a + zf) - p.lambda() * t;
                acc += r as f64 * ln.exp();
            }
        }
    }
    Ok(acc / (gamma(a) * pn))
}

/// How the inverse stable clock of a GFCP path is discretized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GfcpClock {
    /// Operational jump `τ` lands at `D(τ)`: exact in distribution.
    Exact,
    /// Inverse of the stable path sampled on a grid of step `h`: jump `τ`
    /// lands at `D` evaluated at the last grid point strictly below `τ`.
    Grid(f64),
}

impl GfcpClock {
    fn anchor(&self, tau: f64) -> f64 {
        match *self {
            GfcpClock::Exact => tau,
            GfcpClock::Grid(h) => ((tau / h).ceil() - 1.0).max(0.0) * h,
        }
    }
}

/// GFCP paths `M(Y_β(·))` on `[0, horizon]`, one per clock, all driven by
/// the same GCP path and the same stable path.
///
/// The stable path is sampled only where some clock needs it, in
/// increasing order, in chunks whose ends lie on every grid.
pub fn simulate_gfcp_paths<R: Rng + ?Sized>(
    p: &GcpParams,
    beta_: f64,
    horizon: f64,
    clocks: &[GfcpClock],
    rng: &mut R,
) -> Result<Vec<StepPath>> {
    check_beta(beta_)?;
    ensure(horizon > 0.0, || format!("horizon must be positive, got {horizon}"))?;
    ensure(!clocks.is_empty(), || "at least one clock is needed".into())?;
    let mut chunk = 1.0f64;
    for c in clocks {
        if let GfcpClock::Grid(h) = *c {
            ensure(h > 0.0, || format!("grid step must be positive, got {h}"))?;
            chunk = chunk.max(h);
        }
    }
    // chunk ends must be grid points of every clock; grids are assumed nested
    let coarse = clocks
        .iter()
        .filter_map(|c| if let GfcpClock::Grid(h) = *c { Some(h) } else { None })
        .fold(0.0f64, f64::max);
    if coarse > 0.0 {
        chunk = coarse * (1.0 / coarse).ceil();
    }
    let exp = Exp::new(p.lambda()).map_err(|e| Error::domain(e.to_string()))?;
    let rates: Vec<f64> = p.rates().to_vec();
    let mut epochs: Vec<Vec<(f64, u64)>> = vec![Vec::new(); clocks.len()];
    let (mut u0, mut d0) = (0.0f64, 0.0f64);
    let mut tau = exp.sample(rng);
    loop {
        let u1 = u0 + chunk;
        let mut jumps = Vec::new();
        while tau <= u1 {
            let pick = rng.random::<f64>() * p.lambda();
            let mut acc = 0.0;
            let mut size = rates.len() as u64;
            for (i, l) in rates.iter().enumerate() {
                acc += l;
                if pick < acc {
                    size = i as u64 + 1;
                    break;
                }
            }
            jumps.push((tau, size));
            tau += exp.sample(rng);
        }
        let mut points: Vec<f64> = jumps
            .iter()
            .flat_map(|(t, _)| clocks.iter().map(move |c| c.anchor(*t)))
            .chain(std::iter::once(u1))
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let mut values = Vec::with_capacity(points.len());
        let (mut u, mut d) = (u0, d0);
        for &q in &points {
            if q > u {
                d += (q - u).powf(1.0 / beta_) * sample_unit_stable(beta_, rng);
                u = q;
            }
            values.push(d);
        }
        let lookup = |q: f64| -> f64 {
            if q <= u0 {
                return d0;
            }
            let i = points.partition_point(|x| *x < q);
            values[i]
        };
        for (c, out) in clocks.iter().zip(epochs.iter_mut()) {
            for &(t, size) in &jumps {
                let e = lookup(c.anchor(t));
                if e <= horizon {
                    out.push((e, size));
                }
            }
        }
        u0 = u1;
        d0 = *values.last().unwrap_or(&d0);
        if d0 > horizon {
            break;
        }
    }
    epochs
        .into_iter()
        .map(|ev| {
            // jumps sharing a real-time epoch merge into one larger jump
            let mut e: Vec<f64> = Vec::with_capacity(ev.len());
            let mut s: Vec<u64> = Vec::with_capacity(ev.len());
            for (t, size) in ev {
                if e.last() == Some(&t) {
                    *s.last_mut().unwrap() += size;
                } else {
                    e.push(t);
                    s.push(size);
                }
            }
            StepPath::new(e, s, horizon)
        })
        .collect()
}

/// `Var` of the RL integral of the GFCP by direct double quadrature of the
/// GFCP covariance; an independent cross-check of [`fracint_gfcp_variance`].
pub fn fracint_gfcp_variance_by_covariance(p: &GcpParams, a: f64, beta_: f64, t: f64) -> Result<f64> {
    use crate::subordinated::gfcp_cov;
    let tol = Tolerance::new(1e-9, 1e-9);
    let ga = gamma(a);
    let v = tanh_sinh(
        |w| {
            if w <= 0.0 || w >= t {
                return 0.0;
            }
            tanh_sinh(
                |s| {
                    if s <= 0.0 {
                        return 0.0;
                    }
                    (t - s).powf(a - 1.0) * gfcp_cov(p, beta_, s.min(w), w).unwrap_or(f64::NAN)
                },
                0.0,
                w,
                tol,
            )
            .unwrap_or(f64::NAN)
                * (t - w).powf(a - 1.0)
        },
        0.0,
        t,
        Tolerance::new(1e-7, 1e-7),
    )?;
    Ok(2.0 * v / (ga * ga))
}
